"""Exact tail probabilities for sums of independent uniform variables.

The marginal limit of the seat excess is a shifted sum of one U(-1/2, 1/2)
and m-2 scaled copies; its distribution is piecewise polynomial, so quota
violation probabilities P(excess <= -1) and P(excess >= 1) have exact
rational values.  Everything here runs in ``Fraction`` arithmetic (floats
are converted exactly) to dodge the catastrophic cancellation the
inclusion-exclusion formula invites.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from numbers import Rational

import numpy as np

from .errors import InputError, UnsupportedMethodError
from .methods import DivisorMethod, Method


def _exact(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x))


def uniform_sum_cdf(s, widths) -> Fraction:
    """P(sum_k U(0, a_k) <= s), exact.

    Inclusion-exclusion over the box corners: the volume below the plane
    sum u_k = s inside the box prod [0, a_k].
    """
    a = [_exact(w) for w in widths]
    if any(w <= 0 for w in a):
        raise InputError("widths must be positive")
    n = len(a)
    s = _exact(s)
    total = sum(a)
    if s <= 0:
        return Fraction(0)
    if s >= total:
        return Fraction(1)
    acc = Fraction(0)
    # subsets only matter through their width sum; group equal widths
    groups: dict[Fraction, int] = {}
    for w in a:
        groups[w] = groups.get(w, 0) + 1
    offsets = [(Fraction(0), 1, 1)]  # (subset width sum, multiplicity, sign)
    for w, count in groups.items():
        new = []
        for base, mult, sign in offsets:
            for j in range(count + 1):
                new.append((base + j * w, mult * comb(count, j), sign * (-1) ** j))
        offsets = new
    for base, mult, sign in offsets:
        rest = s - base
        if rest > 0:
            acc += sign * mult * rest**n
    denom = factorial(n)
    for w in a:
        denom *= w
    return acc / denom


def irwin_hall_cdf(x, n: int) -> np.ndarray:
    """CDF of the sum of n independent U(0,1), vectorized over x (float)."""
    if n < 1:
        raise InputError("need at least one uniform term")
    x = np.asarray(x, dtype=float)
    acc = np.zeros_like(x)
    for j in range(n + 1):
        acc += (-1.0) ** j * comb(n, j) * np.clip(x - j, 0.0, None) ** n
    return np.clip(acc / factorial(n), 0.0, 1.0)


def _marginal_parameters(method: Method, p_i, m: int):
    """(bias, widths) of the marginal excess limit, exact."""
    if m < 2:
        raise InputError("need at least two parties")
    pi = _exact(p_i)
    if not 0 < pi < 1:
        raise InputError("share must lie strictly between 0 and 1")
    if isinstance(method, DivisorMethod):
        beta = method.signposts.asymptotic_beta()
        if beta is None:
            raise UnsupportedMethodError(
                f"no marginal limit for {method.signposts.kind} signposts"
            )
        bias = (_exact(beta) - Fraction(1, 2)) * (m * pi - 1)
        scale = pi
    else:
        gamma = _exact(method.gamma)
        bias = gamma * (pi - Fraction(1, m))
        scale = Fraction(1, m)
    widths = [Fraction(1)] + [scale] * (m - 2)
    return bias, widths


def violation_probability(method: Method, p_i, m: int) -> tuple[float, float]:
    """(P(lower quota violated), P(upper quota violated)) asymptotically.

    Lower violation means excess <= -1, upper means excess >= 1; both are
    exact integrals of the piecewise-polynomial marginal limit density.
    """
    bias, widths = _marginal_parameters(method, p_i, m)
    total = sum(widths)
    half = total / 2
    # excess = bias - half + S with S = sum U(0, a_k)
    lower = uniform_sum_cdf(half - 1 - bias, widths)
    upper = uniform_sum_cdf(half - 1 + bias, widths)  # symmetry of S about half
    return float(lower), float(upper)
