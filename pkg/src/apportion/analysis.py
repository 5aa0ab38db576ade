"""Goodness-of-fit functionals and brute-force minimizer oracles.

Each supported election method minimizes a divergence between seats and
exact proportionality: Webster the share-weighted least squares
sum(excess^2 / p), Hamilton the plain sum of squares as well as max |excess|
(and any convex per-party penalty), Jefferson max(excess / p), Adams
-min(excess / p).  The oracle enumerates every seat vector and returns the
exact argmin set so those identities can be checked instance by instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, inf

from .allocation import Allocation, allocate
from .errors import DimensionMismatchError, InputError, InstanceTooLargeError
from .methods import Method, TiePolicy
from .weights import PartyWeights

SAINTE_LAGUE = "sainte_lague"
SUM_SQUARES = "sum_squares"
MAX_ABS = "max_abs"
MAX_POS = "max_pos"
JEFFERSON = "jefferson"
ADAMS = "adams"
PER_SEAT = "per_seat"
FOURTH_POWER = "fourth_power"

FUNCTIONALS = (SAINTE_LAGUE, SUM_SQUARES, MAX_ABS, MAX_POS, JEFFERSON, ADAMS, FOURTH_POWER)


@dataclass(frozen=True)
class DivergenceValues:
    """The misfit functionals of one allocation (exact for rational input).

    ``per_seat`` is the least-squares misfit weighted per seat instead of per
    voter; it is informational only and infinite when a party with a nonzero
    excess holds no seats.
    """

    sainte_lague: Fraction | float
    sum_squares: Fraction | float
    max_abs: Fraction | float
    max_pos: Fraction | float
    jefferson: Fraction | float
    adams: Fraction | float
    per_seat: Fraction | float

    def by_name(self, name: str):
        if name == FOURTH_POWER:
            raise InputError("fourth_power is oracle-only; use divergence_value")
        return getattr(self, name)


def _delta(seats, weights: PartyWeights, house_size: int):
    return [s - house_size * p for s, p in zip(seats, weights.shares)]


def divergences(weights: PartyWeights, allocation: Allocation) -> DivergenceValues:
    """All misfit functionals of the allocation's primary seat vector."""
    if len(weights) != allocation.m:
        raise DimensionMismatchError("allocation and weights disagree on party count")
    delta = _delta(allocation.seats, weights, allocation.house_size)
    shares = weights.shares
    per_seat = Fraction(0) if weights.exact else 0.0
    for d, s in zip(delta, allocation.seats):
        if s == 0:
            if d != 0:
                per_seat = inf
                break
            continue
        per_seat += d * d / s
    return DivergenceValues(
        sainte_lague=sum(d * d / p for d, p in zip(delta, shares)),
        sum_squares=sum(d * d for d in delta),
        max_abs=max(abs(d) for d in delta),
        max_pos=max(delta),
        jefferson=max(d / p for d, p in zip(delta, shares)),
        adams=-min(d / p for d, p in zip(delta, shares)),
        per_seat=per_seat,
    )


def divergence_value(name: str, seats, weights: PartyWeights, house_size: int):
    """One functional evaluated on a raw seat vector (oracle entry point)."""
    delta = _delta(seats, weights, house_size)
    shares = weights.shares
    if name == SAINTE_LAGUE:
        return sum(d * d / p for d, p in zip(delta, shares))
    if name == SUM_SQUARES:
        return sum(d * d for d in delta)
    if name == MAX_ABS:
        return max(abs(d) for d in delta)
    if name == MAX_POS:
        return max(delta)
    if name == JEFFERSON:
        return max(d / p for d, p in zip(delta, shares))
    if name == ADAMS:
        return -min(d / p for d, p in zip(delta, shares))
    if name == FOURTH_POWER:
        return sum(d**4 for d in delta)
    raise InputError(f"unknown divergence functional {name!r}")


def _compositions(total: int, parts: int):
    """All seat vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_force_min(
    functional: str,
    weights: PartyWeights,
    house_size: int,
    limit: int = 10_000_000,
) -> set[tuple[int, ...]]:
    """Exact argmin set of a functional over every seat vector."""
    m = len(weights)
    if house_size < 0:
        raise InputError("house size must be nonnegative")
    n_vectors = comb(house_size + m - 1, m - 1)
    if n_vectors > limit:
        raise InstanceTooLargeError(
            f"{n_vectors} seat vectors exceed the enumeration limit {limit}"
        )
    best = None
    argmin: set[tuple[int, ...]] = set()
    for seats in _compositions(house_size, m):
        val = divergence_value(functional, seats, weights, house_size)
        if best is None or val < best:
            best = val
            argmin = {seats}
        elif val == best:
            argmin.add(seats)
    return argmin


@dataclass(frozen=True)
class MinimizerCheck:
    """Outcome of one method-vs-functional argmin comparison."""

    passed: bool
    method_orbit: frozenset
    argmin: frozenset

    @property
    def witness(self) -> tuple[int, ...] | None:
        """A seat vector in the symmetric difference (None when passed)."""
        if self.passed:
            return None
        diff = self.method_orbit.symmetric_difference(self.argmin)
        return min(diff)


def method_orbit(method: Method, weights: PartyWeights, house_size: int) -> frozenset:
    """Every seat vector the method can output (primary plus tie alternatives)."""
    alloc = allocate(method, weights, house_size, TiePolicy.enumerate_all(max_alternatives=10_000_000))
    return frozenset({alloc.seats} | set(alloc.ties))


def verify_minimizer_identity(
    method: Method,
    functional: str,
    weights: PartyWeights,
    house_size: int,
    limit: int = 10_000_000,
) -> MinimizerCheck:
    """Check that the method's tie orbit equals the functional's argmin set."""
    orbit = method_orbit(method, weights, house_size)
    argmin = frozenset(brute_force_min(functional, weights, house_size, limit))
    return MinimizerCheck(orbit == argmin, orbit, argmin)
