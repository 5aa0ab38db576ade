"""Signpost (divisor) sequences d(1) <= d(2) <= ... defining divisor methods.

A number x is rounded to the seat count n with d(n) <= x <= d(n+1), so the
signposts are the boundaries between n-1 and n seats.  Families provided:

* ``linear(beta)``        d(n) = n - 1 + beta, beta >= 0
* ``clipped_linear(beta)``d(n) = max(0, n - 1 + beta), beta < 0
* ``power(e)``            d(n) = n**e
* ``geometric(r)``        d(n) = r**(n-1)
* ``sqrt_pair_product()`` d(n) = sqrt(n(n-1))
* ``harmonic_pair()``     d(n) = 2n(n-1)/(2n-1)
* ``table(values, ...)``  explicit values, optionally capped or continued
                          with a linear tail

Each sequence declares an exactness class that decides how comparative
figures v/d(n) are compared:

* RATIONAL           exact ``Fraction`` comparisons
* SQUARED_RATIONAL   figures compared through their exact squares
                     (v/sqrt(n(n-1)) squared is rational)
* FLOAT              float comparisons; callers flag near-ties instead of
                     trusting equality
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import CapExceededError, InputError

INF = math.inf

LINEAR = "linear"
CLIPPED_LINEAR = "clipped_linear"
POWER = "power"
GEOMETRIC = "geometric"
SQRT_PAIR = "sqrt_pair_product"
HARMONIC_PAIR = "harmonic_pair"
TABLE = "table"


class Exactness(enum.Enum):
    RATIONAL = "rational"
    SQUARED_RATIONAL = "squared-rational"
    FLOAT = "float"


def _exact_or_float(x):
    """Keep ints/Fractions exact; leave floats as floats."""
    if isinstance(x, bool):
        raise InputError(f"{x!r} is not a number")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise InputError(f"{x!r} is not a rational or float")


@dataclass(frozen=True)
class SignpostSequence:
    """One member of the signpost families above; use the classmethods."""

    kind: str
    beta: Fraction | float | None = None
    exponent: float | None = None
    ratio: Fraction | float | None = None
    values: tuple[Fraction | float, ...] | None = None
    cap: int | None = None
    tail_beta: Fraction | float | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def linear(cls, beta) -> "SignpostSequence":
        b = _exact_or_float(beta)
        if b < 0:
            raise InputError("linear signposts need beta >= 0; use clipped_linear")
        return cls(LINEAR, beta=b)

    @classmethod
    def clipped_linear(cls, beta) -> "SignpostSequence":
        b = _exact_or_float(beta)
        if b >= 0:
            raise InputError("clipped_linear is meant for beta < 0")
        return cls(CLIPPED_LINEAR, beta=b)

    @classmethod
    def power(cls, exponent: float) -> "SignpostSequence":
        e = float(exponent)
        if e <= 0:
            raise InputError("power signposts need a positive exponent")
        return cls(POWER, exponent=e)

    @classmethod
    def geometric(cls, ratio) -> "SignpostSequence":
        r = _exact_or_float(ratio)
        if r <= 1:
            raise InputError("geometric signposts need ratio > 1")
        return cls(GEOMETRIC, ratio=r)

    @classmethod
    def sqrt_pair_product(cls) -> "SignpostSequence":
        return cls(SQRT_PAIR)

    @classmethod
    def harmonic_pair(cls) -> "SignpostSequence":
        return cls(HARMONIC_PAIR)

    @classmethod
    def table(cls, values, cap: int | None = None, tail_beta=None) -> "SignpostSequence":
        vals = tuple(_exact_or_float(v) for v in values)
        if not vals:
            raise InputError("table needs at least one signpost")
        if vals[0] < 0:
            raise InputError("signposts must be nonnegative")
        for a, b in zip(vals, vals[1:]):
            if b < a or (a > 0 and b == a):
                raise InputError("signposts must be nondecreasing and strictly increasing once positive")
        if cap is not None:
            if tail_beta is not None:
                raise InputError("cap and tail_beta are mutually exclusive")
            if not 1 <= cap <= len(vals):
                raise InputError("cap must index into the table")
        if tail_beta is not None:
            tb = _exact_or_float(tail_beta)
            first_tail = len(vals) + tb  # d(len+1) = (len+1) - 1 + tail_beta
            if first_tail <= vals[-1] and not (vals[-1] == 0 and first_tail == 0):
                raise InputError("linear tail must continue increasing past the table")
            return cls(TABLE, values=vals, tail_beta=tb)
        return cls(TABLE, values=vals, cap=cap if cap is not None else len(vals))

    # -- evaluation ----------------------------------------------------

    def value(self, n: int):
        """d(n) for n >= 0, with d(0) = 0.  Beyond a capped table: +inf."""
        if n < 0:
            raise InputError("signposts are indexed from 0")
        if n == 0:
            return Fraction(0) if self.exactness is not Exactness.FLOAT else 0.0
        if self.kind == LINEAR:
            return n - 1 + self.beta
        if self.kind == CLIPPED_LINEAR:
            raw = n - 1 + self.beta
            return raw if raw > 0 else type(raw)(0)
        if self.kind == POWER:
            return float(n) ** self.exponent
        if self.kind == GEOMETRIC:
            return self.ratio ** (n - 1)
        if self.kind == SQRT_PAIR:
            return math.sqrt(n * (n - 1))
        if self.kind == HARMONIC_PAIR:
            return Fraction(2 * n * (n - 1), 2 * n - 1)
        if self.kind == TABLE:
            if n <= len(self.values):
                if self.cap is not None and n > self.cap:
                    return INF
                return self.values[n - 1]
            if self.tail_beta is not None:
                return n - 1 + self.tail_beta
            return INF
        raise AssertionError(self.kind)

    @property
    def exactness(self) -> Exactness:
        if self.kind in (LINEAR, CLIPPED_LINEAR):
            return Exactness.RATIONAL if isinstance(self.beta, Fraction) else Exactness.FLOAT
        if self.kind == HARMONIC_PAIR:
            return Exactness.RATIONAL
        if self.kind == GEOMETRIC:
            return Exactness.RATIONAL if isinstance(self.ratio, Fraction) else Exactness.FLOAT
        if self.kind == SQRT_PAIR:
            return Exactness.SQUARED_RATIONAL
        if self.kind == TABLE:
            entries = list(self.values)
            if self.tail_beta is not None:
                entries.append(self.tail_beta)
            if all(isinstance(v, Fraction) for v in entries):
                return Exactness.RATIONAL
            return Exactness.FLOAT
        return Exactness.FLOAT

    def zero_count(self) -> int:
        """Number of indices n >= 1 with d(n) = 0 (mandatory seats per party)."""
        if self.kind == LINEAR:
            return 1 if self.beta == 0 else 0
        if self.kind == CLIPPED_LINEAR:
            # d(n) = 0 iff n <= 1 - beta
            return math.floor(1 - self.beta)
        if self.kind in (SQRT_PAIR, HARMONIC_PAIR):
            return 1
        if self.kind == TABLE:
            return sum(1 for v in self.values if v == 0)
        return 0

    def max_seats(self) -> int | None:
        """Largest per-party seat count (None when unbounded)."""
        if self.kind == TABLE and self.tail_beta is None:
            return self.cap
        return None

    # -- asymptotic / bound metadata ------------------------------------

    def asymptotic_beta(self):
        """beta with d(n) = n - 1 + beta + o(1), or None if not linear-like."""
        if self.kind in (LINEAR, CLIPPED_LINEAR):
            return self.beta
        if self.kind in (SQRT_PAIR, HARMONIC_PAIR):
            return Fraction(1, 2)
        if self.kind == TABLE and self.tail_beta is not None:
            return self.tail_beta
        return None

    def beta_envelope(self):
        """(lo, hi) with n - 1 + lo <= d(n) <= n - 1 + hi for all n >= 1,
        or None when no such finite envelope exists."""
        if self.kind in (LINEAR, CLIPPED_LINEAR):
            return (self.beta, self.beta)
        if self.kind in (SQRT_PAIR, HARMONIC_PAIR):
            # offsets d(n)-(n-1) increase from 0 towards 1/2
            return (Fraction(0), Fraction(1, 2))
        if self.kind == TABLE and self.tail_beta is not None:
            offsets = [v - n for n, v in enumerate(self.values)] + [self.tail_beta]
            return (min(offsets), max(offsets))
        return None

    # -- comparative figures --------------------------------------------
    #
    # figure(v, n) is a value monotone in v/d(n) that compares exactly within
    # one allocation: the plain quotient (RATIONAL/FLOAT) or its square
    # (SQUARED_RATIONAL).  d(n) = 0 maps to +inf, d(n) = +inf maps to 0.

    def figure(self, v, n: int):
        d = self.value(n)
        if d == INF:
            return 0
        if d == 0:
            return INF
        if self.kind == SQRT_PAIR:
            if isinstance(v, Fraction):
                return v * v / (n * (n - 1))
            return float(v) * float(v) / (n * (n - 1))
        if isinstance(v, Fraction) and isinstance(d, Fraction):
            return v / d
        return float(v) / float(d)

    def figure_of_divisor(self, divisor):
        """Map a divisor value into figure space."""
        if divisor == INF:
            return INF
        if self.kind == SQRT_PAIR:
            return divisor * divisor
        return divisor

    def divisor_of_figure(self, fig):
        """Map a figure back to a divisor value (float for squared space)."""
        if fig == INF:
            return INF
        if self.kind == SQRT_PAIR:
            return math.sqrt(fig)
        return fig

    def seats_for_quotient(self, x) -> tuple[int, int]:
        """(n_strict, n_max): seat counts below/at a quotient value x > 0.

        n_max = max{n : d(n) <= x}; n_strict excludes indices with d(n) = x
        exactly, so a d-rounding of x is any n in [n_strict, n_max].
        """
        if not x > 0:
            raise InputError("quotient must be positive")
        if self.kind == SQRT_PAIR and isinstance(x, Fraction):
            # compare in squared space to stay exact
            xx = x * x

            def le(n):  # d(n) <= x
                return n * (n - 1) <= xx

            def eq(n):
                return n * (n - 1) == xx
        else:

            def le(n):
                return self.value(n) <= x

            def eq(n):
                return self.value(n) == x

        cap = self.max_seats()
        if cap is not None and self.value(cap) < x:
            raise CapExceededError(f"{x!r} lies beyond the last finite signpost d({cap})")
        lo, hi = 0, 1
        while le(hi):
            hi *= 2
            if cap is not None and hi > cap:
                hi = cap + 1
                break
        # invariant: d(lo) <= x < d(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if le(mid):
                lo = mid
            else:
                hi = mid
        n_max = lo
        n_strict = n_max - 1 if (n_max >= 1 and eq(n_max)) else n_max
        return n_strict, n_max
