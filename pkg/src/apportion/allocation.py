"""Seat allocation for divisor and quota methods, with exact tie handling.

Divisor allocation awards seats sequentially to the largest comparative
figure v_i / d(s_i + 1); an independent formulation searches for a divisor D
with sum_i round_d(v_i / D) = house_size and exists to cross-validate the
first.  Quota allocation floors the ideal shares (house + gamma) * p_i and
hands remaining seats to the largest fractional parts, generalized so any
real gamma works even when the raw remainder is negative or exceeds the
party count.

Ties are detected exactly for rational arithmetic classes and reported as a
single tied rank class: ``grants`` of the ``parties`` in the class receive
one extra seat each, in any combination.  Float arithmetic flags near-ties
(relative gap below 1e-12) instead of guessing an orbit.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from numbers import Rational

from .errors import (
    CapExceededError,
    DimensionMismatchError,
    InfeasibleHouseSizeError,
    NegativeSeatError,
    NonpositiveQuotaError,
)
from .methods import DEFAULT_TIES, DivisorMethod, Method, TiePolicy
from .signposts import INF, Exactness, SignpostSequence
from .weights import PartyWeights

NEAR_TIE_RTOL = 1e-12


# -- rounding primitives --------------------------------------------------


def alpha_round(x, alpha):
    """Round x to the integer n with x - alpha <= n <= x - alpha + 1.

    Returns the unique n, or the pair (n, n+1) when x - alpha is an integer
    (alpha = 1/2 is standard rounding, 0 rounds up, 1 rounds down).
    """
    shifted = x - alpha
    lo = floor(shifted)
    if shifted == lo:
        return (lo, lo + 1)
    return lo + 1


def d_round(x, signposts: SignpostSequence):
    """Round x > 0 to the seat count n with d(n) <= x <= d(n+1).

    Returns the unique n, or the pair (n-1, n) when x = d(n) exactly.
    Raises CapExceededError for x beyond a capped table's last signpost.
    """
    n_strict, n_max = signposts.seats_for_quotient(x)
    if n_strict != n_max:
        return (n_strict, n_max)
    return n_max


# -- result types ----------------------------------------------------------


@dataclass(frozen=True)
class TieInfo:
    """One tied rank class: ``grants`` of ``parties`` get one extra seat.

    ``base_seats`` are the tied parties' seat counts excluding the contested
    grant; ``orbit_size`` counts every resolution.  ``near`` marks a float
    near-tie where the class could not be resolved exactly.
    """

    parties: tuple[int, ...]
    grants: int
    base_seats: tuple[int, ...]
    orbit_size: int
    truncated: bool = False
    near: bool = False


@dataclass(frozen=True)
class Allocation:
    """A seat vector plus tie descriptor and feasible parameter interval.

    ``support_interval`` holds the feasible divisors [D-, D+] for divisor
    methods and the feasible rounding offsets [alpha-, alpha+] for quota
    methods.
    """

    seats: tuple[int, ...]
    house_size: int
    ties: tuple[tuple[int, ...], ...] = ()
    tie_info: TieInfo | None = None
    support_interval: tuple = (None, None)

    def __post_init__(self):
        if sum(self.seats) != self.house_size:
            raise AssertionError("seat vector does not sum to the house size")

    @property
    def m(self) -> int:
        return len(self.seats)

    @property
    def tied(self) -> bool:
        return self.tie_info is not None

    def expected_seats(self) -> tuple:
        """Seat counts averaged uniformly over the tie orbit (exact).

        Each tied party holds its base seats plus grants/len(parties); without
        a resolvable tie this is just the primary vector.
        """
        ti = self.tie_info
        if ti is None or ti.near:
            return self.seats
        share = Fraction(ti.grants, len(ti.parties))
        expected = list(map(Fraction, self.seats))
        for party, base in zip(ti.parties, ti.base_seats):
            expected[party] = base + share
        return tuple(expected)


@dataclass(frozen=True)
class SeatExcess:
    """Per-party deviation s_i - house_size * p_i; sums to zero exactly."""

    delta: tuple


@dataclass(frozen=True)
class QuotaFlags:
    lower: bool
    upper: bool


def seat_excess(allocation: Allocation, weights: PartyWeights) -> SeatExcess:
    """Seat excess of the primary vector, exact for rational weights."""
    if len(weights) != allocation.m:
        raise DimensionMismatchError("allocation and weights disagree on party count")
    n = allocation.house_size
    return SeatExcess(tuple(s - n * p for s, p in zip(allocation.seats, weights.shares)))


def quota_satisfaction(allocation: Allocation, weights: PartyWeights) -> tuple[QuotaFlags, ...]:
    """Lower/upper quota flags: floor(q_i) <= s_i <= ceil(q_i)."""
    if len(weights) != allocation.m:
        raise DimensionMismatchError("allocation and weights disagree on party count")
    n = allocation.house_size
    flags = []
    for s, p in zip(allocation.seats, weights.shares):
        q = n * p
        flags.append(QuotaFlags(lower=s >= floor(q), upper=s <= -floor(-q)))
    return tuple(flags)


# -- shared tie machinery ---------------------------------------------------


def _is_exact(weights: PartyWeights, sp: SignpostSequence) -> bool:
    return weights.exact and sp.exactness is not Exactness.FLOAT


def _resolve_orbit(primary_grant: tuple[int, ...], ti: TieInfo, policy: TiePolicy, seats: list[int]):
    """Apply the tie policy: pick the primary grant set, list alternatives."""
    parties, k = ti.parties, ti.grants
    if policy.kind == "random":
        rng = random.Random(policy.seed)
        grant = tuple(sorted(rng.sample(parties, k)))
    else:
        grant = primary_grant
    base = dict(zip(parties, ti.base_seats))
    vec = list(seats)
    for p in parties:
        vec[p] = base[p] + (1 if p in grant else 0)

    alternatives = []
    truncated = False
    if ti.orbit_size > 1:
        limit = policy.max_alternatives
        for combo in combinations(parties, k):
            if combo == grant:
                continue
            alt = list(seats)
            for p in parties:
                alt[p] = base[p] + (1 if p in combo else 0)
            alternatives.append(tuple(alt))
            if len(alternatives) >= limit:
                truncated = True
                break
    info = TieInfo(parties, k, ti.base_seats, ti.orbit_size, truncated, ti.near)
    return tuple(vec), tuple(alternatives), info


# -- divisor allocation -----------------------------------------------------


def _divisor_validate(weights: PartyWeights, sp: SignpostSequence, house_size: int) -> int:
    if house_size < 0:
        raise InfeasibleHouseSizeError("house size must be nonnegative")
    z = sp.zero_count()
    m = len(weights)
    if house_size < z * m:
        raise InfeasibleHouseSizeError(
            f"impervious signposts pre-assign {z} seats per party; need house size >= {z * m}"
        )
    cap = sp.max_seats()
    if cap is not None and house_size > cap * m:
        raise CapExceededError(f"capped table allows at most {cap * m} seats")
    return z

def _finalize_divisor(
    weights: PartyWeights,
    sp: SignpostSequence,
    seats: list[int],
    house_size: int,
    policy: TiePolicy,
) -> Allocation:
    """Build the Allocation (ties, support interval) from any valid branch."""
    votes = weights.votes
    m = len(votes)
    cur = [sp.figure(votes[i], seats[i]) for i in range(m)]
    nxt = [sp.figure(votes[i], seats[i] + 1) for i in range(m)]
    d_minus_fig = max(nxt)
    d_plus_fig = min(cur)
    interval = (sp.divisor_of_figure(d_minus_fig), sp.divisor_of_figure(d_plus_fig))

    exact = _is_exact(weights, sp)
    tie = False
    near = False
    if d_minus_fig != INF and d_plus_fig != INF:
        if exact:
            tie = d_minus_fig == d_plus_fig
        else:
            gap = float(d_plus_fig) - float(d_minus_fig)
            near = gap <= NEAR_TIE_RTOL * max(abs(float(d_plus_fig)), abs(float(d_minus_fig)))
    if not tie and not near:
        return Allocation(tuple(seats), house_size, (), None, interval)
    if near:
        info = TieInfo((), 0, (), 1, near=True)
        return Allocation(tuple(seats), house_size, (), info, interval)

    f = d_plus_fig
    parties, base, grants = [], [], 0
    for i in range(m):
        holds = cur[i] == f
        can_take = nxt[i] == f
        if holds and can_take:  # excluded by strict monotonicity once positive
            raise AssertionError("signpost sequence not strictly increasing at a tie")
        if holds:
            parties.append(i)
            base.append(seats[i] - 1)
            grants += 1
        elif can_take:
            parties.append(i)
            base.append(seats[i])
    orbit = comb(len(parties), grants)
    ti = TieInfo(tuple(parties), grants, tuple(base), orbit)
    primary_grant = tuple(parties[:grants])  # canonical: lowest indices granted
    vec, alternatives, info = _resolve_orbit(primary_grant, ti, policy, seats)
    return Allocation(vec, house_size, alternatives, info, interval)


def allocate_divisor(
    weights: PartyWeights,
    signposts: SignpostSequence,
    house_size: int,
    tie_policy: TiePolicy = DEFAULT_TIES,
) -> Allocation:
    """Highest-averages allocation: award each seat to the largest v/d(s+1).

    Zero signposts pre-assign their mandatory seats, so v/0 is never formed.
    """
    z = _divisor_validate(weights, signposts, house_size)
    votes = weights.votes
    m = len(votes)
    seats = [z] * m
    remaining = house_size - z * m
    heap = [(_neg(signposts.figure(votes[i], z + 1)), i) for i in range(m)]
    heapq.heapify(heap)
    for _ in range(remaining):
        negfig, i = heapq.heappop(heap)
        if negfig == 0:  # all remaining signposts are infinite
            raise CapExceededError("house size unreachable under the table cap")
        seats[i] += 1
        heapq.heappush(heap, (_neg(signposts.figure(votes[i], seats[i] + 1)), i))
    return _finalize_divisor(weights, signposts, seats, house_size, tie_policy)


def _neg(fig):
    return -fig if fig != INF else -INF


def allocate_divisor_by_search(
    weights: PartyWeights,
    signposts: SignpostSequence,
    house_size: int,
    tie_policy: TiePolicy = DEFAULT_TIES,
) -> Allocation:
    """Divisor allocation by monotone search for D with sum round_d(v/D) = N.

    Independent of the sequential formulation; used to cross-validate it.
    The returned support interval is the full feasible divisor range.
    """
    z = _divisor_validate(weights, signposts, house_size)
    votes = weights.votes
    m = len(votes)
    exact = _is_exact(weights, signposts)
    cap = signposts.max_seats()

    def seats_at(i: int, fig) -> tuple[int, int]:
        """(strict, max) counts of figure values of party i that are >= fig."""
        lo, hi = 0, 1
        while signposts.figure(votes[i], hi) >= fig:
            hi *= 2
            if cap is not None and hi > cap:
                hi = cap + 1
                break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if signposts.figure(votes[i], mid) >= fig:
                lo = mid
            else:
                hi = mid
        n_max = lo
        n_strict = n_max - 1 if (n_max >= 1 and signposts.figure(votes[i], n_max) == fig) else n_max
        return n_strict, n_max

    def totals(fig):
        strict = total = 0
        for i in range(m):
            s, t = seats_at(i, fig)
            strict += s
            total += t
        return strict, total

    def build(fig) -> Allocation:
        counts = [seats_at(i, fig) for i in range(m)]
        base = [c[0] for c in counts]
        extra = house_size - sum(base)
        seats = list(base)
        if extra:
            boundary = [i for i in range(m) if counts[i][1] > counts[i][0]]
            for i in boundary[:extra]:  # canonical branch; ties re-derived below
                seats[i] += 1
        return _finalize_divisor(weights, signposts, seats, house_size, tie_policy)

    if house_size == z * m:
        return _finalize_divisor(weights, signposts, [z] * m, house_size, tie_policy)

    # bracket: lo_fig gives too many figure values, hi_fig too few
    hi_fig = max(signposts.figure(votes[i], z + 1) for i in range(m))
    _, t = totals(hi_fig)
    if t >= house_size:
        return build(hi_fig)
    k = house_size + 1
    if cap is not None:
        k = min(k, cap)
    lo_fig = min(signposts.figure(votes[i], k) for i in range(m))
    while totals(lo_fig)[1] < house_size:
        if cap is not None and k >= cap:
            raise CapExceededError("house size unreachable under the table cap")
        k *= 2
        if cap is not None:
            k = min(k, cap)
        lo_fig = min(signposts.figure(votes[i], k) for i in range(m))
    strict, total = totals(lo_fig)
    if strict <= house_size <= total:
        return build(lo_fig)

    for iteration in range(4096):
        mid = (lo_fig + hi_fig) / 2
        strict, total = totals(mid)
        if strict <= house_size <= total:
            return build(mid)
        if total < house_size:
            hi_fig = mid
        else:
            lo_fig = mid
        if exact and iteration % 16 == 15:
            built = _exhaust_bracket(
                weights, signposts, house_size, lo_fig, hi_fig, seats_at, totals, build
            )
            if built is not None:
                return built
    # float arithmetic can stall on an exact tie: accept the lower bracket edge
    strict, total = totals(lo_fig)
    counts = [seats_at(i, lo_fig) for i in range(m)]
    seats = [c[1] for c in counts]
    surplus = total - house_size
    if surplus > 0:
        order = sorted(range(m), key=lambda i: (signposts.figure(votes[i], seats[i]), i))
        for i in order[:surplus]:
            seats[i] -= 1
    return _finalize_divisor(weights, signposts, seats, house_size, tie_policy)


def _exhaust_bracket(weights, signposts, house_size, lo_fig, hi_fig, seats_at, totals, build):
    """Enumerate the exact figure values inside the bracket and pick the
    feasible one; resolves brackets that straddle an exact tie."""
    votes = weights.votes
    m = len(votes)
    candidates = set()
    for i in range(m):
        lo_n = seats_at(i, lo_fig)[1]
        hi_n = seats_at(i, hi_fig)[1]
        if lo_n - hi_n > 64:
            return None  # bracket still too wide; keep bisecting
        for n in range(hi_n + 1, lo_n + 1):
            fig = signposts.figure(votes[i], n)
            if lo_fig <= fig < hi_fig:
                candidates.add(fig)
    for fig in sorted(candidates, reverse=True):
        strict, total = totals(fig)
        if strict <= house_size <= total:
            return build(fig)
    return None


# -- quota allocation -------------------------------------------------------


def allocate_quota(
    weights: PartyWeights,
    gamma,
    house_size: int,
    tie_policy: TiePolicy = DEFAULT_TIES,
) -> Allocation:
    """Largest-remainder allocation with quota total/(house_size + gamma).

    Floors the ideal seat counts f_i = (house_size + gamma) p_i and writes the
    remainder as q * m + t with 0 <= t < m, so every real gamma is covered:
    each party gets base + q seats and the t largest fractional parts one
    more.  Negative seat counts are reported, never clamped.
    """
    if house_size < 0:
        raise InfeasibleHouseSizeError("house size must be nonnegative")
    if isinstance(gamma, Rational):
        gamma = Fraction(gamma)
    if not house_size + gamma > 0:
        raise NonpositiveQuotaError(f"need house_size + gamma > 0, got {house_size} + {gamma}")
    m = len(weights)
    exact = weights.exact and isinstance(gamma, Fraction)
    shares = weights.shares if exact else weights.shares_float()
    scale = house_size + gamma
    ideal = [scale * p for p in shares]
    base = [floor(f) for f in ideal]
    fracs = [f - b for f, b in zip(ideal, base)]
    r = house_size - sum(base)
    q, t = divmod(r, m)
    seats = [b + q for b in base]

    ti = None
    grant: tuple[int, ...] = ()
    if t > 0:
        order = sorted(range(m), key=lambda i: (-fracs[i], i))
        cut = fracs[order[t - 1]]
        if exact:
            tied = [i for i in range(m) if fracs[i] == cut]
            above = sum(1 for i in range(m) if fracs[i] > cut)
            k = t - above
            if len(tied) > k:
                ti = TieInfo(
                    tuple(tied), k, tuple(seats[i] for i in tied), comb(len(tied), k)
                )
                grant = tuple(i for i in order[:t] if fracs[i] > cut)
            else:
                grant = tuple(order[:t])
        else:
            nxt = fracs[order[t]] if t < m else None
            if nxt is not None and cut - nxt <= NEAR_TIE_RTOL:
                ti = TieInfo((), 0, (), 1, near=True)
            grant = tuple(order[:t])
        for i in grant:
            seats[i] += 1

    if ti is not None and not ti.near:
        if min(ti.base_seats) < 0:  # some orbit branch would go negative
            raise NegativeSeatError(
                f"gamma={gamma} yields negative seats in the tie orbit at house size {house_size}"
            )
        primary_grant = tuple(ti.parties[: ti.grants])
        vec, alternatives, info = _resolve_orbit(primary_grant, ti, tie_policy, seats)
        seats = list(vec)
    else:
        alternatives, info = (), ti

    if min(seats) < 0:
        raise NegativeSeatError(
            f"gamma={gamma} yields negative seats {tuple(seats)} at house size {house_size}"
        )

    lo = max(f - s for f, s in zip(ideal, seats))
    hi = min(f - s for f, s in zip(ideal, seats)) + 1
    return Allocation(tuple(seats), house_size, alternatives, info, (lo, hi))


# -- method dispatch ---------------------------------------------------------


def allocate(
    method: Method,
    weights: PartyWeights,
    house_size: int,
    tie_policy: TiePolicy = DEFAULT_TIES,
) -> Allocation:
    if isinstance(method, DivisorMethod):
        return allocate_divisor(weights, method.signposts, house_size, tie_policy)
    return allocate_quota(weights, method.gamma, house_size, tie_policy)
