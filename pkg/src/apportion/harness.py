"""Empirical verification harness: house-size sweeps, Monte Carlo over random
party sizes, rational-share period analysis, and equidistribution diagnostics.

A sweep allocates at every house size in a range and accumulates seat-excess
statistics; averaged over a long range this realizes the uniform-random-house
model the asymptotic formulas describe.  Rational shares are periodic in the
house size, so their exact bias is the average over one period.

Float sweeps run on vectorized fast paths (the divisor path generates the
seat-award sequence once and reads every house size off cumulative counts);
exact sweeps allocate per house size with full tie handling and exact
averaging over tie orbits.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

import numpy as np

from .allocation import NEAR_TIE_RTOL, allocate, allocate_divisor, allocate_quota
from .asymptotics import excess_bounds, moment_prediction
from .errors import InputError, NegativeSeatError, UnsupportedMethodError
from .methods import DivisorMethod, Method, QuotaMethod, TiePolicy, small_n_guard
from .samplers import sample_uniform_simplex
from .signposts import (
    CLIPPED_LINEAR,
    Exactness,
    GEOMETRIC,
    HARMONIC_PAIR,
    LINEAR,
    POWER,
    SQRT_PAIR,
    TABLE,
    SignpostSequence,
)
from .stats import ComparisonReport, ComparisonRow, SweepStats, RunningMoments, Tolerances
from .violation import violation_probability
from .weights import PartyWeights

EXACT_SWEEP_LIMIT = 20_000

_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def sqrt_shares(m: int) -> tuple[float, ...]:
    """Rationally independent test shares: normalized (sqrt 2, ..., sqrt p_{m-1}, 1)."""
    if not 2 <= m <= len(_PRIMES) + 1:
        raise InputError(f"sqrt shares support 2..{len(_PRIMES) + 1} parties")
    raw = [math.sqrt(q) for q in _PRIMES[: m - 1]] + [1.0]
    total = sum(raw)
    return tuple(x / total for x in raw)


# -- signpost arrays for the fast path ---------------------------------------


def _signpost_array(sp: SignpostSequence, n_max: int) -> np.ndarray:
    """d(1..n_max) as floats; +inf past a capped table."""
    n = np.arange(1, n_max + 1, dtype=float)
    if sp.kind == LINEAR:
        return n - 1.0 + float(sp.beta)
    if sp.kind == CLIPPED_LINEAR:
        return np.maximum(n - 1.0 + float(sp.beta), 0.0)
    if sp.kind == SQRT_PAIR:
        return np.sqrt(n * (n - 1.0))
    if sp.kind == HARMONIC_PAIR:
        return 2.0 * n * (n - 1.0) / (2.0 * n - 1.0)
    if sp.kind == POWER:
        return n**sp.exponent
    if sp.kind == GEOMETRIC:
        with np.errstate(over="ignore"):
            return float(sp.ratio) ** (n - 1.0)
    if sp.kind == TABLE:
        vals = np.array([float(sp.value(k)) for k in range(1, n_max + 1)])
        return vals
    raise AssertionError(sp.kind)


def _winner_sequence(shares: np.ndarray, sp: SignpostSequence, steps: int):
    """Award ``steps`` seats past the mandatory ones; return winners and figures.

    winners[k] is the party taking award k, figures[k] its comparative figure;
    figures are nonincreasing.
    """
    m = shares.size
    z = sp.zero_count()
    # generous per-party quotient budget, grown on demand
    budget = np.maximum((shares * (steps + z * m)).astype(int) + m + 8, z + 2)
    with np.errstate(divide="ignore"):
        tables = [shares[i] / _signpost_array(sp, int(budget[i])) for i in range(m)]
    winners = np.empty(steps, dtype=np.int32)
    figures = np.empty(steps, dtype=float)
    seats = [z] * m
    heap = [(-tables[i][seats[i]] if seats[i] < budget[i] else 0.0, i) for i in range(m)]
    heapq.heapify(heap)
    for k in range(steps):
        negfig, i = heapq.heappop(heap)
        if negfig == 0.0:
            raise InputError("house size unreachable under the table cap")
        winners[k] = i
        figures[k] = -negfig
        seats[i] += 1
        if seats[i] >= budget[i]:
            budget[i] = budget[i] * 2
            with np.errstate(divide="ignore"):
                tables[i] = shares[i] / _signpost_array(sp, int(budget[i]))
        heapq.heappush(heap, (-tables[i][seats[i]], i))
    return winners, figures


def _divisor_sweep_float(
    shares: np.ndarray,
    sp: SignpostSequence,
    n_from: int,
    n_to: int,
    stats: SweepStats,
    average_ties: bool,
    block: int = 65536,
) -> None:
    m = shares.size
    z = sp.zero_count()
    steps = n_to - z * m + 1  # one extra award for tie detection at n_to
    winners, figures = _winner_sequence(shares, sp, steps)
    gaps = figures[:-1] - figures[1:]
    near = gaps <= NEAR_TIE_RTOL * np.abs(figures[:-1])  # award a ties house z*m+a+1

    # tie flag per house in [n_from, n_to]
    award_of = np.arange(n_from, n_to + 1) - z * m - 1
    house_tied = np.zeros(n_to - n_from + 1, dtype=bool)
    ok = award_of >= 0
    house_tied[ok] = near[award_of[ok]]

    base = np.full(m, z, dtype=np.int64)
    consumed = n_from - z * m  # awards already counted at house n_from
    base += np.array([np.count_nonzero(winners[: max(consumed, 0)] == i) for i in range(m)])
    for start in range(n_from, n_to + 1, block):
        stop = min(start + block - 1, n_to)
        rows = stop - start + 1
        # house start+r consumes awards [0, start+r-z*m)
        w = winners[start - z * m : stop - z * m]
        seats = np.empty((rows, m), dtype=np.int64)
        seats[0] = base
        if rows > 1:
            onehot = w[None, :] == np.arange(m)[:, None]
            seats[1:] = base[None, :] + np.cumsum(onehot, axis=1).T
        base = seats[-1].copy()
        nxt = stop - z * m  # award consumed by house stop+1
        if nxt < winners.size and stop < n_to:
            base[winners[nxt]] += 1
        houses = np.arange(start, stop + 1, dtype=float)
        deltas = seats - houses[:, None] * shares[None, :]
        tied = house_tied[start - n_from : stop - n_from + 1]
        if average_ties and tied.any():
            for row in np.nonzero(tied)[0]:
                deltas[row] = _near_tie_average_divisor(
                    shares, sp, seats[row], int(houses[row])
                )
        stats.record_batch(deltas)
        stats.near_ties += float(tied.sum())
    stats.n_from = n_from if stats.n_from is None else min(stats.n_from, n_from)
    stats.n_to = n_to if stats.n_to is None else max(stats.n_to, n_to)


def _near_tie_average_divisor(shares, sp, seats, house) -> np.ndarray:
    """Average the excess over the (float-identified) tied class."""
    m = shares.size
    cur = np.array([float(sp.figure(shares[i], int(seats[i]))) for i in range(m)])
    nxt = np.array([float(sp.figure(shares[i], int(seats[i]) + 1)) for i in range(m)])
    f = cur[np.isfinite(cur)].min()
    tol = NEAR_TIE_RTOL * abs(f) * 4
    holds = np.isfinite(cur) & (np.abs(cur - f) <= tol)
    takes = np.isfinite(nxt) & (np.abs(nxt - f) <= tol)
    tied = holds | takes
    k = int(holds.sum())
    expected = seats.astype(float)
    expected[tied] = seats[tied] - holds[tied] + k / tied.sum()
    return expected - house * shares


def _quota_sweep_float(
    shares: np.ndarray,
    gamma: float,
    n_from: int,
    n_to: int,
    stats: SweepStats,
    average_ties: bool,
    block: int = 65536,
) -> None:
    m = shares.size
    for start in range(n_from, n_to + 1, block):
        stop = min(start + block - 1, n_to)
        houses = np.arange(start, stop + 1, dtype=float)
        seats, tied_rows = _allocate_quota_many(shares[None, :], gamma, houses, average_ties)
        deltas = seats - houses[:, None] * shares[None, :]
        stats.record_batch(deltas)
        stats.near_ties += float(len(tied_rows))
    stats.n_from = n_from if stats.n_from is None else min(stats.n_from, n_from)
    stats.n_to = n_to if stats.n_to is None else max(stats.n_to, n_to)


def _allocate_quota_many(shares, gamma, houses, average_ties=False):
    """Vectorized quota allocation; shares (1|k, m), houses scalar array (k,).

    Returns float seat counts (expected values at near-ties when averaging)
    and the indices of near-tied rows.
    """
    shares = np.asarray(shares, dtype=float)
    houses = np.asarray(houses, dtype=float)
    m = shares.shape[1]
    ideal = (houses + gamma)[:, None] * shares
    base = np.floor(ideal)
    frac = ideal - base
    r = np.rint(houses - base.sum(axis=1)).astype(np.int64)
    q, t = np.divmod(r, m)
    order = np.argsort(-frac, axis=1, kind="stable")
    rank = np.argsort(order, axis=1, kind="stable")
    granted = rank < t[:, None]
    seats = base + q[:, None] + granted
    tied_rows = []
    has_rest = t > 0
    if has_rest.any():
        sorted_frac = np.take_along_axis(frac, order, axis=1)
        idx = np.nonzero(has_rest)[0]
        cut = sorted_frac[idx, t[idx] - 1]
        nxt = sorted_frac[idx, np.minimum(t[idx], m - 1)]
        near = (t[idx] < m) & (cut - nxt <= NEAR_TIE_RTOL)
        tied_rows = idx[near]
        if average_ties and len(tied_rows):
            for row in tied_rows:
                c = sorted_frac[row, t[row] - 1]
                tol = NEAR_TIE_RTOL * 4
                tied = np.abs(frac[row] - c) <= tol
                above = frac[row] > c + tol
                kk = t[row] - above.sum()
                seats[row, tied] = base[row, tied] + q[row] + kk / tied.sum()
    if seats.min() < 0:
        raise NegativeSeatError("negative seat count in vectorized quota allocation")
    return seats, tied_rows


# -- exact sweeps -------------------------------------------------------------


def _exact_divisor_scan(weights, sp, n_to: int):
    """Yield (house, seats, tie_class) incrementally for every feasible house.

    tie_class is (parties, grants, base_seats) when the allocation at that
    house is tied, else None; ``seats`` is one branch of the orbit.
    """
    from .allocation import _neg  # single branch point shared with allocate

    votes = weights.votes
    m = len(votes)
    z = sp.zero_count()
    seats = [z] * m
    heap = [(_neg(sp.figure(votes[i], z + 1)), i) for i in range(m)]
    heapq.heapify(heap)
    yield z * m, tuple(seats), None
    for house in range(z * m + 1, n_to + 1):
        negfig, i = heapq.heappop(heap)
        if negfig == 0:
            raise InputError("house size unreachable under the table cap")
        f = -negfig
        seats[i] += 1
        heapq.heappush(heap, (_neg(sp.figure(votes[i], seats[i] + 1)), i))
        tie = None
        if -heap[0][0] == f:
            parties, base, grants = [], [], 0
            for idx in range(m):
                holds = sp.figure(votes[idx], seats[idx]) == f
                takes = sp.figure(votes[idx], seats[idx] + 1) == f
                if holds:
                    parties.append(idx)
                    base.append(seats[idx] - 1)
                    grants += 1
                elif takes:
                    parties.append(idx)
                    base.append(seats[idx])
            tie = (tuple(parties), grants, tuple(base))
        yield house, tuple(seats), tie


def _exact_sweep(method, weights, n_from, n_to, tie_policy, stats) -> None:
    average = tie_policy.kind == "average"
    shares = weights.shares
    if isinstance(method, DivisorMethod):
        for house, seats, tie in _exact_divisor_scan(weights, method.signposts, n_to):
            if house < n_from:
                continue
            _record_exact(stats, weights, house, seats, tie, average)
    else:
        for house in range(n_from, n_to + 1):
            alloc = allocate_quota(weights, method.gamma, house, tie_policy)
            ti = alloc.tie_info
            tie = (ti.parties, ti.grants, ti.base_seats) if ti is not None and not ti.near else None
            _record_exact(stats, weights, house, alloc.seats, tie, average)
    stats.n_from = n_from if stats.n_from is None else min(stats.n_from, n_from)
    stats.n_to = n_to if stats.n_to is None else max(stats.n_to, n_to)


def _record_exact(stats, weights, house, seats, tie, average) -> None:
    shares = weights.shares
    if average and tie is not None:
        parties, grants, base = tie
        share = Fraction(grants, len(parties))
        expected = list(map(Fraction, seats))
        for party, b in zip(parties, base):
            expected[party] = b + share
    else:
        expected = seats
    delta = [float(s - house * p) for s, p in zip(expected, shares)]
    lower, upper, any_v = _violation_indicators(weights, house, seats, tie if average else None)
    stats.record_batch(
        np.array([delta]), lower=np.array([lower]), upper=np.array([upper]), any_violation=any_v
    )
    if tie is not None:
        stats.ties += 1


def _violation_indicators(weights, house, seats, tie):
    """Per-party expected quota-violation indicators, exact over tie orbits."""
    m = len(weights)
    shares = weights.shares
    lo_cut = [floor(house * p) for p in shares]  # lower violated iff s < floor(q)
    hi_cut = [-floor(-(house * p)) for p in shares]  # upper violated iff s > ceil(q)
    if tie is None:
        lower = [s < c for s, c in zip(seats, lo_cut)]
        upper = [s > c for s, c in zip(seats, hi_cut)]
        return (
            [float(x) for x in lower],
            [float(x) for x in upper],
            float(any(lower) or any(upper)),
        )
    parties, k, base_seats = tie
    tied = set(parties)
    base = dict(zip(parties, base_seats))
    tsize = len(parties)
    p_grant = Fraction(k, tsize)
    lower, upper = [], []
    viol_if_granted, viol_if_not = set(), set()
    fixed_violation = False
    for i in range(m):
        if i in tied:
            lo_g = base[i] + 1 < lo_cut[i]
            lo_n = base[i] < lo_cut[i]
            hi_g = base[i] + 1 > hi_cut[i]
            hi_n = base[i] > hi_cut[i]
            lower.append(float(p_grant * lo_g + (1 - p_grant) * lo_n))
            upper.append(float(p_grant * hi_g + (1 - p_grant) * hi_n))
            if (lo_g or hi_g) and (lo_n or hi_n):
                fixed_violation = True
            elif lo_g or hi_g:
                viol_if_granted.add(i)
            elif lo_n or hi_n:
                viol_if_not.add(i)
        else:
            lo = seats[i] < lo_cut[i]
            hi = seats[i] > hi_cut[i]
            lower.append(float(lo))
            upper.append(float(hi))
            if lo or hi:
                fixed_violation = True
    if fixed_violation:
        any_v = 1.0
    else:
        # orbit members avoiding every violation grant all of viol_if_not
        # and none of viol_if_granted
        free = tsize - len(viol_if_granted) - len(viol_if_not)
        need = k - len(viol_if_not)
        good = comb(free, need) if 0 <= need <= free else 0
        any_v = 1.0 - good / comb(tsize, k)
    return lower, upper, any_v


# -- public sweep -------------------------------------------------------------


def sweep(
    method: Method,
    weights: PartyWeights,
    n_from: int,
    n_to: int,
    tie_policy: TiePolicy = TiePolicy.average(),
    bin_width: float | None = 0.01,
    workers: int = 1,
    force_exact: bool | None = None,
) -> SweepStats:
    """Allocate at every house size in [n_from, n_to] and accumulate excess stats.

    The range is clamped below at the method's small-house guard; the stats
    record the effective range.  Exact weights on a desk-scale range run the
    exact per-house path (honoring the tie policy); longer ranges and float
    weights use the vectorized float path, where near-ties are counted and,
    under the averaging policy, contribute the class average.
    """
    if n_to < n_from:
        raise InputError("empty sweep range")
    guard = small_n_guard(method, weights)
    n_from = max(n_from, guard)
    if n_to < n_from:
        raise InputError(f"sweep range lies entirely below the small-house guard {guard}")
    m = len(weights)
    bounds = _histogram_bounds(method, weights)
    exact = weights.exact and (
        not isinstance(method, DivisorMethod)
        or method.signposts.exactness is not Exactness.FLOAT
    )
    if force_exact is None:
        use_exact = exact and (n_to - n_from + 1) <= EXACT_SWEEP_LIMIT
    else:
        use_exact = force_exact
        if use_exact and not exact:
            raise InputError("exact sweep requires exact weights and signposts")

    def make_stats():
        return SweepStats.empty(m, bounds, bin_width) if bin_width else SweepStats.empty(m)

    if use_exact:
        stats = make_stats()
        _exact_sweep(method, weights, n_from, n_to, tie_policy, stats)
        return stats

    shares = np.asarray(weights.shares_float())
    average = tie_policy.kind == "average"

    def run_chunk(a: int, b: int) -> SweepStats:
        chunk = make_stats()
        if isinstance(method, DivisorMethod):
            _divisor_sweep_float(shares, method.signposts, a, b, chunk, average)
        else:
            _quota_sweep_float(shares, float(method.gamma), a, b, chunk, average)
        return chunk

    if workers <= 1:
        return run_chunk(n_from, n_to)
    edges = np.linspace(n_from, n_to + 1, workers + 1).astype(int)
    spans = [(int(a), int(b - 1)) for a, b in zip(edges, edges[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda ab: run_chunk(*ab), spans))
    stats = chunks[0]
    for other in chunks[1:]:
        stats.merge(other)
    return stats


def _histogram_bounds(method, weights):
    try:
        return excess_bounds(method, weights.shares_float())
    except UnsupportedMethodError:
        m = len(weights)
        return [(-float(m), float(m))] * m


def compare(
    stats: SweepStats,
    method: Method,
    p,
    tolerances: Tolerances = Tolerances(),
) -> ComparisonReport:
    """Pair sweep statistics with the asymptotic predictions."""
    p = [float(x) for x in p]
    m = len(p)
    if stats.dim != m:
        raise InputError("stats and shares disagree on the number of parties")
    pred = moment_prediction(method, p)
    rows = []
    for i in range(m):
        rows.append(ComparisonRow("mean", (i,), float(stats.mean[i]), float(pred.mean[i]), tolerances.mean))
    for i in range(m):
        rows.append(
            ComparisonRow("variance", (i,), float(stats.variance[i]), float(pred.variance[i]), tolerances.variance)
        )
    cov = stats.covariance
    for i in range(m):
        for j in range(i + 1, m):
            rows.append(
                ComparisonRow(
                    "covariance", (i, j), float(cov[i, j]), float(pred.covariance[i, j]), tolerances.covariance
                )
            )
    if tolerances.violation is not None:
        freq = stats.violation_frequency()
        for i in range(m):
            lo, up = violation_probability(method, p[i], m)
            rows.append(
                ComparisonRow("violation", (i,), float(freq["total"][i]), lo + up, tolerances.violation)
            )
    return ComparisonReport(tuple(rows))


# -- rational shares: periods -------------------------------------------------


def detect_period(weights: PartyWeights) -> int:
    """Period of the seat-excess sequence: the shares' common denominator."""
    return weights.share_denominator()


def period_average_bias(method: Method, weights: PartyWeights) -> tuple[Fraction, ...]:
    """Exact average seat excess over one period above the small-house guard.

    Ties contribute their exact average over the tie orbit.
    """
    if not weights.exact:
        raise InputError("period averaging requires exact rational weights")
    if isinstance(method, DivisorMethod):
        if method.signposts.exactness is Exactness.FLOAT:
            raise InputError("period averaging requires exact signposts")
        if method.signposts.asymptotic_beta() is None:
            raise UnsupportedMethodError("period averaging supports linear-like methods")
    elif not isinstance(method.gamma, Fraction):
        raise InputError("period averaging requires a rational quota offset")
    period = detect_period(weights)
    start = max(small_n_guard(method, weights), 1)
    shares = weights.shares
    total = [Fraction(0)] * len(weights)
    for house in range(start, start + period):
        alloc = allocate(method, weights, house, TiePolicy.average())
        seats = alloc.expected_seats()
        for i, (s, p) in enumerate(zip(seats, shares)):
            total[i] += s - house * p
    return tuple(t / period for t in total)


# -- equidistribution ----------------------------------------------------------


def equidistribution_ks(p, gamma: float = 0.0, n_from: int = 1, n_to: int = 10_000) -> np.ndarray:
    """Per-party KS distance of frac((house + gamma) * p_i) from U(0,1)."""
    if n_to - n_from + 1 < 2:
        raise InputError("range too short")
    shares = np.asarray([float(x) for x in p], dtype=float)
    houses = np.arange(n_from, n_to + 1, dtype=float) + float(gamma)
    out = np.empty(shares.size)
    n = houses.size
    grid = (np.arange(n, dtype=float)) / n
    for i, pi in enumerate(shares):
        vals = np.sort((houses * pi) % 1.0)
        out[i] = max(np.max(vals - grid), np.max(grid + 1.0 / n - vals))
    return out


# -- Monte Carlo over random party sizes ---------------------------------------


def _allocate_linear_many(shares: np.ndarray, beta: float, house: int) -> np.ndarray:
    """Vectorized linear-divisor allocation at one house size; rows = trials."""
    shares = np.asarray(shares, dtype=float)
    k, m = shares.shape
    slack = 2.0 * m * (1.0 + abs(beta)) + 2.0
    lo = np.full(k, house - slack)
    hi = np.full(k, house + slack)

    def total(t):
        s = np.floor(shares * t[:, None] - beta + 1.0)
        return np.maximum(s, 0.0).sum(axis=1)

    assert (total(lo) <= house).all() and (total(hi) >= house).all()
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        ge = total(mid) >= house
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    seats = np.maximum(np.floor(shares * hi[:, None] - beta + 1.0), 0.0)
    excess = np.rint(seats.sum(axis=1) - house).astype(np.int64)
    for row in np.nonzero(excess != 0)[0]:
        # float tie straddles the bracket; shed surplus at the boundary figures
        frac = shares[row] * hi[row] - beta + 1.0 - seats[row]
        order = np.argsort(frac)
        for i in order[: excess[row]]:
            seats[row, i] -= 1.0
    return seats


def allocate_many(method: Method, shares: np.ndarray, house: int) -> np.ndarray:
    """Allocate one house size across many share rows (float, fast paths)."""
    shares = np.asarray(shares, dtype=float)
    if isinstance(method, QuotaMethod):
        seats, _ = _allocate_quota_many(shares, float(method.gamma), np.full(shares.shape[0], float(house)))
        return seats
    sp = method.signposts
    if sp.kind in (LINEAR, CLIPPED_LINEAR):
        return _allocate_linear_many(shares, float(sp.beta), house)
    out = np.empty_like(shares)
    for row in range(shares.shape[0]):
        w = PartyWeights.of([float(x) for x in shares[row]])
        out[row] = allocate_divisor(w, sp, house).seats
    return out


@dataclass
class McSimplexResult:
    """Ordered-party excess statistics plus the ordered-share moments."""

    delta: SweepStats
    shares: RunningMoments
    house_size: int
    trials: int


def mc_ordered_simplex(
    method: Method,
    m: int,
    house_size: int,
    trials: int,
    seed: int = 0,
    bin_width: float | None = None,
    batch: int = 8192,
) -> McSimplexResult:
    """Sample shares uniformly on the simplex, sort descending, allocate, and
    accumulate the excess of the j-th largest party."""
    if m < 2 or trials < 1:
        raise InputError("need m >= 2 and at least one trial")
    rng = np.random.default_rng(seed)
    bounds = None if bin_width is None else [(-float(m), float(m))] * m
    delta_stats = SweepStats.empty(m, bounds, bin_width or 0.01)
    share_moms = RunningMoments(m)
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        p = sample_uniform_simplex(m, k, rng)
        p = -np.sort(-p, axis=1)
        seats = allocate_many(method, p, house_size)
        deltas = seats - house_size * p
        delta_stats.record_batch(deltas)
        share_moms.push_batch(p)
        done += k
    return McSimplexResult(delta_stats, share_moms, house_size, trials)


@dataclass
class ViolationFrequency:
    lower: np.ndarray
    upper: np.ndarray
    total: np.ndarray
    any: float
    count: int
    n_from: int | None = None
    n_to: int | None = None


def quota_violation_frequency(
    method: Method,
    weights: PartyWeights | None = None,
    n_from: int | None = None,
    n_to: int | None = None,
    m: int | None = None,
    house_size: int | None = None,
    trials: int | None = None,
    seed: int = 0,
    batch: int = 8192,
) -> ViolationFrequency:
    """Frequency of lower/upper quota violations.

    Fixed-share mode sweeps house sizes (pass weights + range); random mode
    samples shares uniformly on the simplex at one house size (pass m,
    house_size, trials).
    """
    if weights is not None:
        if n_from is None or n_to is None:
            raise InputError("fixed mode needs a house-size range")
        stats = sweep(method, weights, n_from, n_to, TiePolicy.average(), bin_width=None)
        freq = stats.violation_frequency()
        return ViolationFrequency(
            freq["lower"], freq["upper"], freq["total"], freq["any"],
            int(stats.count), stats.n_from, stats.n_to,
        )
    if m is None or house_size is None or trials is None:
        raise InputError("random mode needs m, house_size, and trials")
    rng = np.random.default_rng(seed)
    lower = np.zeros(m)
    upper = np.zeros(m)
    any_count = 0.0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        p = sample_uniform_simplex(m, k, rng)
        seats = allocate_many(method, p, house_size)
        deltas = seats - house_size * p
        lo = deltas <= -1.0
        up = deltas >= 1.0
        lower += lo.sum(axis=0)
        upper += up.sum(axis=0)
        any_count += float(np.logical_or(lo, up).any(axis=1).sum())
        done += k
    return ViolationFrequency(lower / trials, upper / trials, (lower + upper) / trials, any_count / trials, trials)


# -- apparentements -------------------------------------------------------------


@dataclass
class ApparentementStats:
    """Sweep-averaged seat gains from pooling two parties' votes.

    ``moments`` tracks (joint gain, gain of party i, gain of party j), where
    the per-party gains come from re-dividing the pooled seats by the same
    method (the sub-apportionment).
    """

    moments: RunningMoments
    party_i: int
    party_j: int
    n_from: int
    n_to: int

    @property
    def joint_mean(self) -> float:
        return float(self.moments.mean[0])

    @property
    def party_means(self) -> tuple[float, float]:
        return float(self.moments.mean[1]), float(self.moments.mean[2])


def apparentement_sweep(
    method: Method,
    weights: PartyWeights,
    party_i: int,
    party_j: int,
    n_from: int,
    n_to: int,
) -> ApparentementStats:
    """Sweep house sizes comparing separate vs pooled entries for two parties."""
    m = len(weights)
    if m < 3:
        raise InputError("need at least one party outside the coalition")
    if not (0 <= party_i < m and 0 <= party_j < m) or party_i == party_j:
        raise InputError("invalid coalition parties")
    merged, im = weights.merged(party_i, party_j)
    guard = max(small_n_guard(method, weights), small_n_guard(method, merged))
    shares = np.asarray(weights.shares_float())
    mshares = np.asarray(merged.shares_float())
    p_pool = mshares[im]
    pair = np.array([shares[party_i], shares[party_j]])
    pair_shares = pair / pair.sum()

    # the sub-apportionment needs its own minimum house size
    if isinstance(method, DivisorMethod):
        z = method.signposts.zero_count()
        sub_min = 2 * z
    else:
        sub_min = max(0, math.floor(-float(method.gamma))) + 1
    lo_bound = excess_bounds(method, mshares)[im][0]
    n_from = max(n_from, guard, math.ceil((sub_min + 1 - lo_bound) / p_pool))
    if n_to < n_from:
        raise InputError("range lies below the feasible coalition sweep start")

    moments = RunningMoments(3)
    if isinstance(method, DivisorMethod):
        full = _cumulative_seats(shares, method.signposts, n_to)
        pooled = _cumulative_seats(mshares, method.signposts, n_to)
        houses = np.arange(n_from, n_to + 1)
        s_i = full[houses, party_i]
        s_j = full[houses, party_j]
        s_pool = pooled[houses, im]
        assert s_pool.min() >= 2 * method.signposts.zero_count()
        sub = _cumulative_seats(pair_shares, method.signposts, int(s_pool.max()))
        sub_i = sub[s_pool, 0]
        sub_j = sub[s_pool, 1]
    else:
        gamma = float(method.gamma)
        houses = np.arange(n_from, n_to + 1, dtype=float)
        s_full, _ = _allocate_quota_many(shares[None, :], gamma, houses)
        s_pooled, _ = _allocate_quota_many(mshares[None, :], gamma, houses)
        s_i = s_full[:, party_i]
        s_j = s_full[:, party_j]
        s_pool = s_pooled[:, im]
        assert s_pool.min() + gamma > 0
        sub, _ = _allocate_quota_many(pair_shares[None, :], gamma, s_pool)
        sub_i = sub[:, 0]
        sub_j = sub[:, 1]
    joint = s_pool - s_i - s_j
    gains = np.stack([joint, sub_i - s_i, sub_j - s_j], axis=1)
    moments.push_batch(gains)
    return ApparentementStats(moments, party_i, party_j, n_from, n_to)


def _cumulative_seats(shares: np.ndarray, sp, n_to: int) -> np.ndarray:
    """Seat matrix s[house, party] for house sizes 0..n_to (divisor methods)."""
    m = shares.size
    z = sp.zero_count()
    steps = n_to - z * m
    if steps < 0:
        raise InputError("house size below the mandatory seats")
    winners, _ = _winner_sequence(shares, sp, steps)
    seats = np.zeros((n_to + 1, m), dtype=np.int64)  # sizes below z*m infeasible
    seats[z * m] = z
    onehot = winners[:, None] == np.arange(m)[None, :]
    seats[z * m + 1 :] = np.cumsum(onehot, axis=0) + z
    return seats
