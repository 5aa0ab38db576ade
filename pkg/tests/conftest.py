"""Shared test helpers: independent brute-force oracles and corpus generators.

The divisor oracle enumerates every seat vector and keeps those whose
comparative figures satisfy max_i v_i/d(s_i+1) <= min_i v_i/d(s_i); the
quota oracle enumerates rounding offsets directly.  Both are deliberately
independent of the production allocators.
"""

import random
from fractions import Fraction
from math import inf

import pytest

from apportion import PartyWeights, SignpostSequence


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def divd_orbit(weights: PartyWeights, sp: SignpostSequence, house: int) -> set:
    """All seat vectors passing the min/max comparative-figure condition."""
    votes = weights.votes
    m = len(votes)
    out = set()
    for seats in compositions(house, m):
        hi = max(sp.figure(votes[i], seats[i] + 1) for i in range(m))
        lo = min(sp.figure(votes[i], seats[i]) for i in range(m))
        if hi == inf:
            continue
        if lo == inf or hi <= lo:
            out.add(seats)
    return out


def quota_orbit(weights: PartyWeights, gamma, house: int) -> set:
    """All seat vectors realizable as an offset-rounding of (house+gamma)p."""
    ideal = [(house + Fraction(gamma)) * p for p in weights.shares]
    m = len(weights)
    out = set()
    for seats in compositions(house, m):
        # feasible offset alpha: ideal - s <= alpha <= ideal - s + 1 for all i
        lo = max(f - s for f, s in zip(ideal, seats))
        hi = min(f - s + 1 for f, s in zip(ideal, seats))
        if lo <= hi:
            out.add(seats)
    return out


def random_weights(rng: random.Random, m: int, lo: int = 1, hi: int = 9) -> PartyWeights:
    return PartyWeights.of([rng.randint(lo, hi) for _ in range(m)])


@pytest.fixture
def rng():
    return random.Random(20260809)
