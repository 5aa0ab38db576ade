from fractions import Fraction

import pytest

from apportion import CapExceededError, SignpostSequence, alpha_round, d_round


def test_alpha_round_standard():
    assert alpha_round(2.3, 0.5) == 2
    assert alpha_round(2.7, 0.5) == 3


def test_alpha_round_boundary_is_two_valued():
    assert alpha_round(2.5, 0.5) == (2, 3)
    assert alpha_round(3, 1) == (2, 3)
    assert alpha_round(3, 0) == (3, 4)


def test_alpha_zero_rounds_up():
    assert alpha_round(2.3, 0) == 3
    assert alpha_round(2.0001, 0) == 3


def test_alpha_one_rounds_down():
    assert alpha_round(2.9, 1) == 2


def test_alpha_round_outside_unit_interval():
    # |x - round| may exceed 1 for alpha outside [0, 1]
    assert alpha_round(2.3, -1) == 4
    assert alpha_round(2.3, 2.5) == 0


def test_alpha_round_exact_fractions():
    assert alpha_round(Fraction(5, 2), Fraction(1, 2)) == (2, 3)
    assert alpha_round(Fraction(7, 3), Fraction(1, 2)) == 2


def test_d_round_sqrt_pair():
    sp = SignpostSequence.sqrt_pair_product()
    assert d_round(1.5, sp) == 2  # d(2) ~ 1.414 <= 1.5 <= d(3) ~ 2.449
    assert d_round(0.5, sp) == 1  # d(1) = 0


def test_d_round_linear():
    sp = SignpostSequence.linear(1)
    assert d_round(2.7, sp) == 2
    assert d_round(3, sp) == (2, 3)


def test_d_round_geometric():
    sp = SignpostSequence.geometric(2)
    assert d_round(5, sp) == 3  # d(3) = 4 <= 5 <= d(4) = 8
    assert d_round(4, sp) == (2, 3)


def test_d_round_table_cap():
    sp = SignpostSequence.table([1, 2, 3], cap=3)
    assert d_round(2.5, sp) == 2
    with pytest.raises(CapExceededError):
        d_round(3.5, sp)


def test_d_round_harmonic_pair():
    sp = SignpostSequence.harmonic_pair()
    assert sp.value(2) == Fraction(4, 3)
    assert d_round(1.4, sp) == 2
