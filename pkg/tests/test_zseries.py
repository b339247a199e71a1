import random
from fractions import Fraction as F

import pytest

from tauforge.mpoly import MPoly
from tauforge.zseries import ExactnessError, ZSeries

from conftest import random_poly


def laurent(vars, mapping):
    return ZSeries(vars, {o: MPoly.const(vars, c) for o, c in mapping.items()})


def test_laurent_difference_of_squares():
    a = laurent(1, {-1: 1, 1: 1})
    b = laurent(1, {-1: 1, 1: -1})
    assert a * b == laurent(1, {-2: 1, 2: -1})


def test_poly_coefficients_multiply():
    t1 = MPoly.variable(1, 1)
    s = ZSeries(1, {0: t1, -1: MPoly.const(1, 1)})
    sq = s * s
    assert sq.coeff(0) == t1**2
    assert sq.coeff(-1) == t1 * 2
    assert sq.coeff(-2) == MPoly.const(1, 1)


def test_residue_reads_minus_one():
    s = laurent(1, {-1: 5, 0: 7})
    assert s.residue() == MPoly.const(1, 5)
    assert ZSeries(1).residue().is_zero


def test_exact_window_shrinks_in_products():
    full = laurent(1, {-2: 1, 0: 3})
    cut = laurent(1, {0: 1, 1: 1, 2: 1}, )
    cut = cut.truncate(2)
    prod = full * cut
    assert prod.exact_hi == 0  # unknown orders above 2 meet the z^-2 term
    assert prod.coeff(0) == MPoly.const(1, 3) + MPoly.const(1, 1)
    with pytest.raises(ExactnessError):
        prod.coeff(1)


def test_scalar_and_shift():
    s = laurent(2, {0: 1, 3: 2})
    assert (s * F(1, 2)).coeff(3) == MPoly.const(2, 1)
    assert s.shift_z(-4).residue() == MPoly.const(2, 2)


def test_convolution_within_window():
    rng = random.Random(31)
    for _ in range(20):
        a = ZSeries(2, {rng.randint(-3, 3): random_poly(rng, 2) for _ in range(3)})
        b = ZSeries(2, {rng.randint(-3, 3): random_poly(rng, 2) for _ in range(3)})
        prod = a * b
        for order in range(-6, 7):
            direct = MPoly.zero(2)
            for i in range(-3, 4):
                direct = direct + a.coeff(i) * b.coeff(order - i)
            assert prod.coeff(order) == direct


def test_addition_tracks_windows():
    a = laurent(1, {0: 1}).truncate(5)
    b = laurent(1, {1: 1}).truncate(3)
    assert (a + b).exact_hi == 3
    assert (a - b).coeff(1) == MPoly.const(1, -1)
