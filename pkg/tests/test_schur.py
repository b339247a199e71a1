import random
from fractions import Fraction as F

import pytest

from tauforge.mpoly import MPoly
from tauforge.zseries import ExactnessError, ZSeries
from tauforge.schur import (ChargedPoly, DomainError, Partition,
                            bilinear_window, elementary_schur, embed_t,
                            embed_tprime, hall_product, miwa_shift,
                            partitions_of, partitions_up_to, schur_expand,
                            schur_of_partition, xi_kernel)

from conftest import random_poly


def exp_series_oracle(D: int, order: int) -> ZSeries:
    """exp(sum t_i z^i) expanded term by term, independent of the recurrence."""
    result = ZSeries.from_poly(MPoly.const(D, 1))
    for i in range(1, order + 1):
        term = ZSeries(D, {i: MPoly.variable(D, i)}, None)
        partial = ZSeries.from_poly(MPoly.const(D, 1))
        power = ZSeries.from_poly(MPoly.const(D, 1))
        fact = 1
        for j in range(1, order // i + 1):
            power = power * term
            fact *= j
            partial = partial + power * F(1, fact)
        result = result * partial
    return result.truncate(order)


class TestElementarySchur:
    def test_negative_is_zero(self):
        assert elementary_schur(-1, 1).is_zero

    def test_zero_is_one(self):
        assert elementary_schur(0, 1) == MPoly.const(1, 1)

    def test_s3(self):
        D = 3
        t1, t2, t3 = (MPoly.variable(D, i) for i in (1, 2, 3))
        assert elementary_schur(3, D) == t3 + t1 * t2 + t1**3 / 6

    def test_matches_exponential_oracle(self):
        D = 8
        oracle = exp_series_oracle(D, 8)
        for i in range(9):
            assert elementary_schur(i, D) == oracle.coeff(i), i

    def test_t1_derivative_lowers_index(self):
        D = 8
        for i in range(1, 9):
            assert elementary_schur(i, D).differentiate(1) == \
                elementary_schur(i - 1, D)

    def test_rejects_small_var_count(self):
        with pytest.raises(DomainError):
            elementary_schur(5, 4)

    def test_weighted_degree(self):
        for i in range(1, 7):
            assert elementary_schur(i, 8).wdeg() == i


class TestPartitionSchur:
    def test_empty(self):
        assert schur_of_partition(Partition(), 1) == MPoly.const(1, 1)

    def test_single_box(self):
        assert schur_of_partition(Partition((1,)), 2) == MPoly.variable(2, 1)

    def test_column_two(self):
        D = 2
        t1, t2 = MPoly.variable(D, 1), MPoly.variable(D, 2)
        assert schur_of_partition(Partition((1, 1)), D) == t1**2 / 2 - t2

    def test_row_shape_is_elementary(self):
        for n in range(1, 7):
            assert schur_of_partition(Partition((n,)), 8) == \
                elementary_schur(n, 8)

    def test_conjugation_symmetry_sign_plus_one(self):
        # flipping even-indexed times sends S_lambda to its conjugate,
        # with stable sign +1
        D = 8
        signs = [F((-1) ** i) for i in range(D)]
        for lam in partitions_up_to(6):
            direct = schur_of_partition(lam, D)
            conj = schur_of_partition(lam.conjugate(), D)
            assert conj.scale_vars(signs) == direct, lam

    def test_rejects_small_var_count(self):
        with pytest.raises(DomainError):
            schur_of_partition(Partition((3, 1)), 3)

    def test_partition_validation(self):
        with pytest.raises(ValueError):
            Partition((1, 2))
        with pytest.raises(ValueError):
            Partition((2, 0))

    def test_partition_json(self):
        lam = Partition((2, 1))
        assert Partition.from_json(lam.to_json()) == lam

    def test_partition_counts(self):
        assert [len(partitions_of(n)) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]


class TestMiwaShift:
    def test_single_time(self):
        D = 2
        t2 = MPoly.variable(D, 2)
        s = miwa_shift(t2, -1)
        assert s.coeff(0) == t2
        assert s.coeff(-2) == MPoly.const(D, -1) * F(1, 2)
        assert s.coeff(-1).is_zero

    def test_square(self):
        D = 1
        t1 = MPoly.variable(D, 1)
        s = miwa_shift(t1**2, -1)
        assert s.coeff(0) == t1**2
        assert s.coeff(-1) == t1 * -2
        assert s.coeff(-2) == MPoly.const(D, 1)

    def test_cancellation_in_s2(self):
        D = 2
        p = elementary_schur(2, D)
        s = miwa_shift(p, -1)
        assert s.coeff(0) == p
        assert s.coeff(-1) == -MPoly.variable(D, 1)
        assert s.coeff(-2).is_zero  # the two z^-2 contributions cancel

    def test_plus_shift_reinforces(self):
        D = 2
        s = miwa_shift(elementary_schur(2, D), +1)
        assert s.coeff(-2) == MPoly.const(D, 1)

    def test_constant_term_recovers_input(self):
        rng = random.Random(3)
        for _ in range(20):
            p = random_poly(rng, 3)
            s = miwa_shift(p, -1)
            assert s.coeff(0) == p
            assert s.min_order is None or s.min_order >= -p.wdeg()

    def test_window_validation(self):
        with pytest.raises(DomainError):
            miwa_shift(MPoly.variable(2, 2), -1, z_window=1)

    def test_offset_block(self):
        D = 2
        doubled = embed_tprime(MPoly.variable(D, 1), D)
        s = miwa_shift(doubled, +1, var_offset=D)
        assert s.coeff(-1) == MPoly.const(2 * D, 1)
        untouched = embed_t(MPoly.variable(D, 1), D)
        assert miwa_shift(untouched, +1, var_offset=D).coeff(0) == untouched


class TestKernel:
    def test_order_zero(self):
        k = xi_kernel(2, 0)
        assert k.coeff(0) == MPoly.const(4, 1)

    def test_order_one(self):
        D = 2
        k = xi_kernel(D, 1)
        x1 = MPoly.variable(2 * D, 1) - MPoly.variable(2 * D, D + 1)
        assert k.coeff(1) == x1

    def test_order_two_matches_difference_schur(self):
        D = 3
        k = xi_kernel(D, 2)
        x1 = MPoly.variable(2 * D, 1) - MPoly.variable(2 * D, D + 1)
        x2 = MPoly.variable(2 * D, 2) - MPoly.variable(2 * D, D + 2)
        assert k.coeff(2) == x1**2 / 2 + x2

    def test_order_above_vars_rejected(self):
        with pytest.raises(DomainError):
            xi_kernel(3, 4)

    def test_truncation_is_tracked(self):
        k = xi_kernel(3, 2)
        with pytest.raises(ExactnessError):
            k.coeff(3)

    def test_window_rule(self):
        zmin, kmax = bilinear_window(2, 3, 1)
        assert zmin <= -(2 + 3) - 1
        assert kmax >= 2 + 3 - 1 - 1


class TestHall:
    def test_schur_orthonormal(self):
        D = 8
        shapes = partitions_up_to(5)
        mats = {lam: schur_of_partition(lam, D) for lam in shapes}
        for lam in shapes:
            for mu in shapes:
                expect = F(1) if lam == mu else F(0)
                assert hall_product(mats[lam], mats[mu]) == expect

    def test_schur_expand_roundtrip(self):
        rng = random.Random(11)
        for _ in range(10):
            p = random_poly(rng, 3, max_terms=3, max_exp=2)
            expansion = schur_expand(p)
            rebuilt = MPoly.zero(max(p.vars, p.wdeg(), 1))
            for lam, coef in expansion.items():
                rebuilt = rebuilt + schur_of_partition(lam, rebuilt.vars) * coef
            assert rebuilt == p.embed(rebuilt.vars)

    def test_known_expansion(self):
        t1 = MPoly.variable(1, 1)
        expansion = schur_expand(t1**2)
        assert expansion == {Partition((2,)): F(1), Partition((1, 1)): F(1)}


def test_charged_poly_json():
    cp = ChargedPoly(MPoly.variable(2, 1), -3)
    back = ChargedPoly.from_json(cp.to_json())
    assert back.poly == cp.poly and back.charge == -3
