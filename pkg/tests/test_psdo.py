import random
from fractions import Fraction as F

import pytest

from tauforge.mpoly import MPoly
from tauforge.ratfun import RatFun
from tauforge.schur import ChargedPoly, Partition, elementary_schur, schur_of_partition
from tauforge.grassmann import companions, reduce_point
from tauforge.psdo import (PsiDO, TruncationError, dress_from_tau,
                           sample_points, verify_constraint, verify_flows)

from conftest import random_poly

D, FL = 3, -6
ONE = ChargedPoly(MPoly.const(1, 1), 0)


def var(i, vars=D):
    return RatFun(MPoly.variable(vars, i))


def mult(f):
    return PsiDO.multiplier(f, FL)


d = PsiDO.d(D, FL)
dinv = PsiDO.d(D, FL, -1)


class TestCompose:
    def test_leibniz(self):
        got = d * mult(var(1))
        assert got == PsiDO(D, {1: var(1), 0: RatFun.from_const(D, 1)}, FL)

    def test_inverse_order_terminates_on_polynomials(self):
        got = dinv * mult(var(1))
        assert got == PsiDO(D, {-1: var(1), -2: RatFun.from_const(D, -1)}, FL)
        assert got.exact_to is None  # series ended naturally, fully exact

    def test_dinv_d_cancels(self):
        assert dinv * d == PsiDO.identity(D, FL)
        assert d * dinv == PsiDO.identity(D, FL)

    def test_rational_coefficient_series_truncates(self):
        got = dinv * mult(var(1).inverse())
        assert got.exact_to == FL  # infinite tail was cut at the floor
        with pytest.raises(TruncationError):
            got.coeff(FL - 1)

    def test_associativity_random(self):
        rng = random.Random(3)
        for _ in range(20):
            ops = []
            for _ in range(3):
                coeffs = {rng.randint(-2, 2): RatFun(random_poly(rng, D))
                          for _ in range(2)}
                ops.append(PsiDO(D, coeffs, FL))
            a, b, c = ops
            assert (a * b) * c == a * (b * c)


class TestAdjoint:
    def test_derivative_flips_sign(self):
        assert d.adjoint() == -d

    def test_sandwich(self):
        q, r = var(2), var(3)
        lhs = (mult(q) * dinv * mult(r)).adjoint()
        rhs = -(mult(r) * dinv * mult(q))
        assert lhs == rhs

    def test_involution(self):
        a = d * d + mult(var(1)) * d
        assert a.adjoint().adjoint() == a

    def test_anti_homomorphism_random(self):
        rng = random.Random(7)
        for _ in range(20):
            a = PsiDO(D, {rng.randint(0, 2): RatFun(random_poly(rng, D))
                          for _ in range(2)}, FL)
            b = PsiDO(D, {rng.randint(-1, 2): RatFun(random_poly(rng, D))
                          for _ in range(2)}, FL)
            assert (a * b).adjoint() == b.adjoint() * a.adjoint()


class TestSplit:
    def test_examples(self):
        u = mult(var(2))
        op = d + u * dinv
        plus, minus = op.split()
        assert plus == d and minus == u * dinv
        plus, minus = (d * d).split()
        assert plus == d * d and minus.is_zero
        op = mult(var(1)) * dinv * dinv + PsiDO(D, {0: RatFun.from_const(D, 3)}, FL)
        plus, minus = op.split()
        assert plus == PsiDO(D, {0: RatFun.from_const(D, 3)}, FL)

    def test_direct_sum(self):
        rng = random.Random(11)
        for _ in range(15):
            op = PsiDO(D, {rng.randint(-3, 3): RatFun(random_poly(rng, D))
                           for _ in range(3)}, FL)
            plus, minus = op.split()
            assert plus + minus == op
            again_plus, again_minus = plus.split()
            assert again_plus == plus and again_minus.is_zero


class TestDressing:
    def test_trivial_tau(self):
        pair = dress_from_tau(ONE, 5)
        assert pair.P == PsiDO.identity(pair.P.vars, pair.P.floor)
        assert pair.L == PsiDO.d(pair.L.vars, pair.L.floor)

    def test_linear_tau(self):
        pair = dress_from_tau(ChargedPoly(MPoly.variable(1, 1), 0), 5)
        vars = pair.P.vars
        t1 = MPoly.variable(vars, 1)
        assert pair.P.coeff(-1).equals(RatFun(MPoly.const(vars, -1), t1))
        assert pair.L.coeff(-1).equals(RatFun(MPoly.const(vars, -1), t1 ** 2))

    def test_s2_tau(self):
        S2 = elementary_schur(2, 2)
        pair = dress_from_tau(ChargedPoly(S2, 0), 5)
        t1 = MPoly.variable(2, 1)
        assert pair.P.coeff(-1).equals(RatFun(-t1, S2))
        assert pair.P.coeff(-2).is_zero
        assert pair.P.coeff(-5).is_zero

    @pytest.mark.parametrize("shape", [(1,), (2,), (2, 1)])
    def test_u1_is_second_log_derivative(self, shape):
        tau = schur_of_partition(Partition(shape), max(sum(shape), 1))
        pair = dress_from_tau(ChargedPoly(tau, 0), 4)
        vars = pair.L.vars
        base = tau.embed(vars)
        log_slope = RatFun(base.differentiate(1), base)
        assert pair.L.coeff(-1).equals(log_slope.differentiate(1))

    def test_zero_tau_rejected(self):
        with pytest.raises(ValueError):
            dress_from_tau(ChargedPoly(MPoly.zero(1), 0), 4)


class TestConstraint:
    def test_vacuum(self):
        report = verify_constraint(ONE, [], [], 1, 5)
        assert report.all_pass

    def test_golden_to_depth_five(self, golden_point):
        tau, rhos, sigmas = companions(golden_point, 1, 6)
        report = verify_constraint(tau, rhos, sigmas, 1, 5, trials=20, seed=0)
        assert report.all_pass
        orders = [c.order for c in report.checks]
        assert orders == [-1, -2, -3, -4, -5]
        assert all(c.method == "cross-multiplication" for c in report.checks)

    def test_golden_without_pairs_fails_at_minus_one(self, golden_point):
        tau, _, _ = companions(golden_point, 1, 6)
        report = verify_constraint(tau, [], [], 1, 3)
        failing = [c.order for c in report.checks if not c.passed]
        assert -1 in failing

    def test_golden_k2(self, golden_point):
        tau, rhos, sigmas = companions(golden_point, 2, 6)
        assert verify_constraint(tau, rhos, sigmas, 2, 4).all_pass

    def test_minimality(self, golden_point):
        # dropping the only pair breaks the constraint, matching n = 1
        tau, rhos, sigmas = companions(golden_point, 1, 6)
        assert not verify_constraint(tau, [], [], 1, 3).all_pass

    def test_minimality_two_pairs(self):
        point = reduce_point([{-4: F(1)}, {-2: F(1)}], -1)
        tau, rhos, sigmas = companions(point, 1)
        assert len(rhos) == 2
        assert verify_constraint(tau, rhos, sigmas, 1, 3).all_pass
        for drop in range(2):
            subset_r = [r for j, r in enumerate(rhos) if j != drop]
            subset_s = [s for j, s in enumerate(sigmas) if j != drop]
            assert not verify_constraint(tau, subset_r, subset_s, 1, 3).all_pass

    def test_two_pair_flows(self):
        point = reduce_point([{-4: F(1)}, {-2: F(1)}], -1)
        tau, rhos, sigmas = companions(point, 1)
        reports = verify_flows(tau, rhos, sigmas, 1, 3, trials=5, seed=2)
        assert [r.label for r in reports] == \
            ["lax-flow-t1", "q_1-flow-t1", "r_1-flow-t1",
             "q_2-flow-t1", "r_2-flow-t1"]
        assert all(r.all_pass for r in reports)

    def test_report_json(self, golden_point):
        tau, rhos, sigmas = companions(golden_point, 1, 6)
        payload = verify_constraint(tau, rhos, sigmas, 1, 3).to_json()
        assert payload["pass"] is True
        assert [c["order"] for c in payload["orders"]] == [-1, -2, -3]


class TestFlows:
    def test_vacuum(self):
        reports = verify_flows(ONE, [], [], 2, 3)
        assert all(r.all_pass for r in reports)

    def test_golden_k1(self, golden_point):
        tau, rhos, sigmas = companions(golden_point, 1, 6)
        reports = verify_flows(tau, rhos, sigmas, 1, 4)
        assert [r.label for r in reports] == \
            ["lax-flow-t1", "q_1-flow-t1", "r_1-flow-t1"]
        assert all(r.all_pass for r in reports)

    def test_golden_k2(self, golden_point):
        tau, rhos, sigmas = companions(golden_point, 2, 6)
        reports = verify_flows(tau, rhos, sigmas, 2, 3)
        assert all(r.all_pass for r in reports)


class TestSampling:
    def test_points_avoid_poles(self):
        tau = MPoly.variable(2, 1)
        pts = sample_points(2, [tau], 10, seed=4)
        assert len(pts) == 10
        assert all(tau.evaluate(p) != 0 for p in pts)

    def test_deterministic(self):
        a = sample_points(3, [], 5, seed=9)
        b = sample_points(3, [], 5, seed=9)
        assert a == b


def test_psdo_json_roundtrip():
    op = d + mult(var(1)) * dinv
    back = PsiDO.from_json(op.to_json())
    assert back == PsiDO(D, dict(op.coeffs), op.floor)
