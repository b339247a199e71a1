import random
from fractions import Fraction as F

import pytest

from tauforge.mpoly import MPoly
from tauforge.ratfun import PoleError, RatFun, ratfun_normalize

from conftest import random_poly


def V(i, vars=2):
    return MPoly.variable(vars, i)


class TestNormalization:
    def test_scalar_denominator(self):
        f = RatFun(V(1) * 2, MPoly.const(2, 2))
        assert f.num == V(1)
        assert f.den == MPoly.const(2, 1)

    def test_gcd_style_cancellation(self):
        f = RatFun(V(1)**2 - V(2)**2, V(1) + V(2))
        assert f.num == V(1) - V(2)
        assert f.den == MPoly.const(2, 1)

    def test_zero_numerator(self):
        f = RatFun(MPoly.zero(2), V(1))
        assert f.is_zero
        assert f.den == MPoly.const(2, 1)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RatFun(V(1), MPoly.zero(2))

    def test_power_cancellation(self):
        # denominators built through the arithmetic keep their factored
        # shape, so a tau reappearing in the numerator cancels exactly
        tau = V(1)**2 + V(2)
        f = RatFun(tau * V(2), tau) * RatFun(MPoly.const(2, 1), tau)
        assert f.num == V(2)
        assert f.den == tau

    def test_normalize_idempotent(self):
        f = RatFun(V(1) * 6, V(2) * 4)
        g = ratfun_normalize(f)
        assert g.equals(f)
        assert g.den.content() == 1


class TestArithmetic:
    def test_common_denominator_add(self):
        tau = V(1)**2 + V(2)
        a = RatFun(V(1), tau)
        b = RatFun(V(2), tau)
        s = a + b
        assert s.equals(RatFun(V(1) + V(2), tau))
        assert s.den == tau  # no degree explosion on shared denominators

    def test_field_identities_random(self):
        rng = random.Random(41)
        for _ in range(25):
            num1, den1 = random_poly(rng, 2), random_poly(rng, 2)
            num2, den2 = random_poly(rng, 2), random_poly(rng, 2)
            if den1.is_zero or den2.is_zero or num2.is_zero:
                continue
            a = RatFun(num1, den1)
            b = RatFun(num2, den2)
            assert (a + b - b).equals(a)
            assert (a * b / b).equals(a)
            assert (a * b).equals(b * a)

    def test_inverse(self):
        f = RatFun(V(1), V(2))
        assert (f * f.inverse()).equals(RatFun.from_const(2, 1))
        with pytest.raises(ZeroDivisionError):
            RatFun(MPoly.zero(2)).inverse()


class TestDerivative:
    def test_inverse_power_rule(self):
        f = RatFun(MPoly.const(2, 1), V(1))
        assert f.differentiate(1).equals(RatFun(MPoly.const(2, -1), V(1)**2))

    def test_quotient_rule_random(self):
        rng = random.Random(7)
        for _ in range(15):
            num, den = random_poly(rng, 2), random_poly(rng, 2)
            if den.is_zero:
                continue
            f = RatFun(num, den)
            lhs = f.differentiate(1)
            rhs = RatFun(num.differentiate(1) * den - num * den.differentiate(1),
                         den * den)
            assert lhs.equals(rhs)


class TestEvaluation:
    def test_separate_num_den(self):
        f = RatFun(V(1)**2 - V(2)**2, V(1) - V(2))
        assert f.evaluate([F(3), F(1)]) == 4

    def test_pole_error(self):
        f = RatFun(V(1), V(2))
        with pytest.raises(PoleError):
            f.evaluate([F(1), F(0)])

    def test_cross_mult_equality_matches_evaluation(self):
        rng = random.Random(13)
        pairs = 0
        while pairs < 10:
            num, den = random_poly(rng, 2), random_poly(rng, 2)
            if den.is_zero:
                continue
            f = RatFun(num, den)
            g = RatFun(num * den, den * den)  # same function, bigger shape
            assert f.equals(g)
            crossed = RatFun(num + den, den)
            agree = f.equals(crossed)
            points = 0
            while points < 20:
                pt = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2)]
                try:
                    same = f.evaluate(pt) == crossed.evaluate(pt)
                except PoleError:
                    continue
                points += 1
                if not agree:
                    # a disagreement must eventually show up pointwise
                    if not same:
                        break
                else:
                    assert same
            pairs += 1


class TestSerialization:
    def test_json_roundtrip(self):
        f = RatFun(V(1) + 1, V(2)**2)
        g = RatFun.from_json(f.to_json())
        assert g.equals(f)
