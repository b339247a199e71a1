"""Rational functions num/den with exact zero and equality tests.

Denominators are kept in factored form internally.  The dressing
pipeline only ever divides by powers of a fixed tau polynomial, so
factoring keeps additions from exploding the denominator degree, and
single-divisor exact division (no general multivariate gcd) is enough
to cancel factors that reappear in numerators.

Normative equality is cross-multiplication:  a/b == c/d  iff  a*d == c*b
as polynomials.  Zero testing is exact (numerator identically zero).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .mpoly import MPoly, PolyError, divexact


class PoleError(ArithmeticError):
    """Evaluation point lies on the zero locus of the denominator."""


def _factor_key(poly: MPoly):
    return tuple(sorted((exp, (c.numerator, c.denominator))
                        for exp, c in poly.terms.items()))


class RatFun:
    """Immutable rational function with factored denominator."""

    __slots__ = ("vars", "_num", "_factors")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        den = MPoly.const(num.vars, 1) if den is None else den
        if den.vars != num.vars:
            raise PolyError("numerator and denominator variable counts differ")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        factors = [] if den.total_degree() == 0 and den.coefficient((0,) * den.vars) == 1 \
            else [(den, 1)]
        self.vars = num.vars
        self._num, self._factors = _normalize(num, factors)

    @classmethod
    def _raw(cls, num: MPoly, factors: list[tuple[MPoly, int]]) -> "RatFun":
        self = object.__new__(cls)
        self.vars = num.vars
        self._num, self._factors = _normalize(num, factors)
        return self

    @classmethod
    def _fast(cls, num: MPoly, factors: tuple) -> "RatFun":
        """Skip cancellation; factors must already be canonical."""
        self = object.__new__(cls)
        self.vars = num.vars
        self._num = num
        self._factors = () if num.is_zero else factors
        return self

    @classmethod
    def from_const(cls, vars: int, value) -> "RatFun":
        return cls(MPoly.const(vars, value))

    @classmethod
    def from_poly(cls, poly: MPoly) -> "RatFun":
        return cls(poly)

    # -- views ----------------------------------------------------------

    @property
    def num(self) -> MPoly:
        return self._num

    @property
    def den(self) -> MPoly:
        out = MPoly.const(self.vars, 1)
        for base, power in self._factors:
            out = out * base**power
        return out

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, MPoly):
            return RatFun(other)
        return RatFun.from_const(self.vars, other)

    def __add__(self, other) -> "RatFun":
        other = self._coerce(other)
        if self.vars != other.vars:
            raise PolyError("variable counts differ")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self._factors == other._factors:
            return RatFun._fast(self._num + other._num, self._factors)
        merged: dict = {}
        for base, power in self._factors + other._factors:
            key = _factor_key(base)
            prev = merged.get(key)
            merged[key] = (base, max(prev[1], power) if prev else power)
        lcm_factors = list(merged.values())

        def lift(num: MPoly, own: list) -> MPoly:
            own_map = {_factor_key(b): p for b, p in own}
            for base, power in lcm_factors:
                need = power - own_map.get(_factor_key(base), 0)
                if need:
                    num = num * base**need
            return num

        num = lift(self._num, self._factors) + lift(other._num, other._factors)
        return RatFun._raw(num, lcm_factors)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun._fast(-self._num, self._factors)

    def __sub__(self, other) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return (-self) + other

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFun._fast(MPoly.zero(self.vars), ())
            return RatFun._fast(self._num * other, self._factors)
        other = self._coerce(other)
        if self.vars != other.vars:
            raise PolyError("variable counts differ")
        merged: dict = {}
        for base, power in self._factors + other._factors:
            key = _factor_key(base)
            prev = merged.get(key)
            merged[key] = (base, prev[1] + power if prev else power)
        return RatFun._raw(self._num * other._num, list(merged.values()))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        other = self._coerce(other)
        return self * other.inverse()

    def inverse(self) -> "RatFun":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun._raw(self.den, [(self._num, 1)])

    def differentiate(self, i: int) -> "RatFun":
        """Partial derivative with respect to t_i.

        d(n / prod f^e) = (n' * prod f - n * sum e_j f_j' prod_{l != j} f_l)
                          / prod f^(e+1)
        """
        if not self._factors:
            return RatFun._raw(self._num.differentiate(i), [])
        prod_f = MPoly.const(self.vars, 1)
        for base, _ in self._factors:
            prod_f = prod_f * base
        num = self._num.differentiate(i) * prod_f
        for j, (base, power) in enumerate(self._factors):
            rest = MPoly.const(self.vars, 1)
            for l, (b2, _) in enumerate(self._factors):
                if l != j:
                    rest = rest * b2
            num = num - self._num * base.differentiate(i) * rest * power
        return RatFun._raw(num, [(b, p + 1) for b, p in self._factors])

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        den_val = Fraction(1)
        for base, power in self._factors:
            v = base.evaluate(point)
            if v == 0:
                raise PoleError(f"denominator vanishes at {tuple(point)}")
            den_val *= v**power
        return self._num.evaluate(point) / den_val

    # -- comparisons ---------------------------------------------------------

    def equals(self, other) -> bool:
        """Cross-multiplied exact equality."""
        other = self._coerce(other)
        return (self._num * other.den - other._num * self.den).is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, (RatFun, MPoly, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"num": self._num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatFun":
        return cls(MPoly.from_json(data["num"]), MPoly.from_json(data["den"]))

    def __repr__(self) -> str:
        if not self._factors:
            return self._num.format()
        return f"({self._num.format()}) / ({self.den.format()})"


def _normalize(num: MPoly, factors: list[tuple[MPoly, int]]):
    """Canonical content/sign form with greedy factor cancellation."""
    if num.is_zero:
        return num, ()
    scale = Fraction(1)
    clean: list[tuple[MPoly, int]] = []
    for base, power in factors:
        if power == 0:
            continue
        if base.is_zero:
            raise ZeroDivisionError("zero denominator factor")
        c = base.content()
        base = base / c
        scale /= c**power
        if base.total_degree() == 0:  # constant factor folds into the scale
            continue
        while power > 0:
            q = divexact(num, base)
            if q is None:
                break
            num = q
            power -= 1
        if power:
            clean.append((base, power))
    num = num * scale
    merged: dict = {}
    for base, power in clean:
        key = _factor_key(base)
        prev = merged.get(key)
        merged[key] = (base, prev[1] + power if prev else power)
    ordered = tuple(sorted(merged.values(), key=lambda bp: _factor_key(bp[0])))
    return num, ordered


def ratfun_normalize(f: RatFun) -> RatFun:
    """Re-run canonicalization (content/sign rule plus factor cancellation)."""
    return RatFun(f.num, f.den)
