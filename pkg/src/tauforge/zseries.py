"""Laurent objects in a formal variable z with polynomial coefficients.

A ZSeries stores finitely many coefficients (MPoly values) indexed by
integer z-order, together with the upper bound of the order range on
which it is guaranteed exact.  Everything below the stored support is an
exact zero; orders above ``exact_hi`` are unknown (a truncated kernel,
for instance).  Reading a coefficient outside the guaranteed range is an
error, never a silent zero, so residue extraction is provably exact.
"""

from __future__ import annotations

from fractions import Fraction
from .mpoly import MPoly, PolyError


class ExactnessError(ValueError):
    """Requested a coefficient outside the guaranteed-exact order range."""


class ZSeries:
    __slots__ = ("vars", "coeffs", "exact_hi")

    def __init__(self, vars: int, coeffs: dict[int, MPoly] | None = None,
                 exact_hi: int | None = None):
        clean: dict[int, MPoly] = {}
        for order, poly in (coeffs or {}).items():
            if poly.vars != vars:
                raise PolyError("coefficient variable count mismatch")
            if not poly.is_zero:
                clean[int(order)] = poly
        self.vars = vars
        self.coeffs = clean
        self.exact_hi = exact_hi  # None means exact at every order

    @classmethod
    def from_poly(cls, poly: MPoly, order: int = 0) -> "ZSeries":
        """A single term poly * z**order, exact everywhere."""
        return cls(poly.vars, {order: poly}, None)

    @property
    def min_order(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    @property
    def max_order(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def coeff(self, order: int) -> MPoly:
        if self.exact_hi is not None and order > self.exact_hi:
            raise ExactnessError(
                f"order {order} above guaranteed-exact bound {self.exact_hi}")
        return self.coeffs.get(order, MPoly.zero(self.vars))

    def residue(self) -> MPoly:
        """Coefficient of z**-1."""
        return self.coeff(-1)

    def _check(self, other: "ZSeries") -> None:
        if self.vars != other.vars:
            raise PolyError("variable counts differ")

    @staticmethod
    def _min_hi(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other: "ZSeries") -> "ZSeries":
        self._check(other)
        out = dict(self.coeffs)
        for order, poly in other.coeffs.items():
            s = out.get(order, MPoly.zero(self.vars)) + poly
            if s.is_zero:
                out.pop(order, None)
            else:
                out[order] = s
        return ZSeries(self.vars, out, self._min_hi(self.exact_hi, other.exact_hi))

    def __neg__(self) -> "ZSeries":
        return ZSeries(self.vars, {o: -p for o, p in self.coeffs.items()}, self.exact_hi)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def __mul__(self, other) -> "ZSeries":
        if isinstance(other, (int, Fraction)):
            return ZSeries(self.vars,
                           {o: p * other for o, p in self.coeffs.items()},
                           self.exact_hi)
        if isinstance(other, MPoly):
            return ZSeries(self.vars,
                           {o: p * other for o, p in self.coeffs.items()},
                           self.exact_hi)
        self._check(other)
        # Unknown orders above exact_hi of one factor contaminate products
        # starting at exact_hi + (lowest stored order of the other factor).
        hi: int | None = None
        if self.exact_hi is not None:
            lo = other.min_order
            hi = None if lo is None else self.exact_hi + lo
        if other.exact_hi is not None:
            lo = self.min_order
            h2 = None if lo is None else other.exact_hi + lo
            hi = self._min_hi(hi, h2)
        out: dict[int, MPoly] = {}
        for oa, pa in self.coeffs.items():
            for ob, pb in other.coeffs.items():
                order = oa + ob
                if hi is not None and order > hi:
                    continue
                prod = pa * pb
                if prod.is_zero:
                    continue
                s = out.get(order)
                s = prod if s is None else s + prod
                if s.is_zero:
                    out.pop(order, None)
                else:
                    out[order] = s
        return ZSeries(self.vars, out, hi)

    __rmul__ = __mul__

    def shift_z(self, power: int) -> "ZSeries":
        """Multiply by z**power."""
        hi = None if self.exact_hi is None else self.exact_hi + power
        return ZSeries(self.vars, {o + power: p for o, p in self.coeffs.items()}, hi)

    def truncate(self, hi: int) -> "ZSeries":
        """Forget everything above order hi and record the loss."""
        new_hi = hi if self.exact_hi is None else min(hi, self.exact_hi)
        return ZSeries(self.vars,
                       {o: p for o, p in self.coeffs.items() if o <= new_hi},
                       new_hi)

    def __eq__(self, other) -> bool:
        if isinstance(other, ZSeries):
            return (self.vars == other.vars and self.coeffs == other.coeffs
                    and self.exact_hi == other.exact_hi)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        parts = [f"({poly.format()})*z^{order}"
                 for order, poly in sorted(self.coeffs.items())]
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.exact_hi is None else f"  [exact to z^{self.exact_hi}]"
        return body + tail
