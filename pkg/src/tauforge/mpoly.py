"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in variables t_1..t_D is stored as a mapping from exponent
tuples (length D) to nonzero Fraction coefficients.  The zero polynomial
is the empty mapping.  All arithmetic is exact; nothing in this package
ever touches floating point.

The weighted degree gives variable t_i weight i, so wdeg(t_2) = 2 and
wdeg(t_1**3) = 3.  This is the grading under which the generating-series
kernels used elsewhere are homogeneous.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Sequence

Exponent = tuple[int, ...]

Rat = Fraction


class PolyError(ValueError):
    """Variable-count mismatch or invalid variable index."""


def parse_rat(text: str) -> Fraction:
    """Parse an exact rational from a "p" or "p/q" string."""
    return Fraction(text.strip())


def format_rat(value: Fraction) -> str:
    """Serialize an exact rational as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    return (sum(exp), exp)


class MPoly:
    """Immutable sparse polynomial over Fraction coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: int, terms: dict[Exponent, Fraction] | None = None):
        if vars < 0:
            raise PolyError(f"variable count must be nonnegative, got {vars}")
        clean: dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            if len(exp) != vars:
                raise PolyError(f"exponent {exp} has length {len(exp)}, expected {vars}")
            c = Fraction(coef)
            if c != 0:
                clean[tuple(exp)] = c
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def _make(cls, vars: int, terms: dict[Exponent, Fraction]) -> "MPoly":
        """Internal fast path: terms must already be clean (no zeros)."""
        self = object.__new__(cls)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", terms)
        return self

    @classmethod
    def zero(cls, vars: int) -> "MPoly":
        return cls._make(vars, {})

    @classmethod
    def const(cls, vars: int, value) -> "MPoly":
        c = Fraction(value)
        if c == 0:
            return cls.zero(vars)
        return cls(vars, {(0,) * vars: c})

    @classmethod
    def variable(cls, vars: int, i: int) -> "MPoly":
        """The polynomial t_i (1-based index)."""
        if not 1 <= i <= vars:
            raise PolyError(f"variable index {i} out of range 1..{vars}")
        exp = [0] * vars
        exp[i - 1] = 1
        return cls(vars, {tuple(exp): Fraction(1)})

    # -- predicates ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    __hash__ = None  # mutable-dict payload; equality by content only

    # -- ring operations -----------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if self.vars != other.vars:
            raise PolyError(f"variable counts differ: {self.vars} vs {other.vars}")

    def __add__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        get = out.get
        for exp, coef in other.terms.items():
            c = get(exp)
            if c is None:
                out[exp] = coef
            elif c == -coef:
                del out[exp]
            else:
                out[exp] = c + coef
        return MPoly._make(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._make(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        get = out.get
        for exp, coef in other.terms.items():
            c = get(exp)
            if c is None:
                out[exp] = -coef
            elif c == coef:
                del out[exp]
            else:
                out[exp] = c - coef
        return MPoly._make(self.vars, out)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = Fraction(other)
            if c == 0:
                return MPoly.zero(self.vars)
            return MPoly._make(self.vars, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return MPoly.zero(self.vars)
        out: dict[Exponent, Fraction] = {}
        get = out.get
        small, large = (self.terms, other.terms) \
            if len(self.terms) <= len(other.terms) else (other.terms, self.terms)
        for ea, ca in small.items():
            for eb, cb in large.items():
                exp = tuple(map(int.__add__, ea, eb))
                c = get(exp)
                prod = ca * cb
                if c is None:
                    out[exp] = prod
                elif c == -prod:
                    del out[exp]
                else:
                    out[exp] = c + prod
        return MPoly._make(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "MPoly":
        c = Fraction(scalar)
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return self * (1 / c)

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise PolyError("negative polynomial power")
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and evaluation ----------------------------------------

    def differentiate(self, i: int) -> "MPoly":
        """Exact partial derivative with respect to t_i (1-based)."""
        if not 1 <= i <= self.vars:
            raise PolyError(f"variable index {i} out of range 1..{self.vars}")
        out: dict[Exponent, Fraction] = {}
        for exp, coef in self.terms.items():
            e = exp[i - 1]
            if e == 0:
                continue
            new = list(exp)
            new[i - 1] = e - 1
            out[tuple(new)] = coef * e
        return MPoly._make(self.vars, out)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value at a rational point (one value per variable)."""
        if len(point) != self.vars:
            raise PolyError(f"point has {len(point)} coordinates, expected {self.vars}")
        vals = [Fraction(p) for p in point]
        total = Fraction(0)
        for exp, coef in self.terms.items():
            term = coef
            for e, v in zip(exp, vals):
                if e:
                    term *= v**e
            total += term
        return total

    # -- structure -------------------------------------------------------

    def wdeg(self, weights: Sequence[int] | None = None) -> int:
        """Weighted degree; variable t_i has weight i unless overridden.

        The zero polynomial reports 0.
        """
        if weights is None:
            weights = range(1, self.vars + 1)
        return max(
            (sum(w * e for w, e in zip(weights, exp)) for exp in self.terms),
            default=0,
        )

    def total_degree(self) -> int:
        return max((sum(exp) for exp in self.terms), default=0)

    def max_var_used(self) -> int:
        """Largest 1-based variable index with a nonzero exponent (0 if none)."""
        best = 0
        for exp in self.terms:
            for i in range(self.vars - 1, best - 1, -1):
                if exp[i]:
                    best = max(best, i + 1)
                    break
        return best

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading term in graded lexicographic order."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def content(self) -> Fraction:
        """Positive rational c with self/c integer, coprime coefficients.

        Carries the sign of the graded-lex leading coefficient so that
        self/content() has positive leading coefficient.  Zero maps to 1.
        """
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        mag = Fraction(num, den)
        _, lead = self.leading()
        return mag if lead > 0 else -mag

    # -- variable plumbing -------------------------------------------------

    def embed(self, new_vars: int, offset: int = 0) -> "MPoly":
        """Reinterpret in a larger variable space, shifting indices by offset."""
        if offset < 0 or self.max_var_used() + offset > new_vars:
            raise PolyError("embedding does not fit in target variable space")
        out = {}
        for exp, coef in self.terms.items():
            new = [0] * new_vars
            for i, e in enumerate(exp):
                if e:
                    new[i + offset] = e
            out[tuple(new)] = coef
        return MPoly._make(new_vars, out)

    def scale_vars(self, factors: Sequence[Fraction]) -> "MPoly":
        """Substitute t_i -> factors[i-1] * t_i."""
        if len(factors) != self.vars:
            raise PolyError("one scale factor per variable required")
        out: dict[Exponent, Fraction] = {}
        for exp, coef in self.terms.items():
            c = coef
            for e, f in zip(exp, factors):
                if e:
                    c *= Fraction(f) ** e
            if c:
                out[exp] = c
        return MPoly._make(self.vars, out)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        items = sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
        return {
            "vars": self.vars,
            "terms": [{"exp": list(e), "coef": format_rat(c)} for e, c in items],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MPoly":
        vars = int(data["vars"])
        terms = {}
        for item in data.get("terms", []):
            exp = tuple(int(e) for e in item["exp"])
            terms[exp] = terms.get(exp, Fraction(0)) + parse_rat(item["coef"])
        return cls(vars, terms)

    def format(self, names: Sequence[str] | None = None) -> str:
        """Render with terms in descending graded-lex order."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"t{i}" for i in range(1, self.vars + 1)]
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            coef = self.terms[exp]
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(exp)
                if e
            ]
            body = "*".join(factors)
            if not body:
                parts.append(format_rat(coef))
            elif coef == 1:
                parts.append(body)
            elif coef == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{format_rat(coef)}*{body}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"MPoly({self.vars}, {self.format()})"


def divexact(p: MPoly, d: MPoly) -> MPoly | None:
    """Exact polynomial quotient p/d, or None when d does not divide p.

    Single-divisor division in graded-lex order; sound as an exact
    divisibility test because a failed leading-term step implies a
    nonzero remainder.
    """
    if d.vars != p.vars:
        raise PolyError("variable counts differ in division")
    if d.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero:
        return MPoly.zero(p.vars)
    # both extreme monomials of p must be divisible by those of d
    d_exp = max(d.terms, key=_grlex_key)
    d_low = min(d.terms, key=_grlex_key)
    p_low = min(p.terms, key=_grlex_key)
    if any(a < b for a, b in zip(p_low, d_low)):
        return None
    d_coef = d.terms[d_exp]
    d_rest = [(exp, coef) for exp, coef in d.terms.items() if exp != d_exp]
    quotient: dict[Exponent, Fraction] = {}
    rem = dict(p.terms)
    get = rem.get

    def heap_key(exp: Exponent):
        return (-sum(exp), tuple(-e for e in exp))

    heap = [(heap_key(exp), exp) for exp in rem]
    heapq.heapify(heap)
    while heap:
        _, r_exp = heapq.heappop(heap)
        r_coef = get(r_exp)
        if r_coef is None:
            continue  # stale entry
        del rem[r_exp]
        q_exp = tuple(map(int.__sub__, r_exp, d_exp))
        if any(e < 0 for e in q_exp):
            return None
        q_coef = r_coef / d_coef
        quotient[q_exp] = q_coef
        for exp, coef in d_rest:
            key = tuple(map(int.__add__, q_exp, exp))
            c = get(key)
            prod = q_coef * coef
            if c is None:
                rem[key] = -prod
                heapq.heappush(heap, (heap_key(key), key))
            elif c == prod:
                del rem[key]
            else:
                rem[key] = c - prod
    return MPoly._make(p.vars, quotient)
