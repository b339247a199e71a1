"""Elementary Schur polynomials, partition Schur functions, Miwa shifts
and the exponential kernels that drive the bilinear residue checks.

Conventions.  S_i(t) is the coefficient of z**i in exp(sum t_j z**j),
with S_i = 0 for i < 0.  A partition indexes S_lambda through the
determinant det(S_{lambda_i - i + j}).  The doubled variable space for
two-point identities puts t_1..t_D in slots 1..D and the primed copies
t'_1..t'_D in slots D+1..2D of a single polynomial ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .mpoly import MPoly, PolyError
from .zseries import ZSeries


class DomainError(ValueError):
    """Variable count too small for the requested object."""


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers; () is empty."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        cols = [sum(1 for p in self.parts if p > i) for i in range(self.parts[0])]
        return Partition(tuple(cols))

    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data: Iterable[int]) -> "Partition":
        return cls(tuple(int(p) for p in data))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_of(n: int) -> list[Partition]:
    """All partitions of weight exactly n."""
    if n == 0:
        return [Partition()]
    out: list[Partition] = []

    def rec(remaining: int, maximum: int, prefix: list[int]):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for part in range(min(remaining, maximum), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def partitions_up_to(n: int) -> list[Partition]:
    return [p for w in range(n + 1) for p in partitions_of(w)]


@dataclass(frozen=True)
class ChargedPoly:
    """A polynomial with an integer charge marker."""

    poly: MPoly
    charge: int

    def to_json(self) -> dict:
        return {"charge": self.charge, "poly": self.poly.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ChargedPoly":
        return cls(MPoly.from_json(data["poly"]), int(data["charge"]))

    def __repr__(self) -> str:
        return f"ChargedPoly({self.poly.format()}, charge={self.charge})"


@lru_cache(maxsize=None)
def elementary_schur(i: int, D: int) -> MPoly:
    """S_i in variables t_1..t_D.

    S_i only involves t_j for j <= i, so D >= i is required (and enough);
    S_i = 0 for i < 0 and S_0 = 1.
    """
    if D < max(i, 1):
        raise DomainError(f"need D >= {max(i, 1)} to express S_{i}, got {D}")
    if i < 0:
        return MPoly.zero(D)
    if i == 0:
        return MPoly.const(D, 1)
    # i*S_i = sum_{j=1..i} j*t_j*S_{i-j}, from d/dz of the generating series
    acc = MPoly.zero(D)
    for j in range(1, i + 1):
        acc = acc + MPoly.variable(D, j) * elementary_schur(i - j, D) * j
    return acc / i


def schur_of_partition(shape: Partition, D: int) -> MPoly:
    """S_lambda = det(S_{lambda_i - i + j}) for i, j = 1..len(lambda)."""
    if D < max(shape.weight, 1):
        raise DomainError(f"need D >= {shape.weight} for {shape}, got {D}")
    n = len(shape)
    if n == 0:
        return MPoly.const(D, 1)
    grid = [[elementary_schur(shape.parts[i] - i + j, D) if shape.parts[i] - i + j >= 0
             else MPoly.zero(D)
             for j in range(n)] for i in range(n)]
    return _det(grid, D)


def _det(grid: list[list[MPoly]], D: int) -> MPoly:
    """Laplace expansion along the first column, skipping zero entries."""
    n = len(grid)
    if n == 1:
        return grid[0][0]
    acc = MPoly.zero(D)
    for i in range(n):
        entry = grid[i][0]
        if entry.is_zero:
            continue
        minor = [row[1:] for j, row in enumerate(grid) if j != i]
        term = entry * _det(minor, D)
        acc = acc + (term if i % 2 == 0 else -term)
    return acc


def miwa_shift(p: MPoly, sign: int, z_window: int | None = None,
               var_offset: int = 0, block: int | None = None) -> ZSeries:
    """Substitute t_i -> t_i + sign * z**-i / i and expand exactly.

    The result is a Laurent polynomial in z**-1 with orders in
    [-wdeg(p), 0]; the z**0 coefficient is p itself.  ``var_offset`` and
    ``block`` select a contiguous variable block to shift (slot b of the
    block carries weight b), which is how the primed copy of a doubled
    variable space gets its own shift.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    D = p.vars
    block = D - var_offset if block is None else block
    if var_offset < 0 or var_offset + block > D:
        raise PolyError("shift block out of range")
    weights = [0] * D
    for b in range(block):
        weights[var_offset + b] = b + 1
    depth = p.wdeg(weights)
    if z_window is not None and z_window < depth:
        raise DomainError(f"z window {z_window} below required depth {depth}")
    out: dict[int, dict] = {}
    for exp, coef in p.terms.items():
        # expand prod (t_i + sign*z^-i/i)^e_i over choices of binomial splits
        partials: list[tuple[int, tuple[int, ...], Fraction]] = [(0, exp, coef)]
        for pos in range(D):
            w = weights[pos]
            e = exp[pos]
            if w == 0 or e == 0:
                continue
            nxt: list[tuple[int, tuple[int, ...], Fraction]] = []
            for order, cur_exp, cur_coef in partials:
                binom = 1
                step = Fraction(1)
                for j in range(e + 1):
                    if j:
                        binom = binom * (e - j + 1) // j
                        step *= Fraction(sign, w)
                    new_exp = list(cur_exp)
                    new_exp[pos] = e - j
                    nxt.append((order - w * j, tuple(new_exp),
                                cur_coef * binom * step))
            partials = nxt
        for order, new_exp, c in partials:
            bucket = out.setdefault(order, {})
            bucket[new_exp] = bucket.get(new_exp, Fraction(0)) + c
    coeffs = {order: MPoly(D, bucket) for order, bucket in out.items()}
    return ZSeries(D, coeffs, None)


@lru_cache(maxsize=None)
def _difference_schur(i: int, D: int) -> MPoly:
    """S_i(t - t') over the doubled space of 2D variables."""
    if i < 0:
        return MPoly.zero(2 * D)
    if i == 0:
        return MPoly.const(2 * D, 1)
    acc = MPoly.zero(2 * D)
    for j in range(1, i + 1):
        xj = MPoly.variable(2 * D, j) - MPoly.variable(2 * D, D + j)
        acc = acc + xj * _difference_schur(i - j, D) * j
    return acc / i


def xi_kernel(D: int, order: int) -> ZSeries:
    """sum_{i=0..order} S_i(t - t') z**i over the doubled variable space.

    Exact up to z**order; reading beyond that is an ExactnessError.
    """
    if order > D:
        raise DomainError(f"kernel order {order} exceeds variable count {D}")
    coeffs = {i: _difference_schur(i, D) for i in range(max(order, 0) + 1)}
    return ZSeries(2 * D, coeffs, order)


def embed_t(p: MPoly, D: int) -> MPoly:
    """Place a D-variable polynomial in the t slots of the doubled space."""
    return p.embed(2 * D, 0)


def embed_tprime(p: MPoly, D: int) -> MPoly:
    """Place a D-variable polynomial in the t' slots of the doubled space."""
    return p.embed(2 * D, D)


def bilinear_window(w_left: int, w_right: int, weight: int) -> tuple[int, int]:
    """Sufficiency rule for a residue of z**weight against the kernel.

    Returns (lowest z order needed, kernel order needed).  The product of
    the two Miwa shifts reaches down to -(w_left + w_right), and the
    kernel must reach order w_left + w_right - 1 - weight to feed the
    residue, padded below by 0.
    """
    zmin = -(w_left + w_right) - max(weight, 0)
    kmax = max(w_left + w_right - 1 - weight, 0)
    return zmin, kmax


def hall_product(f: MPoly, g: MPoly) -> Fraction:
    """Exact Hall pairing in time coordinates.

    Monomials are orthogonal with <t^a, t^a> = prod_i a_i! / i^a_i, which
    makes the S_lambda an orthonormal family.
    """
    if f.vars != g.vars:
        raise PolyError("variable counts differ")
    total = Fraction(0)
    for exp, cf in f.terms.items():
        cg = g.terms.get(exp)
        if cg is None:
            continue
        norm = Fraction(1)
        for i, e in enumerate(exp, start=1):
            for j in range(1, e + 1):
                norm *= Fraction(j, i)
        total += cf * cg * norm
    return total


def schur_expand(p: MPoly) -> dict[Partition, Fraction]:
    """Write p as a combination of S_lambda (complete: they span)."""
    w_max = p.wdeg()
    D = max(p.vars, w_max, 1)
    lifted = p.embed(D)
    out: dict[Partition, Fraction] = {}
    for w in range(w_max + 1):
        for shape in partitions_of(w):
            c = hall_product(lifted, schur_of_partition(shape, D))
            if c:
                out[shape] = c
    check = MPoly.zero(D)
    for shape, c in out.items():
        check = check + schur_of_partition(shape, D) * c
    if not (check - lifted).is_zero:
        raise ArithmeticError("Schur expansion failed to reproduce the input")
    return out
