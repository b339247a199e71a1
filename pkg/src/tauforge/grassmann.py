"""Points of the polynomial Grassmannian and their tau-function data.

A point is a tail level T (the full cone spanned by s**-T, s**-T+1, ...)
plus finitely many extra Laurent vectors in the loop variable s, held in
reduced echelon form: pivots are lowest exponents, strictly increasing,
monic, and supported strictly below the tail.  The loop variable is
written s to keep it apart from the time variables t_i.

The fermion dictionary identifies s**e with the wedge index -e - 1/2, so
multiplication by s**k is the k-fold index lowering on wedge factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .mpoly import MPoly, format_rat, parse_rat
from .schur import ChargedPoly, DomainError, elementary_schur
from .fock import (FockVector, MayaState, WindowMatrix, _state_from_indices,
                   sigma_single, wedge_vector)

LaurentVector = dict[int, Fraction]


class GrassmannError(ValueError):
    pass


class DegenerateCompanionError(GrassmannError):
    """A companion vanished, so the requested pair count is not minimal."""


def exp_to_index(e: int) -> Fraction:
    return Fraction(-2 * e - 1, 2)


def index_to_exp(i: Fraction) -> int:
    e = -i - Fraction(1, 2)
    if e.denominator != 1:
        raise GrassmannError(f"index {i} is not a half-integer")
    return int(e)


def _vec_clean(vec: Mapping[int, Fraction]) -> LaurentVector:
    return {int(e): Fraction(c) for e, c in vec.items() if c}


def _vec_scale(vec: LaurentVector, c: Fraction) -> LaurentVector:
    return {e: v * c for e, v in vec.items()} if c else {}


def _vec_sub(a: LaurentVector, b: LaurentVector, c: Fraction) -> LaurentVector:
    out = dict(a)
    for e, v in b.items():
        w = out.get(e, Fraction(0)) - c * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def vec_mul_sk(vec: LaurentVector, k: int) -> LaurentVector:
    return {e + k: c for e, c in vec.items()}


@dataclass(frozen=True)
class GrPoint:
    """Reduced representative: tail level plus echelon extra basis."""

    tail: int
    basis: tuple[tuple[tuple[int, Fraction], ...], ...] = ()

    def vectors(self) -> list[LaurentVector]:
        return [dict(v) for v in self.basis]

    @property
    def charge(self) -> int:
        return self.tail + len(self.basis)

    def pivots(self) -> list[int]:
        return [min(dict(v)) for v in self.basis]

    def reduce_vector(self, vec: LaurentVector) -> LaurentVector:
        """Remainder of vec modulo this point (empty iff member)."""
        rem = {e: c for e, c in _vec_clean(vec).items() if e < -self.tail}
        for row in self.vectors():
            p = min(row)
            if p in rem:
                rem = _vec_sub(rem, row, rem[p] / row[p])
        return rem

    def contains_vector(self, vec: LaurentVector) -> bool:
        return not self.reduce_vector(vec)

    def contains_point(self, other: "GrPoint") -> bool:
        for e in range(-other.tail, -self.tail):
            if not self.contains_vector({e: Fraction(1)}):
                return False
        return all(self.contains_vector(v) for v in other.vectors())

    def to_json(self) -> dict:
        rows = []
        for vec in self.vectors():
            lo, hi = min(vec), max(vec)
            rows.append({"minExp": lo,
                         "coefs": [format_rat(vec.get(e, Fraction(0)))
                                   for e in range(lo, hi + 1)]})
        return {"tail": self.tail, "basis": rows}

    @classmethod
    def from_json(cls, data: dict) -> "GrPoint":
        vectors = []
        for row in data.get("basis", []):
            lo = int(row["minExp"])
            vectors.append({lo + i: parse_rat(c)
                            for i, c in enumerate(row["coefs"])})
        return reduce_point(vectors, int(data["tail"]))

    def __str__(self) -> str:
        def fmt(vec):
            return " + ".join(f"{format_rat(c)}*s^{e}" for e, c in sorted(vec.items()))
        body = ", ".join(fmt(v) for v in self.vectors()) or "-"
        return f"GrPoint(tail H_{self.tail}; {body})"


def reduce_point(vectors: Iterable[Mapping[int, Fraction]], tail: int) -> GrPoint:
    """Canonical echelon representative of span(vectors) + H_tail."""
    rows: list[LaurentVector] = []
    for raw in vectors:
        vec = {e: c for e, c in _vec_clean(raw).items() if e < -tail}
        while vec:
            p = min(vec)
            hit = next((r for r in rows if min(r) == p), None)
            if hit is None:
                rows.append(_vec_scale(vec, 1 / vec[p]))
                break
            vec = _vec_sub(vec, hit, vec[p] / hit[p])
    rows.sort(key=min)
    for i, row in enumerate(rows):  # back-substitute for a fully reduced form
        for other in rows[i + 1:]:
            p = min(other)
            if p in row:
                row = _vec_sub(row, other, row[p] / other[p])
        rows[i] = row
    return GrPoint(tail, tuple(tuple(sorted(r.items())) for r in rows))


def point_charge(point: GrPoint) -> int:
    return point.charge


# -- the stability filtration ---------------------------------------------------

def _stable_split(point: GrPoint, k: int
                  ) -> tuple[list[LaurentVector], list[LaurentVector], int]:
    """Kernel/complement split of multiplication by s**k modulo the point.

    Returns (kernel vectors, complement vectors, codimension).  Kernel
    vectors are re-echelonized so all pivots across both groups stay
    distinct, which the wedge constructions rely on.
    """
    if k < 1:
        raise GrassmannError("the constraint power k must be positive")
    extras = point.vectors()
    residuals = [point.reduce_vector(vec_mul_sk(v, k)) for v in extras]
    support = sorted({e for r in residuals for e in r})
    rows = [[r.get(e, Fraction(0)) for r in residuals] for e in support]
    kernel_coords = _nullspace(rows, len(extras))
    kernel = []
    for coords in kernel_coords:
        vec: LaurentVector = {}
        for c, extra in zip(coords, extras):
            if c:
                vec = _vec_sub(vec, extra, -c)
        kernel.append(vec)
    kernel_point = reduce_point(kernel, point.tail)
    kernel_vecs = kernel_point.vectors()
    kernel_pivots = {min(v) for v in kernel_vecs}
    complement = [v for v in extras if min(v) not in kernel_pivots]
    n = len(extras) - len(kernel_vecs)
    if len(complement) != n:
        raise GrassmannError("pivot bookkeeping failed in the stable split")
    return kernel_vecs, complement, n


def _nullspace(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the kernel of the matrix given by rows (width columns)."""
    grid = [list(r) for r in rows]
    pivots: dict[int, int] = {}
    rank = 0
    for col in range(width):
        pivot_row = next((r for r in range(rank, len(grid)) if grid[r][col]), None)
        if pivot_row is None:
            continue
        grid[rank], grid[pivot_row] = grid[pivot_row], grid[rank]
        inv = 1 / grid[rank][col]
        grid[rank] = [v * inv for v in grid[rank]]
        for r in range(len(grid)):
            if r != rank and grid[r][col]:
                factor = grid[r][col]
                grid[r] = [a - factor * b for a, b in zip(grid[r], grid[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    free = [c for c in range(width) if c not in pivots]
    for f in free:
        vec = [Fraction(0)] * width
        vec[f] = Fraction(1)
        for col, row in pivots.items():
            vec[col] = -grid[row][f]
        basis.append(vec)
    return basis


def stable_subspace(point: GrPoint, k: int) -> tuple[GrPoint, int]:
    """Maximal subspace whose s**k multiple stays inside, with codimension.

    The codimension is the minimal pair count n of the filtration level
    containing the point; n = 0 is exactly the k-reduction.
    """
    kernel_vecs, _, n = _stable_split(point, k)
    return reduce_point(kernel_vecs, point.tail), n


# -- wedges and tau functions -----------------------------------------------------

def _column_of(vec: LaurentVector) -> dict[Fraction, Fraction]:
    return {exp_to_index(e): c for e, c in vec.items()}


def _wedge_factors(factors: Sequence[LaurentVector], tail: int) -> FockVector:
    v = FockVector.vacuum(tail)
    for vec in reversed(list(factors)):
        v = wedge_vector(_column_of(vec), v)
    return v


def _pivot_state(pivots: Sequence[int], tail: int) -> MayaState:
    indices = sorted((exp_to_index(p) for p in pivots), reverse=True)
    return _state_from_indices(indices, tail + len(pivots))


def fock_of(point: GrPoint) -> FockVector:
    """The perfect wedge of the point, scaled so the pivot minor is 1."""
    wedge = _wedge_factors(point.vectors(), point.tail)
    anchor = _pivot_state(point.pivots(), point.tail)
    c = wedge.terms.get(anchor)
    if not c:
        raise GrassmannError("echelon wedge lost its pivot coordinate")
    return wedge / c


def tau_of(point: GrPoint, D: int | None = None) -> ChargedPoly:
    """Schur expansion of the point's wedge, normalized on the pivot minor."""
    wedge = fock_of(point)
    needed = max((sum(s.parts) for s in wedge.terms), default=0)
    if D is None:
        D = max(needed, 1)
    elif D < max(needed, 1):
        raise DomainError(f"need D >= {needed} for this point, got {D}")
    return sigma_single(wedge, D)


def companions(point: GrPoint, k: int, D: int | None = None
               ) -> tuple[ChargedPoly, list[ChargedPoly], list[ChargedPoly]]:
    """Adapted tau with its n companion pairs at charges m+1 and m-k-1."""
    tau_fv, rho_fvs, sigma_fvs = companion_wedges(point, k)
    weights = [max((sum(s.parts) for s in fv.terms), default=0)
               for fv in [tau_fv, *rho_fvs, *sigma_fvs]]
    needed = max(max(weights), 1)
    if D is None:
        D = needed
    elif D < needed:
        raise DomainError(f"need D >= {needed} for these companions, got {D}")
    tau = sigma_single(tau_fv, D)
    rhos = [sigma_single(fv, D) for fv in rho_fvs]
    sigmas = [sigma_single(fv, D) for fv in sigma_fvs]
    return tau, rhos, sigmas


def companion_wedges(point: GrPoint, k: int
                     ) -> tuple[FockVector, list[FockVector], list[FockVector]]:
    """Fock-side companions: the normative objects behind the identities.

    With factors ordered complement-first, the pairing of tau against its
    k-shifted wedge telescopes onto the complement, giving
    rho_j = (s**k w_j) wedge tau and sigma_j = (-1)**(j-1) times the
    shifted wedge with factor j dropped.
    """
    kernel_vecs, complement, n = _stable_split(point, k)
    factors = list(complement) + list(kernel_vecs)
    tau_fv = _wedge_factors(factors, point.tail)
    anchor = _pivot_state([min(v) for v in factors], point.tail)
    c = tau_fv.terms.get(anchor)
    if not c:
        raise GrassmannError("echelon wedge lost its pivot coordinate")
    tau_fv = tau_fv / c
    rho_fvs = []
    sigma_fvs = []
    for j in range(n):
        rho = wedge_vector(_column_of(vec_mul_sk(factors[j], k)), tau_fv)
        if rho.is_zero:
            raise DegenerateCompanionError(f"companion {j + 1} vanished")
        rho_fvs.append(rho)
        rest = [vec_mul_sk(f, k) for i, f in enumerate(factors) if i != j]
        sigma = _wedge_factors(rest, point.tail - k) / c
        if j % 2:
            sigma = -sigma
        if sigma.is_zero:
            raise DegenerateCompanionError(f"companion {j + 1} vanished")
        sigma_fvs.append(sigma)
    return tau_fv, rho_fvs, sigma_fvs


def dtk_decomposition(point: GrPoint, k: int, D: int | None = None
                      ) -> list[ChargedPoly]:
    """Split d(tau)/dt_k into wedge summands, one per complement factor.

    Replacing a stable factor by its s**k multiple reproduces no basis
    vector (pivots are distinct), so only the complement contributes and
    every summand is itself a perfect wedge.
    """
    kernel_vecs, complement, n = _stable_split(point, k)
    factors = list(complement) + list(kernel_vecs)
    anchor = _pivot_state([min(v) for v in factors], point.tail)
    base = _wedge_factors(factors, point.tail)
    c = base.terms.get(anchor)
    if not c:
        raise GrassmannError("echelon wedge lost its pivot coordinate")
    parts: list[ChargedPoly] = []
    if D is None:
        weights = []
        for j in range(n):
            replaced = factors[:j] + [vec_mul_sk(factors[j], k)] + factors[j + 1:]
            fv = _wedge_factors(replaced, point.tail)
            weights.append(max((sum(s.parts) for s in fv.terms), default=0))
        D = max(weights + [1])
    for j in range(n):
        replaced = factors[:j] + [vec_mul_sk(factors[j], k)] + factors[j + 1:]
        fv = _wedge_factors(replaced, point.tail) / c
        if fv.is_zero:
            continue
        parts.append(sigma_single(fv, D))
    return parts


# -- solution generator -------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorReport:
    rows: int
    cols: int
    k: int
    violating_columns: tuple[int, ...]  # 1-based

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "k": self.k,
                "violations": list(self.violating_columns)}


class GeneratorConditionError(GrassmannError):
    def __init__(self, message: str, report: GeneratorReport):
        super().__init__(message)
        self.report = report


def _rank(columns: list[list[Fraction]]) -> int:
    if not columns:
        return 0
    grid = [list(row) for row in zip(*columns)]
    rank = 0
    width = len(columns)
    for col in range(width):
        pivot_row = next((r for r in range(rank, len(grid)) if grid[r][col]), None)
        if pivot_row is None:
            continue
        grid[rank], grid[pivot_row] = grid[pivot_row], grid[rank]
        inv = 1 / grid[rank][col]
        grid[rank] = [v * inv for v in grid[rank]]
        for r in range(len(grid)):
            if r != rank and grid[r][col]:
                f = grid[r][col]
                grid[r] = [a - f * b for a, b in zip(grid[r], grid[rank])]
        rank += 1
    return rank


def generate_from_matrix(entries: Sequence[Sequence[Fraction]], k: int,
                         n: int, D: int | None = None
                         ) -> tuple[GrPoint, ChargedPoly, GeneratorReport]:
    """Polynomial solution from an M x N rank-N matrix of chain data.

    The shift matrix R drops every row index by k.  Columns must chain
    (R A_j is the next column or zero) except for at most n of them; the
    tau determinant det(sum_l S_{l-i} A_{lj}) then lands in filtration
    level n.  Rows map to loop vectors by e_l -> s**(N-l), columns enter
    the wedge in reverse order over the tail at level -N.
    """
    M = len(entries)
    if M == 0 or any(len(row) != len(entries[0]) for row in entries):
        raise GrassmannError("matrix entries must be rectangular and nonempty")
    N = len(entries[0])
    if not (M > N > 0):
        raise GrassmannError(f"need rows > cols > 0, got {M} x {N}")
    grid = [[Fraction(v) for v in row] for row in entries]
    columns = [[grid[i][j] for i in range(M)] for j in range(N)]
    if _rank(columns) != N:
        raise GrassmannError(f"matrix rank below {N}")

    def shifted(col: list[Fraction]) -> list[Fraction]:
        return [col[i + k] if i + k < M else Fraction(0) for i in range(M)]

    for j in range(N):
        r_col = shifted(columns[j])
        for i in range(j):
            if r_col == columns[i] and any(r_col):
                raise GrassmannError(
                    f"shift of column {j + 1} duplicates earlier column {i + 1}")
    violating = []
    for j in range(N):
        r_col = shifted(columns[j])
        chains = not any(r_col) or (j + 1 < N and r_col == columns[j + 1])
        if not chains:
            violating.append(j + 1)
    report = GeneratorReport(M, N, k, tuple(violating))
    if len(violating) > n:
        raise GeneratorConditionError(
            f"{len(violating)} columns break the chain condition, allowed {n}",
            report)

    if D is None:
        D = max(M - 1, 1)
    elif D < max(M - 1, 1):
        raise DomainError(f"need D >= {max(M - 1, 1)} for this matrix, got {D}")
    det_grid = []
    for i in range(1, N + 1):
        row = []
        for j in range(N):
            acc = MPoly.zero(D)
            for l in range(1, M + 1):
                if columns[j][l - 1] and l - i >= 0:
                    acc = acc + elementary_schur(l - i, D) * columns[j][l - 1]
            row.append(acc)
        det_grid.append(row)
    tau = _poly_det(det_grid, D)

    vectors = [{N - l: columns[j][l - 1] for l in range(1, M + 1)
                if columns[j][l - 1]} for j in range(N)]
    point = reduce_point(vectors, -N)
    return point, ChargedPoly(tau, point.charge), report


def _poly_det(grid: list[list[MPoly]], D: int) -> MPoly:
    n = len(grid)
    if n == 1:
        return grid[0][0]
    acc = MPoly.zero(D)
    for i in range(n):
        if grid[i][0].is_zero:
            continue
        minor = [row[1:] for j, row in enumerate(grid) if j != i]
        term = grid[i][0] * _poly_det(minor, D)
        acc = acc + (term if i % 2 == 0 else -term)
    return acc


def grpoint_from_window_matrix(matrix: WindowMatrix, charge: int) -> GrPoint:
    """The point carrying the same wedge as the matrix columns below charge."""
    N = matrix.window
    vectors = []
    j = Fraction(-2 * N + 1, 2)
    top = Fraction(2 * charge - 1, 2)
    while j <= top:
        col = matrix.column(j)
        vectors.append({index_to_exp(i): c for i, c in col.items()})
        j += 1
    return reduce_point(vectors, -N)
