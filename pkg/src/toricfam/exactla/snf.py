"""Smith normal form and the lattice computations built on it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DimensionError
from .matrix import IntMatrix, row_echelon


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diagonal() if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.D.diagonal() if d != 0]


def _min_pivot(D, t, m, n):
    best = None
    for i in range(t, m):
        row = D[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def smith_normal_form(A: IntMatrix) -> SnfDecomposition:
    """Smith normal form by elementary row and column operations.

    Pivots are the nonzero entries of smallest absolute value in the remaining
    block, ties broken in row-major order, so the transforms are reproducible.
    """
    m, n = A.shape
    D = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (D, V):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = _min_pivot(D, t, m, n)
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            # a nonzero remainder is strictly smaller than the pivot: re-pivot on it
            cand = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            cand += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            if cand:
                _, i1, j1 = min(cand)
                swap_rows(t, i1)
                swap_cols(t, j1)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    return SnfDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(D, n), IntMatrix.from_rows(V, n)
    )


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of a full-row-rank integer matrix.

    Positive pivots, entries above each pivot reduced into ``[0, pivot)``.
    The result spans the same row lattice.
    """
    a = [list(r) for r in rows]
    if not a:
        return a
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        while True:
            nz = [(abs(a[i][c]), i) for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            _, i0 = min(nz)
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return a


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    n = M.rows
    aug = [[Fraction(x) for x in M.row(i)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise DimensionError("matrix is singular")
    inv = []
    for r in red:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise DimensionError("matrix is not unimodular")
        inv.append([int(x) for x in row])
    return IntMatrix.from_rows(inv, n)


@dataclass(frozen=True)
class Cokernel:
    """Presentation of ``Z^m / im(A)`` as ``Z^free_rank + sum Z/d_i``.

    ``projection`` sends a vector of the target lattice to its class
    coordinates: the first ``free_rank`` rows give the free part, the
    remaining rows give torsion residues, to be reduced modulo ``moduli``.
    ``section`` lifts class coordinates back to the target lattice.
    """

    free_rank: int
    invariant_factors: tuple[int, ...]
    projection: IntMatrix
    moduli: tuple[int, ...]
    section: IntMatrix

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        y = self.projection @ v
        return tuple(x % d if d else x for x, d in zip(y, self.moduli))

    def lift(self, cls: Sequence[int]) -> list[int]:
        return self.section @ cls

    def reduce(self, cls: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(cls, self.moduli))

    @property
    def is_torsion_free(self) -> bool:
        return not self.invariant_factors


def cokernel(A: IntMatrix) -> Cokernel:
    """Cokernel of ``A: Z^cols -> Z^rows``.

    The free coordinates are put in Hermite form so that the class of each
    basis vector is canonical (e.g. all degrees +1 for projective space).
    """
    m = A.rows
    snf = smith_normal_form(A)
    diag = snf.D.diagonal()
    r = snf.rank
    U = snf.U
    free_rows = hermite_rows([list(U.row(i)) for i in range(r, m)])
    tors_idx = [i for i in range(r) if diag[i] > 1]
    tors_rows = [list(U.row(i)) for i in tors_idx]
    factors = tuple(diag[i] for i in tors_idx)

    # a square unimodular matrix whose rows contain the projection rows
    full = IntMatrix.from_rows(free_rows + [list(U.row(i)) for i in range(r)], m)
    inv = unimodular_inverse(full) if m else IntMatrix.zeros(0, 0)
    cols = list(range(m - r)) + [m - r + i for i in tors_idx]
    section = IntMatrix.from_rows(([inv[k, c] for c in cols] for k in range(m)), len(cols))
    projection = IntMatrix.from_rows(free_rows + tors_rows, m)
    return Cokernel(
        free_rank=m - r,
        invariant_factors=factors,
        projection=projection,
        moduli=(0,) * (m - r) + factors,
        section=section,
    )


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the (saturated) integer kernel of ``A``."""
    snf = smith_normal_form(A)
    r = snf.rank
    V = snf.V
    n = A.cols
    return IntMatrix.from_rows(([V[i, j] for j in range(r, n)] for i in range(n)), n - r)


def solve_rational(A: IntMatrix, b: Sequence) -> list[Fraction] | None:
    """Some rational ``x`` with ``A @ x == b``, or ``None`` if inconsistent.

    Free variables are set to zero; pivots are taken column by column, so the
    answer is deterministic.
    """
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {A.rows}")
    n = A.cols
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(b[i])] for i in range(A.rows)]
    red, piv = row_echelon(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x
