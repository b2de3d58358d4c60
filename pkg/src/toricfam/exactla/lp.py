"""Exact rational linear programming (two-phase simplex, Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import DimensionError

GE = ">="
EQ = "="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction


@dataclass
class RationalLP:
    """Maximize ``objective . x`` over free (sign-unrestricted) variables.

    Constraints are ``coeffs . x >= rhs`` or ``coeffs . x == rhs``.  Write
    ``x <= b`` as ``-x >= -b``.
    """

    variables: int
    objective: tuple[Fraction, ...]
    constraints: list[Constraint] = field(default_factory=list)

    def __post_init__(self):
        self.objective = tuple(Fraction(c) for c in self.objective)
        if len(self.objective) != self.variables:
            raise DimensionError("objective length differs from the variable count")
        for c in self.constraints:
            self._check(c)

    def _check(self, c: Constraint):
        if len(c.coeffs) != self.variables:
            raise DimensionError("constraint length differs from the variable count")
        if c.relation not in (GE, EQ):
            raise ValueError(f"unknown relation {c.relation!r}")

    def add(self, coeffs: Sequence, relation: str, rhs) -> None:
        c = Constraint(tuple(Fraction(x) for x in coeffs), relation, Fraction(rhs))
        self._check(c)
        self.constraints.append(c)

    def ge(self, coeffs: Sequence, rhs) -> None:
        self.add(coeffs, GE, rhs)

    def eq(self, coeffs: Sequence, rhs) -> None:
        self.add(coeffs, EQ, rhs)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"

    @property
    def unbounded(self) -> bool:
        return self.status == "unbounded"

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T, r, c):
    inv = 1 / T[r][c]
    pr = [x * inv for x in T[r]]
    T[r] = pr
    nz = [(j, y) for j, y in enumerate(pr) if y]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            for j, y in nz:
                row[j] -= f * y


def _simplex(T, basis, cost, allowed):
    """Maximize ``cost`` on tableau ``T`` (last column = rhs) in place.

    Returns ``False`` when unbounded.  Only columns in ``allowed`` may enter.
    """
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum(cost[b] * T[i][j] for i, b in enumerate(basis))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                key = (row[-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        r = best[1]
        _pivot(T, r, entering)
        basis[r] = entering


def lp_max_slack(lp: RationalLP) -> LPResult:
    """Solve ``lp`` exactly.

    The usual call pattern maximizes a single slack variable ``t``, which is
    how the projectivity test uses it, but any objective is accepted.
    """
    n = lp.variables
    rows = lp.constraints
    m = len(rows)
    n_slack = sum(1 for c in rows if c.relation == GE)
    N = 2 * n + n_slack  # x+, x-, slacks
    T = []
    s = 0
    for c in rows:
        row = [Fraction(0)] * (N + m + 1)
        for j, a in enumerate(c.coeffs):
            row[j] = a
            row[n + j] = -a
        if c.relation == GE:
            row[2 * n + s] = Fraction(-1)
            s += 1
        row[-1] = c.rhs
        if row[-1] < 0:
            row = [-x for x in row]
        T.append(row)
    for i in range(m):
        T[i][N + i] = Fraction(1)
    basis = [N + i for i in range(m)]

    phase1 = [Fraction(0)] * N + [Fraction(-1)] * m
    _simplex(T, basis, phase1, range(N + m))
    if sum(T[i][-1] for i, b in enumerate(basis) if b >= N) != 0:
        return LPResult("infeasible")

    # drive remaining (zero-valued) artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= N:
            j = next((j for j in range(N) if T[i][j] != 0), None)
            if j is None:
                continue  # redundant row
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = [T[i][:N] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    cost = list(lp.objective) + [-c for c in lp.objective] + [Fraction(0)] * n_slack
    if not _simplex(T, basis, cost, range(N)):
        return LPResult("unbounded")
    y = [Fraction(0)] * N
    for i, b in enumerate(basis):
        y[b] = T[i][-1]
    x = tuple(y[j] - y[n + j] for j in range(n))
    value = sum(c * v for c, v in zip(lp.objective, x))
    return LPResult("optimal", Fraction(value), x)
