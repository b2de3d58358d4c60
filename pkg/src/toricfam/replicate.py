"""Replicating the rays of a configuration class by class.

Each vector ``xi`` of class ``alpha`` is copied ``n_alpha`` times in
``L' = sum_alpha L_alpha^{n_alpha}``.  With ``c'`` sending every copy to the
class of its original, ``M' = ker c'`` and the new rays are the images of
the dual basis of ``L'`` in ``N' = Hom(M', Z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

from .cox import GradingData, RaySet, build_grading
from .cox.grading import ClassElement
from .errors import (
    FalsificationError,
    FanValidationError,
    InconsistentSpecError,
    NotCompleteError,
    NotSimplicialError,
)
from .exactla import IntMatrix, hermite_rows, kernel_basis, solve_rational
from .fans import (
    Fan,
    is_complete,
    is_projective,
    is_regular,
    is_simplicial,
    primitive_collections,
    validate,
)

Copy = tuple[int, int]  # (original index, copy number starting at 1)


def multiplicities_by_rep_ray(g: GradingData, by_ray: Mapping) -> dict:
    """Turn ``{ray index: n}`` into ``{class: n}``; unlisted classes get 1."""
    out = {d: 1 for d in g.degrees}
    seen = {}
    for ray, n in by_ray.items():
        ray = int(ray)
        if not 0 <= ray < len(g.degrees):
            raise InconsistentSpecError(f"ray index {ray} is out of range")
        alpha = g.degrees[ray]
        if alpha in seen:
            raise InconsistentSpecError(f"rays {seen[alpha]} and {ray} lie in the same class")
        seen[alpha] = ray
        out[alpha] = int(n)
    return out


def _lattice_basis(rows: list[list[int]]) -> list[list[int]]:
    return [r for r in hermite_rows(rows) if any(r)]


@dataclass(frozen=True, eq=False)
class ReplicationData:
    xs: RaySet
    grading: GradingData
    mult: dict  # class -> n_alpha
    copies: tuple  # L' coordinates, as (xi, d)
    m_prime: tuple  # basis of M' as rows in Z^{L'}
    xi_prime: RaySet

    @property
    def rank(self) -> int:
        return len(self.m_prime)

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.copies)}

    def n_of(self, xi: int) -> int:
        return self.mult[self.grading.degrees[xi]]

    def c_prime(self) -> list[ClassElement]:
        return [self.grading.degrees[xi] for xi, _ in self.copies]

    @cached_property
    def plus_matrix(self) -> IntMatrix:
        """``+ : L' -> Z^Xi``."""
        k = len(self.xs)
        return IntMatrix.from_rows(
            ([int(xi == r) for xi, _ in self.copies] for r in range(k)), len(self.copies))

    def j_matrix(self, d: Sequence[int]) -> IntMatrix:
        """``j_d : Z^Xi -> L'`` sending ``f_xi`` to copy ``d[xi]``."""
        k = len(self.xs)
        rows = [[0] * k for _ in self.copies]
        for xi in range(k):
            if not 1 <= d[xi] <= self.n_of(xi):
                raise ValueError(f"copy {d[xi]} of vector {xi} does not exist")
            rows[self.index[(xi, d[xi])]][xi] = 1
        return IntMatrix.from_rows(rows, k)

    def nu_matrix(self, d: Sequence[int]) -> IntMatrix:
        """``nu_d : N' -> N``, dual to ``m -> j_d(a(m))``."""
        B = IntMatrix.from_rows(self.m_prime, len(self.copies))
        J = self.j_matrix(d)
        rows = []
        for col in self.grading.a.columns():
            target = J @ list(col)
            y = solve_rational(B.T, target)
            if y is None or any(v.denominator != 1 for v in y):
                raise FalsificationError("j_d(a(M)) is not contained in M'")
            rows.append([int(v) for v in y])
        return IntMatrix.from_rows(rows, self.rank)

    def section_choices(self):
        ranges = [range(1, self.n_of(xi) + 1) for xi in range(len(self.xs))]
        return product(*ranges)


def replicate_data(xs: RaySet, mult: Mapping) -> ReplicationData:
    g = build_grading(xs)
    mult = {g.normalize(a): int(n) for a, n in mult.items()}
    for alpha in set(g.degrees):
        mult.setdefault(alpha, 1)
    bad = {a: n for a, n in mult.items() if n < 1}
    if bad:
        raise InconsistentSpecError(f"multiplicities must be at least 1: {bad}")
    unknown = set(mult) - set(g.degrees)
    if unknown:
        raise InconsistentSpecError(f"classes {sorted(unknown)} carry no vectors")
    copies = tuple((xi, d) for xi in range(len(xs)) for d in range(1, mult[g.degrees[xi]] + 1))
    nL = len(copies)

    # M' = ker(c') computed with the torsion of A handled by slack columns
    proj = g.coker.projection
    moduli = g.coker.moduli
    rows = []
    for p in range(proj.rows):
        row = [proj[p, xi] for xi, _ in copies]
        row += [moduli[p] * int(q == p) for q in range(proj.rows) if moduli[q]]
        rows.append(row)
    ncols = nL + sum(1 for m in moduli if m)
    K = kernel_basis(IntMatrix.from_rows(rows, ncols)) if rows else IntMatrix.identity(ncols)
    gens = [list(K.column(k))[:nL] for k in range(K.cols)]
    basis = _lattice_basis(gens)

    # independent description: j_1(a(M)) plus differences of copies
    index = {c: i for i, c in enumerate(copies)}
    explicit = []
    for col in g.a.columns():
        v = [0] * nL
        for xi, val in enumerate(col):
            v[index[(xi, 1)]] = val
        explicit.append(v)
    for xi, d in copies:
        if d > 1:
            v = [0] * nL
            v[index[(xi, d)]] = 1
            v[index[(xi, 1)]] = -1
            explicit.append(v)
    if _lattice_basis(explicit) != basis:
        raise FalsificationError("ker(c') differs from the lattice spanned by its explicit generators")
    expected = xs.rank + sum((mult[a] - 1) * g.degrees.count(a) for a in set(g.degrees))
    if len(basis) != expected:
        raise FalsificationError(f"rk(M') = {len(basis)}, expected {expected}")

    vectors = tuple(tuple(b[i] for b in basis) for i in range(nL))
    xp = RaySet(len(basis), vectors)
    try:
        xp.check()
    except FanValidationError as exc:
        raise FalsificationError(f"replicated configuration is not a valid ray set: {exc}") from exc
    data = ReplicationData(xs, g, mult, copies, tuple(tuple(b) for b in basis), xp)
    _check_maps(data)
    return data


def _check_maps(r: ReplicationData) -> None:
    g = r.grading
    k = len(r.xs)
    P = r.plus_matrix
    ident = IntMatrix.identity(k)
    for d in r.section_choices():
        J = r.j_matrix(d)
        if P @ J != ident:
            raise FalsificationError(f"(+) o j_d is not the identity for d = {d}")
        cprime = r.c_prime()
        for xi in range(k):
            col = J.column(xi)
            img = [c for c, v in zip(cprime, col) if v]
            if img != [g.degrees[xi]]:
                raise FalsificationError(f"c' o j_d differs from c at vector {xi}")
        nu = r.nu_matrix(d)
        for (xi, dd), v in zip(r.copies, r.xi_prime.vectors):
            image = tuple(nu @ list(v))
            want = r.xs.vectors[xi] if dd == d[xi] else (0,) * r.xs.rank
            if image != want:
                raise FalsificationError(f"nu_d sends copy {(xi, dd)} to {image}, expected {want}")
    for i, (xi, _) in enumerate(r.copies):
        e = [int(t == i) for t in range(len(r.copies))]
        if g.degree(P @ e) != r.c_prime()[i]:
            raise FalsificationError("c o (+) differs from c'")


def replicate_fan(f: Fan, mult: Mapping, data: ReplicationData | None = None) -> Fan:
    """The fan whose maximal cones take every copy of the rays in ``sigma`` and
    all but one chosen copy of each ray outside ``sigma``."""
    if not is_complete(f):
        raise NotCompleteError("replicate_fan needs a complete fan")
    if not is_simplicial(f):
        raise NotSimplicialError("replicate_fan needs a simplicial fan")
    r = data if data is not None else replicate_data(RaySet.of_fan(f), mult)
    cones = []
    for sigma in f.max_cones:
        outside = [xi for xi in range(f.n_rays) if xi not in sigma]
        for ks in product(*(range(1, r.n_of(xi) + 1) for xi in outside)):
            skip = set(zip(outside, ks))
            cones.append(frozenset(i for i, c in enumerate(r.copies) if c not in skip))
    g = Fan(r.rank, r.xi_prime.vectors, tuple(cones))
    violations = validate(g)
    if violations:
        raise FalsificationError(f"replicated cones do not form a fan: {violations[0]}")
    if not is_complete(g):
        raise FalsificationError("replicated fan is not complete")
    if is_regular(f) and not is_regular(g):
        raise FalsificationError("replicated fan of a regular fan is not regular")
    if is_projective(f) and not is_projective(g):
        raise FalsificationError("replicated fan of a projective fan is not projective")
    return g


def replicated_primitive_collections(f: Fan, mult: Mapping) -> list[frozenset]:
    """All copies of the rays of each primitive collection, checked against enumeration."""
    r = replicate_data(RaySet.of_fan(f), mult)
    g = replicate_fan(f, mult, r)
    predicted = sorted(
        (frozenset(i for i, (xi, _) in enumerate(r.copies) if xi in pi)
         for pi in primitive_collections(f)),
        key=lambda s: (len(s), sorted(s)))
    actual = primitive_collections(g)
    if predicted != actual:
        raise FalsificationError(f"predicted primitive collections {predicted} differ from {actual}")
    return predicted
