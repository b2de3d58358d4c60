"""Restriction from a ray set ``Xi`` to the rays of a complete fan.

Indices into ``Xi`` are used throughout; ``sigma_to_xi`` translates fan ray
indices into ``Xi`` indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import (
    FalsificationError,
    InconsistentSpecError,
    InconsistentSystemError,
    NotCompleteError,
)
from ..exactla import IntMatrix, cokernel, dot, rational_rank, solve_rational
from ..fans import Fan, is_complete, primitive_collections
from .grading import ClassElement, GradingData, RaySet, build_grading, equivalence_classes


@dataclass(frozen=True, eq=False)
class RestrictionDiagram:
    """The map ``b: A_Xi -> A_Sigma`` induced by forgetting the ``J`` coordinates.

    ``b_matrix`` acts on class coordinates of ``A_Xi``; results are reduced
    modulo the torsion of ``A_Sigma``.
    """

    fan: Fan
    grading_xi: GradingData
    grading_sigma: GradingData
    sigma_to_xi: tuple[int, ...]
    J: tuple[int, ...]
    b_matrix: IntMatrix

    @property
    def xi_to_sigma(self) -> dict[int, int]:
        return {x: s for s, x in enumerate(self.sigma_to_xi)}

    def b(self, alpha: Sequence[int]) -> ClassElement:
        return self.grading_sigma.coker.reduce(self.b_matrix @ list(alpha))

    def restrict(self, u: Sequence[int]) -> list[int]:
        """``Z^Xi -> Z^Sigma(1)``: keep the fan coordinates, in fan order."""
        return [u[x] for x in self.sigma_to_xi]

    def sigma_degree_of_xi(self, i: int) -> ClassElement:
        """``c_Sigma`` of the restriction of ``f_i``; zero for ``i`` in ``J``."""
        s = self.xi_to_sigma.get(i)
        if s is None:
            return self.grading_sigma.zero()
        return self.grading_sigma.degrees[s]

    @property
    def aj_images(self) -> list[ClassElement]:
        """Images of the basis of ``Z^J`` in ``A_Xi``."""
        return [self.grading_xi.degrees[j] for j in self.J]


def restriction_diagram(xs: RaySet, f: Fan) -> RestrictionDiagram:
    gx = build_grading(xs)
    pos = {v: i for i, v in enumerate(xs.vectors)}
    if f.rank != xs.rank:
        raise InconsistentSpecError("fan and ray set live in different lattices")
    missing = [r for r in f.rays if r not in pos]
    if missing:
        raise InconsistentSpecError(f"fan rays {missing} are not in the ray set")
    sigma_to_xi = tuple(pos[r] for r in f.rays)
    J = tuple(i for i in range(len(xs)) if i not in set(sigma_to_xi))
    gs = build_grading(RaySet.of_fan(f))

    # b = proj_Sigma . restriction . section_Xi on class coordinates
    sec = gx.coker.section
    rows = []
    for p in range(gs.coker.projection.rows):
        prow = gs.coker.projection.row(p)
        rows.append([sum(prow[s] * sec[x, k] for s, x in enumerate(sigma_to_xi))
                     for k in range(sec.cols)])
    bmat = IntMatrix.from_rows(rows, sec.cols)
    d = RestrictionDiagram(f, gx, gs, sigma_to_xi, J, bmat)
    _check_diagram(d)
    return d


def _check_diagram(d: RestrictionDiagram) -> None:
    gx, gs = d.grading_xi, d.grading_sigma
    # b is well defined on torsion generators
    for t, mod in enumerate(gx.coker.moduli):
        if mod:
            e = [mod * int(k == t) for k in range(len(gx.coker.moduli))]
            if d.b(e) != gs.zero():
                raise FalsificationError("b is not well defined on the torsion of A_Xi")
    # b . c_Xi = c_Sigma . restriction
    for i in range(len(gx.rays)):
        if d.b(gx.degrees[i]) != d.sigma_degree_of_xi(i):
            raise FalsificationError(f"diagram does not commute at vector {i}")
    # ker b is generated by the classes of f_j: A_Xi / <c(f_j)> must present A_Sigma
    cols = gx.a.columns() + [tuple(int(r == j) for r in range(len(gx.rays))) for j in d.J]
    big = IntMatrix.from_columns(cols, len(gx.rays))
    q = cokernel(big)
    if (q.free_rank, q.invariant_factors) != (gs.free_rank, gs.invariant_factors):
        raise FalsificationError("A_Xi modulo the J classes is not isomorphic to A_Sigma")
    # Z^J -> A_Xi is injective
    if rational_rank(cols) != gx.rays.rank + len(d.J):
        raise FalsificationError("the classes of f_j are linearly dependent in A_Xi")


@dataclass(frozen=True)
class IsotypicDecomposition:
    V_classes: dict  # alpha -> tuple of Xi indices
    W_classes: dict  # beta -> tuple of alphas
    W0_classes: tuple

    def ranks(self) -> dict:
        return {a: len(ix) for a, ix in self.V_classes.items()}


def isotypic(d: RestrictionDiagram) -> IsotypicDecomposition:
    """Weight-space decomposition of ``C^Xi`` for both groups.

    Asserts that the trivial ``Sigma``-isotypic part is spanned by the ``J``
    coordinates, each in its own one-dimensional weight space.
    """
    if not is_complete(d.fan):
        raise NotCompleteError("isotypic decomposition needs a complete fan")
    gx = d.grading_xi
    V = {gx.degrees[b[0]]: tuple(b) for b in equivalence_classes(gx)}
    W: dict = {}
    for alpha in V:
        W.setdefault(d.b(alpha), []).append(alpha)
    W = {beta: tuple(al) for beta, al in W.items()}
    zero = d.grading_sigma.zero()
    W0 = W.get(zero, ())
    if any(len(V[a]) != 1 for a in W0):
        raise FalsificationError("a trivial-weight space V_j has dimension > 1")
    if sorted(V[a][0] for a in W0) != list(d.J):
        raise FalsificationError("the trivial isotypic component is not C^J")
    if len(W0) != len(d.J):
        raise FalsificationError("number of trivial weight spaces differs from |J|")
    return IsotypicDecomposition(V, W, tuple(W0))


@dataclass(frozen=True)
class BadComponent:
    collection: frozenset  # fan ray indices
    classes: tuple
    coordinates: frozenset  # fan ray indices whose degree lies in ``classes``
    xi_coordinates: frozenset | None = None


def bad_locus(f: Fan, d: RestrictionDiagram | None = None) -> list[BadComponent]:
    """Coordinate subspaces ``A(pi)`` cut out by the classes included in each ``pi``."""
    if not is_complete(f):
        raise NotCompleteError("bad_locus needs a complete fan")
    gs = d.grading_sigma if d is not None else build_grading(RaySet.of_fan(f))
    out = []
    for pi in primitive_collections(f):
        classes = tuple(sorted({gs.degrees[i] for i in pi}))
        coords = frozenset(i for i, c in enumerate(gs.degrees) if c in classes)
        if coords != pi:
            raise FalsificationError(
                f"primitive collection {sorted(pi)} is not saturated: coordinates {sorted(coords)}")
        xi = frozenset(d.sigma_to_xi[i] for i in coords) if d is not None else None
        out.append(BadComponent(pi, classes, coords, xi))
    return out


def _solve_m(d: RestrictionDiagram, xi: int, rep: int) -> list[Fraction]:
    gx = d.grading_xi
    if rep == xi:
        return [Fraction(0)] * gx.rays.rank
    vecs = gx.rays.vectors
    rows, rhs = [], []
    for x in d.sigma_to_xi:
        rows.append(vecs[x])
        rhs.append(-1 if x == xi else (1 if x == rep else 0))
    m = solve_rational(IntMatrix.from_rows(rows, gx.rays.rank), rhs)
    if m is None:
        raise InconsistentSystemError(
            f"no m with <m, xi_{xi}> = -1, <m, xi_{rep}> = 1 vanishing on the other fan rays")
    return m


def k_exponents(d: RestrictionDiagram, xi: int, alpha: Sequence[int]) -> dict[int, int]:
    """``k_j(alpha)`` for ``j`` in ``J``.

    ``xi`` is an ``Xi`` index of a fan ray and ``alpha`` a class of ``A_Xi``
    with ``b(alpha) = c_Sigma(f_xi)``.  For each representative ``xi'`` of
    ``alpha`` the unique ``m`` with ``<m, xi> = -1``, ``<m, xi'> = 1`` and zero
    on the other fan rays is found over Q; ``k_j = <m, j>``.  Integrality of
    ``m`` and independence of the representative are both checked.
    """
    gx = d.grading_xi
    if xi not in d.xi_to_sigma:
        raise InconsistentSpecError(f"vector {xi} is not a ray of the fan")
    alpha = gx.normalize(alpha)
    if d.b(alpha) != d.sigma_degree_of_xi(xi):
        raise InconsistentSystemError(f"class {alpha} is not in the b-fiber of c_Sigma(f_{xi})")
    reps = [i for i, c in enumerate(gx.degrees) if c == alpha]
    if not reps:
        raise InconsistentSystemError(f"class {alpha} is not the degree of any vector")
    result = None
    for rep in reps:
        if rep not in d.xi_to_sigma:
            raise InconsistentSystemError(f"class {alpha} is represented by J-vector {rep}")
        m = _solve_m(d, xi, rep)
        if any(x.denominator != 1 for x in m):
            raise FalsificationError(f"m = {m} for representative {rep} is not integral")
        k = {j: int(dot(m, gx.rays.vectors[j])) for j in d.J}
        if result is None:
            result = k
        elif k != result:
            raise FalsificationError(
                f"k-exponents depend on the representative: {result} vs {k} at {rep}")
    return result


@dataclass(frozen=True)
class DirectImageTerm:
    alpha: ClassElement
    indices: tuple  # Xi indices of the V-class
    exponents: dict  # j -> -k_j(alpha), the power of V_j

    def render(self) -> str:
        s = "V[" + ",".join(map(str, self.indices)) + "]^v"
        for j, e in sorted(self.exponents.items()):
            if e:
                s += f" (x) V_{j}^(x){e}"
        return s


@dataclass(frozen=True)
class DirectImage:
    xi: int
    beta: ClassElement
    terms: tuple

    def render(self) -> str:
        return " (+) ".join(t.render() for t in self.terms)


def direct_image_formula(d: RestrictionDiagram, xi: int) -> DirectImage:
    """Summands ``V_alpha^v (x) (x)_j V_j^{-k_j(alpha)}`` over the ``b``-fiber of ``c_Sigma(f_xi)``."""
    iso = isotypic(d)
    beta = d.sigma_degree_of_xi(xi)
    terms = []
    for alpha in iso.W_classes.get(beta, ()):
        k = k_exponents(d, xi, alpha)
        terms.append(DirectImageTerm(alpha, iso.V_classes[alpha], {j: -v for j, v in k.items()}))
    terms.sort(key=lambda t: t.indices)
    return DirectImage(xi, beta, tuple(terms))
