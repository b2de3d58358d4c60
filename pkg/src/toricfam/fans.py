"""Fans as combinatorial objects and the predicates on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

from .cones import Cone, intersect, is_face_of
from .errors import FalsificationError, FanValidationError, NotCompleteError, NotSimplicialError
from .exactla import (
    IntMatrix,
    RationalLP,
    dot,
    hermite_rows,
    is_primitive,
    kernel_basis,
    lp_max_slack,
    primitive,
    rational_rank,
    smith_normal_form,
    solve_rational,
)

RaySet_ = frozenset  # a cone is identified by the frozenset of its ray indices


@dataclass(frozen=True)
class Violation:
    kind: str
    cones: tuple
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True, eq=False)
class Fan:
    """A fan in ``N = Z^rank`` given by primitive rays and maximal cones.

    ``max_cones`` holds zero-based index sets into ``rays``.  Construction
    does not check the fan axioms; call :func:`validate` for that.
    """

    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(frozenset(c) for c in self.max_cones))

    @classmethod
    def from_json(cls, data: dict) -> Fan:
        try:
            rank = int(data["rank"])
            rays = [tuple(int(x) for x in r) for r in data["rays"]]
            cones = [frozenset(int(i) for i in c) for c in data["max_cones"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise FanValidationError(f"malformed fan JSON: {exc}") from exc
        bad = [r for r in rays if len(r) != rank or not is_primitive(r)]
        if bad:
            raise FanValidationError(f"rays must be primitive vectors in Z^{rank}: {bad}")
        return cls(rank, tuple(rays), tuple(cones))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [sorted(c) for c in self.max_cones],
        }

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone(self, idx: Iterable[int]) -> Cone:
        return Cone(self.rank, tuple(self.rays[i] for i in idx))

    def cone_dim(self, idx: Iterable[int]) -> int:
        vecs = [self.rays[i] for i in idx]
        return rational_rank(vecs) if vecs else 0

    def faces_of(self, sigma: frozenset) -> set[frozenset]:
        """Ray-index sets of all faces of the cone ``sigma`` (including 0 and itself)."""
        cone = self.cone(sigma)
        facets = {frozenset(i for i in sigma if dot(h, self.rays[i]) == 0)
                  for h in cone.facet_normals}
        faces = {frozenset(sigma)} | facets
        frontier = set(facets)
        while frontier:
            new = {a & b for a in frontier for b in facets} - faces
            faces |= new
            frontier = new
        if cone.is_pointed:
            faces.add(frozenset())
        return faces

    @cached_property
    def cones(self) -> frozenset:
        out = set()
        for sigma in self.max_cones:
            out |= self.faces_of(sigma)
        return frozenset(out)

    def cones_by_dim(self) -> dict[int, list[frozenset]]:
        out: dict[int, list[frozenset]] = {}
        for c in self.cones:
            out.setdefault(self.cone_dim(c), []).append(c)
        return {d: sorted(v, key=sorted) for d, v in sorted(out.items())}

    def facets_of(self, sigma: frozenset) -> list[frozenset]:
        cone = self.cone(sigma)
        return sorted({frozenset(i for i in sigma if dot(h, self.rays[i]) == 0)
                       for h in cone.facet_normals}, key=sorted)

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={list(self.rays)}, max_cones={[sorted(c) for c in self.max_cones]})"


def validate(f: Fan) -> list[Violation]:
    """All fan-axiom violations of ``f``; an empty list means the fan is valid."""
    out: list[Violation] = []
    if f.rank < 1:
        out.append(Violation("rank", (), "rank must be at least 1"))
        return out
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            out.append(Violation("ray", (i,), f"ray {i} = {r} is not in Z^{f.rank}"))
        elif not is_primitive(r):
            out.append(Violation("ray", (i,), f"ray {i} = {r} is zero or not primitive"))
    seen: dict = {}
    for i, r in enumerate(f.rays):
        if r in seen:
            out.append(Violation("ray", (seen[r], i), f"rays {seen[r]} and {i} coincide"))
        seen.setdefault(r, i)
    if out:
        return out
    good = []
    for k, sigma in enumerate(f.max_cones):
        if not sigma or any(i < 0 or i >= f.n_rays for i in sigma):
            out.append(Violation("cone", (k,), f"cone {k} = {sorted(sigma)} has bad ray indices"))
            continue
        cone = f.cone(sigma)
        if not cone.is_pointed:
            out.append(Violation("cone", (k,), f"cone {k} = {sorted(sigma)} contains a line"))
            continue
        extreme = set(cone.extreme_rays)
        redundant = [i for i in sorted(sigma) if f.rays[i] not in extreme]
        if redundant:
            out.append(Violation(
                "cone", (k,),
                f"cone {k} = {sorted(sigma)}: rays {redundant} are not extreme rays"))
            continue
        good.append(k)
    used = set().union(*f.max_cones) if f.max_cones else set()
    for i in range(f.n_rays):
        if i not in used:
            out.append(Violation("ray", (i,), f"ray {i} lies in no maximal cone"))
    for a_pos, a in enumerate(good):
        for b in good[a_pos + 1:]:
            ca, cb = f.cone(f.max_cones[a]), f.cone(f.max_cones[b])
            inter = intersect(ca, cb)
            if not (is_face_of(inter, ca) and is_face_of(inter, cb)):
                out.append(Violation(
                    "intersection", (a, b),
                    f"cones {a} = {sorted(f.max_cones[a])} and {b} = {sorted(f.max_cones[b])} "
                    f"meet in {list(inter.generators)}, which is not a common face"))
    return out


def ensure_valid(f: Fan) -> None:
    violations = validate(f)
    if violations:
        raise FanValidationError("invalid fan: " + "; ".join(map(str, violations)), violations)


def is_complete(f: Fan) -> bool:
    """Every maximal cone is full-dimensional and every facet borders exactly two cones."""
    if any(f.cone_dim(s) != f.rank for s in f.max_cones):
        return False
    for sigma in f.max_cones:
        for facet in f.facets_of(sigma):
            if sum(1 for tau in f.max_cones if facet <= tau) != 2:
                return False
    return bool(f.max_cones)


def require_complete(f: Fan, what: str = "this operation") -> None:
    if not is_complete(f):
        raise NotCompleteError(f"{what} needs a complete fan")


def is_simplicial(f: Fan) -> bool:
    return all(len(s) == f.cone_dim(s) for s in f.max_cones)


def is_regular(f: Fan) -> bool:
    if not is_simplicial(f):
        return False
    for sigma in f.max_cones:
        m = IntMatrix.from_rows([f.rays[i] for i in sorted(sigma)], f.rank)
        if any(d != 1 for d in smith_normal_form(m).invariant_factors):
            return False
    return True


def walls(f: Fan) -> list[tuple[int, int, frozenset]]:
    """Pairs of maximal cones sharing a codimension-one face."""
    out = []
    for a, sigma in enumerate(f.max_cones):
        for facet in f.facets_of(sigma):
            for b in range(a + 1, len(f.max_cones)):
                if facet <= f.max_cones[b]:
                    out.append((a, b, facet))
    return out


def projectivity_lp(f: Fan) -> RationalLP:
    """Strict convexity of a support function as a linear program.

    Variables: one ``m_sigma`` in ``Q^n`` per maximal cone, then the slack
    ``t``.  The function is ``<m_sigma, v>`` on ``sigma``.  Across a wall
    between ``sigma`` and ``sigma'`` the two agree on the wall rays, and for
    each ray ``xi'`` of ``sigma'`` off the wall
    ``<m_sigma - m_sigma', xi'> >= t`` (and symmetrically).  With this sign
    convention the anticanonical divisor of P^2, ``<m_sigma, rho> = -1`` on
    the rays of ``sigma``, gives slack 3.
    """
    n = f.rank
    k = len(f.max_cones)
    nv = n * k + 1
    lp = RationalLP(nv, [0] * (nv - 1) + [1])

    def diff(a, b, v, t=0):
        row = [0] * nv
        for i in range(n):
            row[a * n + i] += v[i]
            row[b * n + i] -= v[i]
        row[-1] = t
        return row

    for a, b, facet in walls(f):
        for i in sorted(facet):
            lp.eq(diff(a, b, f.rays[i]), 0)
        for i in sorted(f.max_cones[b] - facet):
            lp.ge(diff(a, b, f.rays[i], -1), 0)
        for i in sorted(f.max_cones[a] - facet):
            lp.ge(diff(b, a, f.rays[i], -1), 0)
    return lp


def wall_relations(f: Fan) -> list[dict]:
    """For a simplicial fan, the linear relation among the ``n + 1`` rays of each
    wall, oriented so the two rays off the wall have positive coefficients."""
    out = []
    for a, b, facet in walls(f):
        idx = sorted(f.max_cones[a] | f.max_cones[b])
        K = kernel_basis(IntMatrix.from_columns([f.rays[i] for i in idx], f.rank))
        if K.cols != 1:
            raise NotSimplicialError("wall relations need a simplicial fan")
        rel = dict(zip(idx, K.column(0)))
        (off,) = f.max_cones[a] - facet
        if rel[off] < 0:
            rel = {i: -v for i, v in rel.items()}
        out.append(rel)
    return out


def wall_relation_lp(f: Fan) -> RationalLP:
    """Values ``h`` on the rays with ``sum_i c_i h_i >= t`` for every wall relation
    ``c``, and ``t <= 1``.  Much smaller than :func:`projectivity_lp`."""
    k = f.n_rays
    lp = RationalLP(k + 1, [0] * k + [1])
    for rel in wall_relations(f):
        lp.ge([rel.get(i, 0) for i in range(k)] + [-1], 0)
    lp.ge([0] * k + [-1], -1)
    return lp


def is_projective(f: Fan) -> bool:
    """True iff a strictly convex piecewise-linear support function exists.

    Simplicial fans use the ray-value formulation; others the per-cone one.
    """
    require_complete(f, "is_projective")
    lp = wall_relation_lp(f) if is_simplicial(f) else projectivity_lp(f)
    res = lp_max_slack(lp)
    if res.infeasible:
        raise FalsificationError("projectivity LP is infeasible although h = 0, t = 0 is feasible")
    return res.unbounded or res.value > 0


def primitive_collections(f: Fan) -> list[frozenset]:
    """Minimal ray-index sets not contained in the ray set of any cone.

    Enumerated by increasing size; a candidate is only generated when all of
    its maximal proper subsets lie in a cone.
    """
    masks = [sum(1 << i for i in s) for s in f.max_cones]

    def in_cone(s):
        return any(s & ~m == 0 for m in masks)

    prim = []
    level = set()
    for i in range(f.n_rays):
        if in_cone(1 << i):
            level.add(1 << i)
        else:
            prim.append(1 << i)
    while level:
        nxt = set()
        for s in level:
            top = s.bit_length()
            for i in range(top, f.n_rays):
                t = s | (1 << i)
                subsets_ok = True
                rest = t
                while rest:
                    low = rest & -rest
                    rest ^= low
                    if (t ^ low) not in level:
                        subsets_ok = False
                        break
                if not subsets_ok:
                    continue
                if in_cone(t):
                    nxt.add(t)
                else:
                    prim.append(t)
        level = nxt
    out = [frozenset(i for i in range(f.n_rays) if m >> i & 1) for m in prim]
    return sorted(set(out), key=lambda s: (len(s), sorted(s)))


def _quotient_rows(f: Fan, sigma0: Sequence[int]) -> list[list[int]]:
    n = f.rank
    if not sigma0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    cols = [f.rays[i] for i in sorted(sigma0)]
    m = IntMatrix.from_rows(([c[i] for c in cols] for i in range(n)), len(cols))
    snf = smith_normal_form(m)
    rows = [list(snf.U.row(i)) for i in range(snf.rank, n)]
    return hermite_rows(rows)


def star_quotient(f: Fan, sigma0: Iterable[int]) -> Fan:
    """Fan of the cones ``sigma / <sigma0>`` for ``sigma`` in the star of ``sigma0``.

    The quotient lattice ``N / (span(sigma0) & N)`` gets its basis from the
    Smith form of the ``sigma0`` ray matrix; ray images are re-primitivized.
    """
    sigma0 = frozenset(sigma0)
    if sigma0 not in f.cones:
        raise ValueError(f"{sorted(sigma0)} is not a cone of the fan")
    rows = _quotient_rows(f, sorted(sigma0))
    q = len(rows)

    def image(i):
        return primitive([dot(r, f.rays[i]) for r in rows])

    star = [s for s in f.max_cones if sigma0 <= s]
    extreme_in = []
    for s in star:
        cone = Cone(q, tuple(image(i) for i in s - sigma0))
        extreme_in.append(set(cone.extreme_rays))
    new_rays: list[tuple[int, ...]] = []
    index: dict = {}
    for i in range(f.n_rays):
        if i in sigma0:
            continue
        v = image(i)
        if any(i in s and v in ext for s, ext in zip(star, extreme_in)) and v not in index:
            index[v] = len(new_rays)
            new_rays.append(v)
    cones = []
    for s, ext in zip(star, extreme_in):
        c = frozenset(index[v] for v in ext)
        if c not in cones:
            cones.append(c)
    return Fan(q, tuple(new_rays), tuple(cones))


@dataclass(frozen=True)
class LemmaOutcome:
    holds: bool
    cone: frozenset | None = None
    xi0: int | None = None
    sigma0: frozenset | None = None
    reason: str | None = None


def appendix_lemma_check(f: Fan, m: Sequence[int], sigma0: Iterable[int] | None = None) -> LemmaOutcome:
    """Check the star-lemma for a covector ``m``.

    Hypotheses: (i) exactly one ray ``xi0`` has ``<m, xi0> > 0``; (ii) the cone
    ``sigma0`` lies in ``ker m``.  If they hold, the cone spanned by ``xi0``
    and ``sigma0`` must be a cone of the fan; otherwise FalsificationError.
    When ``sigma0`` is omitted the largest cone in ``ker m`` is used.
    """
    require_complete(f, "appendix_lemma_check")
    vals = [dot(m, r) for r in f.rays]
    pos = [i for i, v in enumerate(vals) if v > 0]
    if len(pos) != 1:
        return LemmaOutcome(False, reason=f"(i) violated: {len(pos)} rays with <m, xi> > 0")
    xi0 = pos[0]
    in_kernel = sorted((c for c in f.cones if all(vals[i] == 0 for i in c)),
                       key=lambda c: (-len(c), sorted(c)))
    if sigma0 is None:
        s0 = in_kernel[0]
    else:
        s0 = frozenset(sigma0)
        if s0 not in f.cones:
            return LemmaOutcome(False, reason=f"(ii) violated: {sorted(s0)} is not a cone")
        if any(vals[i] != 0 for i in s0):
            return LemmaOutcome(False, reason=f"(ii) violated: {sorted(s0)} is not in ker m")
    target = s0 | {xi0}
    if target not in f.cones:
        raise FalsificationError(
            f"m = {tuple(m)}: cone spanned by ray {xi0} and {sorted(s0)} is not in the fan")
    return LemmaOutcome(True, cone=target, xi0=xi0, sigma0=s0)


def appendix_lemma_sweep(f: Fan, m: Sequence[int]) -> list[LemmaOutcome]:
    """Run :func:`appendix_lemma_check` for every cone in ``ker m``."""
    vals = [dot(m, r) for r in f.rays]
    if sum(1 for v in vals if v > 0) != 1:
        return [appendix_lemma_check(f, m)]
    kernel_cones = sorted((c for c in f.cones if all(vals[i] == 0 for i in c)),
                          key=lambda c: (len(c), sorted(c)))
    return [appendix_lemma_check(f, m, c) for c in kernel_cones]


def f_vector(f: Fan) -> list[int]:
    """Number of cones of each dimension ``0..rank``."""
    counts = [0] * (f.rank + 1)
    for c in f.cones:
        counts[f.cone_dim(c)] += 1
    return counts


def _ray_signature(f: Fan):
    return [sum(1 for s in f.max_cones if i in s) for i in range(f.n_rays)]


def find_isomorphism(f: Fan, g: Fan):
    """Unimodular ``T`` and ray bijection carrying ``f`` onto ``g``, or ``None``.

    Backtracking over images of a basis of rays, pruned by how many maximal
    cones contain each ray.
    """
    if (f.rank, f.n_rays, len(f.max_cones)) != (g.rank, g.n_rays, len(g.max_cones)):
        return None
    if sorted(map(len, f.max_cones)) != sorted(map(len, g.max_cones)):
        return None
    sig_f, sig_g = _ray_signature(f), _ray_signature(g)
    if sorted(sig_f) != sorted(sig_g):
        return None
    basis: list[int] = []
    for i in range(f.n_rays):
        if rational_rank([f.rays[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
        if len(basis) == f.rank:
            break
    n = f.rank
    F = IntMatrix.from_rows([f.rays[i] for i in basis], n)  # rows = basis rays
    g_index = {r: i for i, r in enumerate(g.rays)}
    g_cones = set(g.max_cones)
    choices = [[j for j in range(g.n_rays) if sig_g[j] == sig_f[i]] for i in basis]
    for images in _injective_products(choices):
        G = [g.rays[j] for j in images]
        # solve T @ f_b = g_b for each basis ray: F @ T^t = G
        cols = []
        ok = True
        for k in range(n):
            x = solve_rational(F, [G[b][k] for b in range(n)])
            if x is None or any(v.denominator != 1 for v in x):
                ok = False
                break
            cols.append([int(v) for v in x])
        if not ok:
            continue
        T = IntMatrix.from_rows(cols, n)
        if abs(T.det()) != 1:
            continue
        perm = []
        for r in f.rays:
            j = g_index.get(tuple(T @ r))
            if j is None:
                break
            perm.append(j)
        if len(perm) != f.n_rays:
            continue
        if all(frozenset(perm[i] for i in s) in g_cones for s in f.max_cones):
            return T, perm
    return None


def _injective_products(choices):
    def rec(k, used):
        if k == len(choices):
            yield []
            return
        for j in choices[k]:
            if j not in used:
                used.add(j)
                for rest in rec(k + 1, used):
                    yield [j] + rest
                used.discard(j)
    yield from rec(0, set())
