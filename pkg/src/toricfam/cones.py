"""Rational polyhedral cones: double description, membership, faces."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionError
from .exactla import dot, hermite_rows, primitive, rational_rank

Vector = tuple[int, ...]


def _combine(p, q, cp, cq):
    # cp > 0 > cq; the result is a positive combination vanishing on the constraint
    return primitive([cp * b - cq * a for a, b in zip(p, q)])


def double_description(constraints: Iterable[Sequence[int]], n: int):
    """Generators of ``{x in R^n : c . x >= 0 for all c}``.

    Incremental double description: constraints are added one at a time and
    the generating set is updated with the combinatorial adjacency test.

    Returns ``(rays, lineality)``; the cone equals the nonnegative span of
    ``rays`` plus the linear span of ``lineality``.  ``rays`` are extreme
    modulo the lineality space.
    """
    lineality: list[list[int]] = [[int(i == j) for j in range(n)] for i in range(n)]
    rays: list[Vector] = []
    done: list[Vector] = []
    for c in constraints:
        c = tuple(c)
        if len(c) != n:
            raise DimensionError("constraint has the wrong length")
        if not any(c):
            continue
        k = next((i for i, l in enumerate(lineality) if dot(c, l)), None)
        if k is not None:
            l = lineality.pop(k)
            cl = dot(c, l)
            if cl < 0:
                l, cl = [-x for x in l], -cl
            lineality = [list(primitive([cl * a - dot(c, lp) * b for a, b in zip(lp, l)]))
                         for lp in lineality]
            rays = [primitive([cl * a - dot(c, r) * b for a, b in zip(r, l)]) for r in rays]
            rays.append(primitive(l))
        else:
            vals = [dot(c, r) for r in rays]
            pos = [i for i, v in enumerate(vals) if v > 0]
            neg = [i for i, v in enumerate(vals) if v < 0]
            zero_sets = [frozenset(j for j, d in enumerate(done) if dot(d, r) == 0)
                         for r in rays]
            new = [rays[i] for i, v in enumerate(vals) if v >= 0]
            for i in pos:
                for j in neg:
                    common = zero_sets[i] & zero_sets[j]
                    if any(common <= zero_sets[k] for k in range(len(rays))
                           if k != i and k != j):
                        continue
                    new.append(_combine(rays[i], rays[j], vals[i], vals[j]))
            rays = list(dict.fromkeys(new))
        done.append(c)
    lin = [tuple(r) for r in hermite_rows(lineality)] if lineality else []
    return sorted(set(rays)), lin


def normalize_generators(gens: Iterable[Sequence[int]]) -> tuple[Vector, ...]:
    out = {primitive(g) for g in gens if any(g)}
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class Cone:
    """Cone spanned by integer generators in ``Z^ambient_rank``.

    Inequalities are computed lazily; an equation ``e . x = 0`` is listed as
    the pair ``e, -e``.
    """

    ambient_rank: int
    generators: tuple[Vector, ...]

    def __post_init__(self):
        gens = normalize_generators(self.generators)
        for g in gens:
            if len(g) != self.ambient_rank:
                raise DimensionError(f"generator {g} is not in Z^{self.ambient_rank}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_inequalities(cls, inequalities: Iterable[Sequence[int]], n: int) -> Cone:
        rays, lin = double_description(inequalities, n)
        return cls(n, tuple(rays) + tuple(lin) + tuple(tuple(-x for x in v) for v in lin))

    @cached_property
    def _dual(self):
        return double_description(self.generators, self.ambient_rank)

    @property
    def facet_normals(self) -> list[Vector]:
        """Primitive inward normals of the facets (within the span)."""
        return list(self._dual[0])

    @property
    def equations(self) -> list[Vector]:
        """Basis of the covectors vanishing on the whole cone."""
        return list(self._dual[1])

    @property
    def inequalities(self) -> list[Vector]:
        eqs = self.equations
        return self.facet_normals + eqs + [tuple(-x for x in e) for e in eqs]

    @cached_property
    def _primal(self):
        return double_description(self.inequalities, self.ambient_rank)

    @property
    def lineality(self) -> list[Vector]:
        return list(self._primal[1])

    @property
    def is_pointed(self) -> bool:
        return not self._primal[1]

    @property
    def extreme_rays(self) -> list[Vector]:
        """Minimal generators modulo lineality (the rays, for pointed cones)."""
        return list(self._primal[0])

    @property
    def dim(self) -> int:
        return rational_rank(self.generators) if self.generators else 0

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_rank:
            raise DimensionError("vector is not in the ambient lattice")
        return all(dot(h, v) >= 0 for h in self.inequalities)

    def contains_cone(self, other: Cone) -> bool:
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (self.ambient_rank == other.ambient_rank
                and self.contains_cone(other) and other.contains_cone(self))

    __hash__ = None

    def __repr__(self):
        return f"Cone({self.ambient_rank}, {list(self.generators)})"


def dual_description(generators: Iterable[Sequence[int]], ambient_rank: int) -> Cone:
    """Build a cone and compute its inequality description eagerly."""
    cone = Cone(ambient_rank, tuple(tuple(g) for g in generators))
    cone.inequalities
    return cone


def contains(c: Cone, v: Sequence[int]) -> bool:
    return c.contains(v)


def intersect(a: Cone, b: Cone) -> Cone:
    if a.ambient_rank != b.ambient_rank:
        raise DimensionError("cones live in different lattices")
    return Cone.from_inequalities(a.inequalities + b.inequalities, a.ambient_rank)


def face_witness(f: Cone, c: Cone) -> Vector | None:
    """A covector ``l`` valid on ``c`` with ``f == c & {l = 0}``, or ``None``.

    The zero covector witnesses ``f == c``.
    """
    if f.ambient_rank != c.ambient_rank:
        raise DimensionError("cones live in different lattices")
    if not c.contains_cone(f):
        return None
    tight = [h for h in c.inequalities if all(dot(h, g) == 0 for g in f.generators)]
    smallest_face = Cone.from_inequalities(
        c.inequalities + [tuple(-x for x in h) for h in tight], c.ambient_rank
    )
    if not f.contains_cone(smallest_face):
        return None
    return tuple(sum(col) for col in zip(*tight)) if tight else (0,) * c.ambient_rank


def is_face_of(f: Cone, c: Cone) -> bool:
    return face_witness(f, c) is not None
