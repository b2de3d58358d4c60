"""Class-group gradings of ray configurations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..cones import Cone
from ..errors import FanValidationError, NotCompleteError
from ..exactla import Cokernel, IntMatrix, cokernel, is_primitive
from ..fans import Fan, is_complete, primitive_collections

ClassElement = tuple[int, ...]


@dataclass(frozen=True)
class RaySet:
    """A finite configuration of primitive vectors in ``Z^rank``.

    The vectors must be nonzero, primitive, pairwise distinct, and their
    nonnegative span must be all of ``R^rank``.
    """

    rank: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(int(x) for x in v) for v in self.vectors))

    @classmethod
    def from_json(cls, data: dict) -> RaySet:
        try:
            return cls(int(data["rank"]), tuple(tuple(v) for v in data["vectors"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FanValidationError(f"malformed ray-set JSON: {exc}") from exc

    @classmethod
    def of_fan(cls, f: Fan) -> RaySet:
        return cls(f.rank, f.rays)

    def to_json(self) -> dict:
        return {"rank": self.rank, "vectors": [list(v) for v in self.vectors]}

    def __len__(self):
        return len(self.vectors)

    def spanning_certificate(self) -> tuple[int, ...] | None:
        """A nonzero ``m`` with ``<m, xi> >= 0`` on every vector, if one exists."""
        cone = Cone(self.rank, self.vectors)
        witnesses = cone.facet_normals + cone.equations
        return tuple(witnesses[0]) if witnesses else None

    def check(self) -> None:
        if self.rank < 1:
            raise FanValidationError("rank must be at least 1")
        for i, v in enumerate(self.vectors):
            if len(v) != self.rank:
                raise FanValidationError(f"vector {i} = {v} is not in Z^{self.rank}")
            if not any(v):
                raise FanValidationError(f"vector {i} is zero")
            if not is_primitive(v):
                raise FanValidationError(f"vector {i} = {v} is not primitive")
        if len(set(self.vectors)) != len(self.vectors):
            raise FanValidationError("vectors must be pairwise distinct")
        m = self.spanning_certificate()
        if m is not None:
            raise FanValidationError(
                f"vectors do not span R^{self.rank} nonnegatively: m = {m} is >= 0 on all of them",
                [m],
            )


@dataclass(frozen=True, eq=False)
class GradingData:
    """The sequence ``0 -> M --a--> Z^Xi --c--> A -> 0`` for a ray set.

    ``a`` sends ``m`` to ``(<m, xi>)_xi``; its matrix has the vectors of the
    ray set as rows.  Class elements are tuples: free coordinates first, then
    torsion residues reduced into ``[0, d)``.
    """

    rays: RaySet
    a: IntMatrix
    coker: Cokernel

    @property
    def free_rank(self) -> int:
        return self.coker.free_rank

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.coker.invariant_factors

    @property
    def class_group(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.invariant_factors

    @property
    def is_torsion_free(self) -> bool:
        return self.coker.is_torsion_free

    @cached_property
    def degrees(self) -> tuple[ClassElement, ...]:
        """``c(f_xi)`` for each vector, in order."""
        k = len(self.rays)
        return tuple(self.coker.project([int(i == j) for j in range(k)]) for i in range(k))

    @property
    def kernel_basis(self) -> list[tuple[int, ...]]:
        """``a(e_1), ..., a(e_n)``: a basis of ``a(M)`` inside ``Z^Xi``."""
        return self.a.columns()

    def degree(self, u: Sequence[int]) -> ClassElement:
        return self.coker.project(u)

    def lift(self, cls: Sequence[int]) -> list[int]:
        """An integer vector of class ``cls``."""
        return self.coker.lift(cls)

    def zero(self) -> ClassElement:
        return (0,) * len(self.coker.moduli)

    def add(self, x: Sequence[int], y: Sequence[int]) -> ClassElement:
        return self.coker.reduce([a + b for a, b in zip(x, y)])

    def scale(self, k: int, x: Sequence[int]) -> ClassElement:
        return self.coker.reduce([k * a for a in x])

    def normalize(self, x: Sequence[int]) -> ClassElement:
        if len(x) != len(self.coker.moduli):
            raise ValueError(f"class {tuple(x)} has the wrong length for this class group")
        return self.coker.reduce(x)

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) or "0"


def build_grading(xs: RaySet) -> GradingData:
    xs.check()
    a = IntMatrix.from_rows(xs.vectors, xs.rank)
    return GradingData(xs, a, cokernel(a))


def grading_of_fan(f: Fan) -> GradingData:
    return build_grading(RaySet.of_fan(f))


def equivalence_classes(g: GradingData) -> list[list[int]]:
    """Blocks of indices with equal degree, ordered by smallest member."""
    blocks: dict = {}
    for i, d in enumerate(g.degrees):
        blocks.setdefault(d, []).append(i)
    return sorted(blocks.values())


@dataclass(frozen=True)
class SaturationResult:
    ok: bool
    classes: list
    collections: list
    counterexample: tuple | None = None  # (collection, member, outsider)


def verify_primitive_saturation(f: Fan) -> SaturationResult:
    """Check that each primitive collection is a union of degree classes.

    Only meaningful for complete fans: the incomplete figure fan (rays
    ``(1,0), (0,1), (-1,-1)``, cones ``{0,2}, {1,2}``) has all three degrees
    equal but primitive collection ``{0,1}``.
    """
    if not is_complete(f):
        raise NotCompleteError(
            "saturation of primitive collections needs a complete fan; "
            "incomplete fans such as the figure fan violate it")
    g = grading_of_fan(f)
    classes = equivalence_classes(g)
    block_of = {i: tuple(b) for b in classes for i in b}
    prims = primitive_collections(f)
    for pi in prims:
        for i in sorted(pi):
            outside = [k for k in block_of[i] if k not in pi]
            if outside:
                return SaturationResult(False, classes, prims, (pi, i, outside[0]))
    return SaturationResult(True, classes, prims)
