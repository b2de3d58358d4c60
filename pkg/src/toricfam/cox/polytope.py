"""Lattice points of bounded rational polyhedra ``{x : A x >= b}``."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Sequence

from ..errors import InfiniteFiberError
from ..exactla import RationalLP, lp_max_slack


def bounding_box(rows: Sequence[Sequence[int]], rhs: Sequence, n: int):
    """Exact coordinate ranges of the polyhedron, or ``None`` if it is empty.

    Raises InfiniteFiberError if some coordinate is unbounded.
    """
    box = []
    for k in range(n):
        ends = []
        for sign in (1, -1):
            lp = RationalLP(n, [sign * int(i == k) for i in range(n)])
            for r, b in zip(rows, rhs):
                lp.ge(r, b)
            res = lp_max_slack(lp)
            if res.infeasible:
                return None
            if res.unbounded:
                raise InfiniteFiberError(f"coordinate {k} is unbounded on the polyhedron")
            ends.append(sign * res.value)
        box.append((ends[1], ends[0]))
    return box


def lattice_points(rows: Sequence[Sequence[int]], rhs: Sequence, n: int) -> list[tuple[int, ...]]:
    """All integer ``x`` with ``rows . x >= rhs``, sorted lexicographically."""
    if n == 0:
        return [()] if all(Fraction(b) <= 0 for b in rhs) else []
    box = bounding_box(rows, rhs, n)
    if box is None:
        return []
    ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in box]
    out = []
    for x in product(*ranges):
        if all(sum(a * v for a, v in zip(r, x)) >= b for r, b in zip(rows, rhs)):
            out.append(tuple(x))
    return out
