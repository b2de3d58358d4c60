"""Graded pieces of the Cox ring and section spaces of torus-invariant divisors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import FalsificationError, InconsistentSpecError, InfiniteFiberError
from ..exactla import dot
from ..fans import Fan, require_complete
from .diagram import RestrictionDiagram, restriction_diagram
from .grading import GradingData, RaySet, build_grading
from .polytope import lattice_points


@dataclass(frozen=True)
class GradedPiece:
    linear: list  # R': single variables
    higher: list  # R'': products of two or more variables

    @property
    def all(self) -> list:
        return sorted(self.linear + self.higher, reverse=True)


def graded_piece_basis(g: GradingData, beta: Sequence[int], split: bool = False):
    """Exponent vectors ``u >= 0`` with ``c(u) = beta``.

    The fiber is ``u0 + a(M)`` for any lift ``u0``, so the search runs over
    the lattice points ``m`` of ``{<m, xi> >= -u0_xi}``.  That polytope is
    bounded exactly when no nonzero ``a(m)`` is nonnegative.
    """
    beta = g.normalize(beta)
    u0 = g.lift(beta)
    vecs = g.rays.vectors
    try:
        pts = lattice_points(vecs, [-x for x in u0], g.rays.rank)
    except InfiniteFiberError as exc:
        raise InfiniteFiberError(
            f"graded piece of degree {beta} is infinite; the ray set is not complete") from exc
    mons = sorted((tuple(x + dot(m, v) for x, v in zip(u0, vecs)) for m in pts), reverse=True)
    for u in mons:
        if g.degree(u) != beta:
            raise FalsificationError(f"exponent {u} has degree {g.degree(u)}, expected {beta}")
    if not split:
        return mons
    return GradedPiece([u for u in mons if sum(u) == 1], [u for u in mons if sum(u) != 1])


def global_section_points(f: Fan, xi: int) -> list[tuple[int, ...]]:
    """Lattice points of ``{<m, xi> >= -1, <m, xi'> >= 0 for the other rays}``."""
    require_complete(f, "global_section_points")
    if not 0 <= xi < f.n_rays:
        raise IndexError(f"ray index {xi} out of range")
    rhs = [-1 if i == xi else 0 for i in range(f.n_rays)]
    return lattice_points(f.rays, rhs, f.rank)


def _sigma_constraints(xs: RaySet, d: RestrictionDiagram, xi: int, sigma: Iterable[int]):
    rows, rhs = [], []
    for s in sorted(set(sigma)):
        x = d.sigma_to_xi[s]
        rows.append(xs.vectors[x])
        rhs.append(-1 if x == xi else 0)
    return rows, rhs


def section_monomials(xs: RaySet, f: Fan, xi: int, sigma: Iterable[int], bound: int):
    """Exponent vectors over ``Xi`` of ``Z_xi * prod_rho Z_rho^<m, rho>`` for ``m`` in ``M_xi(sigma)``.

    ``xi`` indexes ``xs``; ``sigma`` is a cone of ``f`` given by fan ray
    indices.  Only ``m`` whose evaluations on all of ``Xi`` have absolute
    value at most ``bound`` are listed.
    """
    require_complete(f, "section_monomials")
    d = restriction_diagram(xs, f)
    sigma = frozenset(sigma)
    if sigma not in f.cones:
        raise InconsistentSpecError(f"{sorted(sigma)} is not a cone of the fan")
    rows, rhs = _sigma_constraints(xs, d, xi, sigma)
    for v in xs.vectors:
        rows += [v, tuple(-x for x in v)]
        rhs += [-bound, -bound]
    out = []
    for m in lattice_points(rows, rhs, xs.rank):
        u = [dot(m, v) for v in xs.vectors]
        u[xi] += 1
        out.append(tuple(u))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class InvariantMonomial:
    m: tuple[int, ...]
    xi_exponents: tuple[int, ...]
    sigma_exponents: tuple[int, ...]


def invariant_monomial_correspondence(xs: RaySet, f: Fan, sigma: Iterable[int], bound: int):
    """Invariant Laurent monomials on both sides, paired through ``m``.

    For ``m`` in the dual cone with ``|m|_inf <= bound`` the monomial
    ``prod_{rho in Xi} Z_rho^<m, rho>`` is matched with its image after
    setting the ``J`` variables to 1.  Both must have degree zero and the
    forgetful map must be a bijection on the emitted sets.
    """
    require_complete(f, "invariant_monomial_correspondence")
    d = restriction_diagram(xs, f)
    sigma = frozenset(sigma)
    n = xs.rank
    rows = [f.rays[s] for s in sorted(sigma)]
    rhs = [0] * len(rows)
    for k in range(n):
        e = tuple(int(i == k) for i in range(n))
        rows += [e, tuple(-x for x in e)]
        rhs += [-bound, -bound]
    gx, gs = d.grading_xi, d.grading_sigma
    out = []
    for m in lattice_points(rows, rhs, n):
        ux = tuple(dot(m, v) for v in xs.vectors)
        us = tuple(d.restrict(ux))
        if gx.degree(ux) != gx.zero() or gs.degree(us) != gs.zero():
            raise FalsificationError(f"invariant monomial for m = {m} has nonzero degree")
        out.append(InvariantMonomial(tuple(m), ux, us))
    images = [t.sigma_exponents for t in out]
    if len(set(images)) != len(images):
        raise FalsificationError("forgetting the J variables is not injective")
    expected = {tuple(dot(m, r) for r in f.rays) for m in (t.m for t in out)}
    if set(images) != expected:
        raise FalsificationError("forgetting the J variables does not hit the fan-side monomials")
    return out
