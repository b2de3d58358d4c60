"""Cohomology presentations of toric varieties and of toric families.

Variables are named ``f<i>`` with ``i`` an index into the ray set ``Xi``
(for a bare fan, ``Xi`` is the ray list).  Chern data of the bundles are
polynomials in base symbols; the base cohomology ring is the free even ring
on those symbols, truncated above a fixed degree, modulo optional relations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .cox import RaySet, RestrictionDiagram, build_grading, isotypic, restriction_diagram
from .cox.grading import ClassElement, GradingData
from .errors import FalsificationError, InconsistentSpecError, NotCompleteError, NotSimplicialError
from .fans import Fan, f_vector, is_complete, is_regular, is_simplicial, primitive_collections
from .gring import GradedPresentation, Poly, hilbert_function, parse_poly

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def fvar(i: int) -> str:
    return f"f{i}"


def _linear_relations(g: GradingData, names: Sequence[str]) -> list[Poly]:
    out = []
    for col in g.kernel_basis:
        p = Poly()
        for coeff, name in zip(col, names):
            if coeff:
                p = p + Poly.const(coeff) * Poly.var(name)
        if p:
            out.append(p)
    return out


def classifying_ring(g: GradingData, names: Sequence[str] | None = None) -> GradedPresentation:
    """``Q[f_xi] / LR``, the rational cohomology of the classifying space of ``G``."""
    names = list(names) if names is not None else [fvar(i) for i in range(len(g.rays))]
    return GradedPresentation(
        tuple((n, 2) for n in names), relations=tuple(_linear_relations(g, names)),
        integral=g.is_torsion_free)


def _require_cs(f: Fan, what: str):
    if not is_complete(f):
        raise NotCompleteError(f"{what} needs a complete fan")
    if not is_simplicial(f):
        raise NotSimplicialError(f"{what} needs a simplicial fan")


def sr_monomial(pi: Iterable[int], names: Sequence[str]) -> Poly:
    out = Poly.const(1)
    for i in sorted(pi):
        out = out * Poly.var(names[i])
    return out


def point_presentation(f: Fan) -> GradedPresentation:
    """``Q[f_xi] / (LR + SR)`` for a complete simplicial fan."""
    _require_cs(f, "point_presentation")
    g = build_grading(RaySet.of_fan(f))
    names = [fvar(i) for i in range(f.n_rays)]
    rels = _linear_relations(g, names) + [sr_monomial(pi, names) for pi in primitive_collections(f)]
    return GradedPresentation(tuple((n, 2) for n in names), relations=tuple(rels),
                              integral=is_regular(f))


def betti_oracle(f: Fan) -> list[int]:
    """Even Betti numbers from the f-vector alone (h-vector formula)."""
    _require_cs(f, "betti_oracle")
    n = f.rank
    d = f_vector(f)
    b = [sum((-1) ** (i - k) * comb(i, k) * d[n - i] for i in range(k, n + 1))
         for k in range(n + 1)]
    if any(x < 0 for x in b) or sum(b) != len(f.max_cones):
        raise FalsificationError(f"h-vector {b} is not a valid Betti vector for this fan")
    return b


@dataclass(frozen=True)
class BaseRing:
    """Truncated even polynomial ring standing in for ``H^*(S; Q)``."""

    symbols: tuple = ()  # (name, cohomological degree)
    truncation: int = 0
    relations: tuple = ()

    def presentation(self) -> GradedPresentation:
        return GradedPresentation((), self.symbols, self.truncation, self.relations)


@dataclass(frozen=True)
class ClassData:
    indices: tuple  # Xi indices of the V-class
    rank: int
    chern: tuple  # c_1 .. c_rank as Poly


@dataclass(frozen=True)
class BundleSpec:
    """Formal Chern data of the bundles ``V_alpha`` keyed by a representative ray.

    ``chern[rep_ray]`` lists ``c_1 .. c_k`` (``k <= rank``; missing entries
    are zero).  Classes that are not listed are trivial bundles of the
    appropriate rank.
    """

    ranks: dict  # rep_ray -> rank
    chern: dict  # rep_ray -> tuple of Poly
    base: BaseRing = BaseRing()

    @classmethod
    def from_json(cls, data: dict) -> BundleSpec:
        try:
            entries = data.get("classes", [])
            trunc = int(data.get("truncation", 0))
            rels = tuple(parse_poly(s) for s in data.get("base_relations", []))
            declared = {str(n): int(d) for n, d in data.get("base_symbols", [])}
        except (TypeError, ValueError, AttributeError) as exc:
            raise InconsistentSpecError(f"malformed bundle JSON: {exc}") from exc
        ranks, chern = {}, {}
        degrees = dict(declared)
        for e in entries:
            rep = int(e["rep_ray"])
            if rep in ranks:
                raise InconsistentSpecError(f"ray {rep} is listed twice")
            ranks[rep] = int(e["rank"])
            polys = []
            for i, s in enumerate(e.get("chern", []), start=1):
                p = parse_poly(str(s))
                name = str(s).strip()
                if _IDENT.fullmatch(name):
                    if degrees.setdefault(name, 2 * i) != 2 * i:
                        raise InconsistentSpecError(
                            f"symbol {name} used in degrees {degrees[name]} and {2 * i}")
                polys.append(p)
            chern[rep] = tuple(polys)
        used = set()
        for ps in chern.values():
            for p in ps:
                used |= p.symbols()
        for r in rels:
            used |= r.symbols()
        missing = sorted(used - set(degrees))
        if missing:
            raise InconsistentSpecError(f"cannot infer degrees of base symbols {missing}; "
                                        "declare them under base_symbols")
        base = BaseRing(tuple(sorted(degrees.items())), trunc, rels)
        spec = cls(ranks, chern, base)
        spec.check_degrees()
        return spec

    def check_degrees(self):
        w = {n: d // 2 for n, d in self.base.symbols}
        for rep, ps in self.chern.items():
            if len(ps) > self.ranks[rep]:
                raise InconsistentSpecError(f"class of ray {rep}: more Chern classes than rank")
            for i, p in enumerate(ps, start=1):
                degs = p.degrees(w)
                if degs and degs != {i}:
                    raise InconsistentSpecError(
                        f"c_{i} of the class of ray {rep} must have degree {2 * i}, got {p}")

    def resolve(self, d: RestrictionDiagram) -> dict:
        """``alpha -> ClassData`` for every class of ``A_Xi``, with consistency checks."""
        iso = isotypic(d)
        gx = d.grading_xi
        out = {}
        for rep in self.ranks:
            if not 0 <= rep < len(gx.rays):
                raise InconsistentSpecError(f"rep_ray {rep} is out of range")
        seen = {}
        for rep in self.ranks:
            alpha = gx.degrees[rep]
            if alpha in seen:
                raise InconsistentSpecError(f"rays {seen[alpha]} and {rep} lie in the same class")
            seen[alpha] = rep
        for alpha, idx in iso.V_classes.items():
            rep = seen.get(alpha)
            rank = self.ranks.get(rep, len(idx)) if rep is not None else len(idx)
            if rank != len(idx):
                raise InconsistentSpecError(
                    f"class {list(idx)} has {len(idx)} rays but the spec gives rank {rank}")
            ch = tuple(self.chern.get(rep, ())) if rep is not None else ()
            ch = ch + (Poly(),) * (rank - len(ch))
            out[alpha] = ClassData(tuple(idx), rank, ch)
        return out

    def zero_chern(self) -> BundleSpec:
        return BundleSpec(dict(self.ranks), {k: () for k in self.chern}, self.base)


def euler_factor(alpha: Poly, chern: Sequence[Poly], rank: int) -> Poly:
    """``alpha^r + c_1 alpha^(r-1) + ... + c_r``."""
    out = alpha ** rank
    for i, c in enumerate(chern[:rank], start=1):
        if c:
            out = out + c * alpha ** (rank - i)
    return out


def _all_symbols_zero(p: Poly, names: Iterable[str]) -> Poly:
    return p.subs({n: Poly() for n in names})


def classes_in(pi: Iterable[int], d: RestrictionDiagram) -> frozenset:
    """The ``A_Sigma`` classes included in a primitive collection (fan indices)."""
    return frozenset(d.grading_sigma.degrees[i] for i in pi)


def euler_class_W(pi_classes: Iterable, spec: BundleSpec, d: RestrictionDiagram) -> Poly:
    """``prod_{b(alpha) in pi_classes} (alpha^r + c_1 alpha^(r-1) + ... + c_r)``.

    Each ``alpha`` is represented by ``f`` of the least ray in its V-class.
    With the Chern data set to zero the product must reduce modulo LR to the
    Stanley-Reisner monomial of the rays in those classes; this is checked.
    """
    pi_classes = frozenset(tuple(b) for b in pi_classes)
    data = spec.resolve(d)
    out = Poly.const(1)
    plain = Poly.const(1)
    for alpha in sorted(data):
        if d.b(alpha) not in pi_classes:
            continue
        cd = data[alpha]
        rep = Poly.var(fvar(cd.indices[0]))
        out = out * euler_factor(rep, cd.chern, cd.rank)
        plain = plain * rep ** cd.rank
    rays = [x for x in range(len(d.grading_xi.rays)) if d.b(d.grading_xi.degrees[x]) in pi_classes]
    sr = sr_monomial(rays, [fvar(i) for i in range(len(d.grading_xi.rays))])
    lr = classifying_ring(d.grading_xi)
    base_names = [n for n, _ in spec.base.symbols]
    if lr.normal_form(_all_symbols_zero(out, base_names) - sr):
        raise FalsificationError(f"Euler class {out} does not degenerate to {sr} modulo LR")
    if lr.normal_form(plain - sr):
        raise FalsificationError("product of class representatives differs from the SR monomial")
    return out


def _base_and_vars(names, base: BaseRing):
    clash = set(names) & {n for n, _ in base.symbols}
    if clash:
        raise InconsistentSpecError(f"base symbols {sorted(clash)} clash with ring variables")
    return tuple((n, 2) for n in names), base.symbols


def family_presentation_tilde(d: RestrictionDiagram, spec: BundleSpec) -> GradedPresentation:
    """``H^*(S)[f_rho, rho in Xi] / (LR_Xi + SR_Xi + <c_1(V_j) + f_j>)``."""
    _require_cs(d.fan, "family_presentation_tilde")
    gx = d.grading_xi
    names = [fvar(i) for i in range(len(gx.rays))]
    variables, base_syms = _base_and_vars(names, spec.base)
    data = spec.resolve(d)
    rels = _linear_relations(gx, names) + list(spec.base.relations)
    for pi in primitive_collections(d.fan):
        rels.append(euler_class_W(classes_in(pi, d), spec, d))
    for j in d.J:
        cd = data[gx.degrees[j]]
        rels.append(cd.chern[0] + Poly.var(fvar(j)))
    return GradedPresentation(variables, base_syms, spec.base.truncation, tuple(rels),
                              integral=is_regular(d.fan))


@dataclass(frozen=True)
class WSpec:
    """Chern data of the ``G_Sigma``-isotypic bundles ``W_beta``, ``beta != 0``."""

    data: dict  # beta -> ClassData (indices are Xi indices of the fan rays in beta)
    base: BaseRing


def whitney_product(cherns: Sequence[Sequence[Poly]], ranks: Sequence[int]) -> tuple:
    total = [Poly.const(1)]
    for ch, r in zip(cherns, ranks):
        factor = [Poly.const(1)] + list(ch) + [Poly()] * (r - len(ch))
        new = [Poly() for _ in range(len(total) + len(factor) - 1)]
        for i, a in enumerate(total):
            for k, b in enumerate(factor):
                new[i + k] = new[i + k] + a * b
        total = new
    return tuple(total[1:])


def restrict_to_W(spec: BundleSpec, d: RestrictionDiagram) -> WSpec:
    """Chern data of ``W_beta = sum_{b(alpha) = beta} V_alpha`` by the Whitney formula."""
    data = spec.resolve(d)
    iso = isotypic(d)
    out = {}
    zero = d.grading_sigma.zero()
    for beta, alphas in iso.W_classes.items():
        if beta == zero:
            continue
        parts = [data[a] for a in sorted(alphas, key=lambda a: data[a].indices)]
        rank = sum(p.rank for p in parts)
        ch = whitney_product([p.chern for p in parts], [p.rank for p in parts])
        idx = tuple(sorted(i for p in parts for i in p.indices))
        out[beta] = ClassData(idx, rank, ch[:rank])
    return WSpec(out, spec.base)


def family_presentation_bar(d: RestrictionDiagram | Fan, wspec: WSpec | BundleSpec) -> GradedPresentation:
    """``H^*(S)[f_xi, xi in Sigma(1)] / (LR_Sigma + SR_Sigma)``.

    Each ``W_beta`` contributes one Euler factor in the single degree-2 class
    ``beta`` (represented by ``f`` of its least ray), with Chern classes of
    ``W_beta`` itself.
    """
    if isinstance(d, Fan):
        d = restriction_diagram(RaySet.of_fan(d), d)
    _require_cs(d.fan, "family_presentation_bar")
    if isinstance(wspec, BundleSpec):
        wspec = restrict_to_W(wspec, d)
    gs = d.grading_sigma
    names = [fvar(x) for x in d.sigma_to_xi]
    variables, base_syms = _base_and_vars(names, wspec.base)
    rels = _linear_relations(gs, names) + list(wspec.base.relations)
    base_names = [n for n, _ in wspec.base.symbols]
    lr = classifying_ring(gs, names)
    for pi in primitive_collections(d.fan):
        betas = classes_in(pi, d)
        e = Poly.const(1)
        for beta in sorted(betas):
            cd = wspec.data[beta]
            e = e * euler_factor(Poly.var(fvar(cd.indices[0])), cd.chern, cd.rank)
        sr = sr_monomial(pi, names)
        if lr.normal_form(_all_symbols_zero(e, base_names) - sr):
            raise FalsificationError(f"bar Euler class {e} does not degenerate to {sr}")
        rels.append(e)
    return GradedPresentation(variables, base_syms, wspec.base.truncation, tuple(rels),
                              integral=is_regular(d.fan))


@dataclass(frozen=True)
class HilbertComparison:
    equal: bool
    first_difference: int | None
    dims_a: list
    dims_b: list


def compare_hilbert(a: GradedPresentation, b: GradedPresentation, cutoff: int) -> HilbertComparison:
    ha, hb = hilbert_function(a, cutoff).as_list(), hilbert_function(b, cutoff).as_list()
    diff = next((2 * i for i, (x, y) in enumerate(zip(ha, hb)) if x != y), None)
    return HilbertComparison(diff is None, diff, ha, hb)


def tilde_to_bar_substitution(d: RestrictionDiagram, spec: BundleSpec) -> dict:
    """``f_j -> -c_1(V_j)``: the identification used to compare the two rings."""
    data = spec.resolve(d)
    return {fvar(j): -data[d.grading_xi.degrees[j]].chern[0] for j in d.J}


@dataclass(frozen=True)
class RelationDiff:
    a_not_in_b: list  # (relation, normal form mod b) as strings
    b_not_in_a: list

    @property
    def identical_ideals(self) -> bool:
        return not self.a_not_in_b and not self.b_not_in_a


def relation_differences(a: GradedPresentation, b: GradedPresentation,
                         substitution: Mapping[str, Poly] | None = None) -> RelationDiff:
    """Reduce each presentation's relations modulo the other's ideal.

    ``substitution`` rewrites ``a``'s relations into ``b``'s generators first;
    ``b``'s relations are compared against ``a`` after the same rewriting of
    ``a``.  Nonzero normal forms are reported, nothing is concluded about
    ring isomorphism.
    """
    sub = dict(substitution or {})
    a_in_b = GradedPresentation(b.variables, b.base_symbols, b.truncation_degree,
                                tuple(r.subs(sub) for r in a.relations))
    names = b.generator_names
    out_a, out_b = [], []
    for r in a_in_b.relations:
        nf = b.normal_form(r)
        if nf:
            out_a.append((r.to_string(names), nf.to_string(names)))
    for r in b.relations:
        nf = a_in_b.normal_form(r)
        if nf:
            out_b.append((r.to_string(names), nf.to_string(names)))
    return RelationDiff(out_a, out_b)
