from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricfam.errors import InhomogeneousError
from toricfam.exactla import rational_rank
from toricfam.gring import GradedPresentation, Poly, convolve, hilbert_function, parse_poly


def monomials(names, k):
    return [dict(zip(names, e)) for e in product(range(k + 1), repeat=len(names)) if sum(e) == k]


def dimension_oracle(names, relations, k):
    """Quotient dimension in algebraic degree k for standard-graded variables, by
    spanning multiples of each relation and taking a rational rank."""
    basis = [tuple(sorted(m.items())) for m in monomials(names, k)]
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for r in relations:
        d = next(iter(r.degrees({n: 1 for n in names})))
        if d > k:
            continue
        for m in monomials(names, k - d):
            p = r * Poly.monomial(m)
            row = [Fraction(0)] * len(basis)
            for mono, c in p.terms.items():
                full = tuple(sorted({**{n: 0 for n in names}, **dict(mono)}.items()))
                row[index[full]] = c
            rows.append(row)
    return len(basis) - (rational_rank(rows) if rows else 0)


def std(names):
    return tuple((n, 2) for n in names)


def test_truncated_line():
    p = GradedPresentation(std(["t"]), relations=["t^3"])
    assert hilbert_function(p, 6).as_list() == [1, 1, 1, 0]


def test_complete_intersection():
    p = GradedPresentation(std(["x", "y"]), relations=["x^2 - y^2", "x*y"])
    assert hilbert_function(p, 6).as_list() == [1, 2, 1, 0]


def test_free_ring_counts_monomials():
    p = GradedPresentation(std(["x", "y", "z"]))
    assert hilbert_function(p, 6).as_list() == [1, 3, 6, 10]
    assert hilbert_function(GradedPresentation(std(["t"])), 6).as_list() == [1, 1, 1, 1]


def test_weighted_variables():
    p = GradedPresentation((("x", 2), ("y", 4)))
    assert hilbert_function(p, 8).as_list() == [1, 1, 2, 2, 3]


def test_normal_form_membership():
    p = GradedPresentation(std(["x", "y"]), relations=["x - y"])
    assert not p.normal_form(parse_poly("x^2 - y^2"))
    assert p.normal_form(parse_poly("x^2"))


def test_base_truncation():
    p = GradedPresentation(std(["x"]), base_symbols=(("s", 2),), truncation_degree=2)
    # s^2 vanishes: degree 4 is spanned by x^2 and x*s
    assert hilbert_function(p, 6).as_list() == [1, 2, 2, 2]


def test_inhomogeneous_rejected():
    with pytest.raises(InhomogeneousError):
        GradedPresentation(std(["x"]), relations=["x^2 + x"])
    with pytest.raises(ValueError):
        GradedPresentation((("x", 3),))
    with pytest.raises(ValueError):
        GradedPresentation(std(["x"]), relations=["y"])


def test_parser():
    p = parse_poly("2*x^2*y - (x + 1/2*y)*y + 3")
    assert p.subs({"x": Poly.const(1), "y": Poly.const(2)}) == Poly.const(3)
    q = parse_poly("-(a - b)^2")
    assert q == -(parse_poly("a") - parse_poly("b")) ** 2
    with pytest.raises(ValueError):
        parse_poly("x +* y")


def test_convolve():
    assert convolve([1, 1, 1], [1, 1]) == [1, 2, 2, 1]
    assert convolve([1, 2], [1, 2], 2) == [1, 4]


names3 = ["x", "y", "z"]
coeff = st.integers(-3, 3)


@st.composite
def homogeneous(draw, degree):
    terms = {}
    for m in monomials(names3, degree):
        c = draw(coeff)
        if c:
            terms[tuple((n, e) for n, e in sorted(m.items()) if e)] = Fraction(c)
    return Poly(terms)


@given(st.lists(st.integers(1, 2).flatmap(homogeneous), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_hilbert_matches_rank_oracle(rels):
    rels = [r for r in rels if r]
    p = GradedPresentation(std(names3), relations=rels)
    h = hilbert_function(p, 6).as_list()
    assert h == [dimension_oracle(names3, rels, k) for k in range(4)]


@given(st.integers(1, 2).flatmap(homogeneous), st.integers(1, 2).flatmap(homogeneous))
@settings(max_examples=40, deadline=None)
def test_ring_axioms(a, b):
    c = parse_poly("x - 2*z")
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a - a == Poly()
    assert parse_poly(a.to_string()) == a


@given(st.integers(1, 2).flatmap(homogeneous))
@settings(max_examples=40, deadline=None)
def test_relations_reduce_to_zero(r):
    if not r:
        return
    p = GradedPresentation(std(names3), relations=[r])
    assert not p.normal_form(r)
    assert not p.normal_form(r * parse_poly("x + y"))
