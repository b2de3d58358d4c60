from hypothesis import given, settings
from hypothesis import strategies as st

from toricfam.cones import Cone, dual_description, face_witness, intersect, is_face_of
from toricfam.exactla import dot, rational_rank


def test_orthant():
    c = Cone(2, ((1, 0), (0, 1)))
    assert sorted(c.facet_normals) == [(0, 1), (1, 0)]
    assert c.is_pointed and c.dim == 2
    assert c.contains((1, 1)) and not c.contains((-1, 1))


def test_intersection_of_two_cones():
    a = Cone(2, ((1, 0), (1, 2)))
    b = Cone(2, ((1, 1), (0, 1)))
    assert intersect(a, b) == Cone(2, ((1, 1), (1, 2)))
    assert sorted(intersect(a, b).extreme_rays) == [(1, 1), (1, 2)]


def test_redundant_generator_dropped():
    c = Cone(2, ((1, 0), (0, 1), (1, 1)))
    assert sorted(c.extreme_rays) == [(0, 1), (1, 0)]


def test_halfplane_has_lineality():
    c = Cone(2, ((1, 0), (-1, 0), (0, 1)))
    assert not c.is_pointed
    assert len(c.lineality) == 1


def test_lower_dimensional_cone_equations():
    c = dual_description([(1, 0, 0), (0, 1, 0)], 3)
    assert c.dim == 2
    assert len(c.equations) == 1
    assert all(dot(c.equations[0], g) == 0 for g in c.generators)


def test_faces():
    c = Cone(2, ((1, 0), (0, 1)))
    assert is_face_of(Cone(2, ((1, 0),)), c)
    assert not is_face_of(Cone(2, ((1, 1),)), c)
    assert face_witness(c, c) == (0, 0)
    assert is_face_of(Cone(2, ()), c)


vec3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(any)


@given(st.lists(vec3, min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_double_description_consistent(gens):
    c = Cone(3, tuple(gens))
    ineqs = c.inequalities
    # every generator satisfies every inequality
    for g in gens:
        assert all(dot(h, g) >= 0 for h in ineqs)
    # every facet normal is tight on a full facet
    d = c.dim
    lin = len(c.lineality)
    for h in c.facet_normals:
        tight = [g for g in gens if dot(h, g) == 0]
        assert (rational_rank(tight) if tight else 0) == d - 1
        assert any(dot(h, g) > 0 for g in gens)
    # regenerating from inequalities gives the same cone
    back = Cone.from_inequalities(ineqs, 3)
    assert back == c
    assert lin == len(back.lineality)


@given(st.lists(vec3, min_size=1, max_size=4), vec3)
@settings(max_examples=60, deadline=None)
def test_generators_and_sums_are_contained(gens, v):
    c = Cone(3, tuple(gens))
    s = tuple(map(sum, zip(*gens)))
    assert c.contains(s)
    # v is in the cone iff it is in the cone spanned together with itself
    assert c.contains(v) == (Cone(3, tuple(gens) + (v,)) == c)
