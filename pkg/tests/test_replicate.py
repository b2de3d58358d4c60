import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_fan, projective_space
from toricfam.cohom import betti_oracle
from toricfam.cox import RaySet, equivalence_classes, grading_of_fan, verify_primitive_saturation
from toricfam.errors import InconsistentSpecError, NotCompleteError, NotSimplicialError
from toricfam.exactla import IntMatrix
from toricfam.fans import find_isomorphism, is_projective, is_regular, primitive_collections
from toricfam.replicate import (
    multiplicities_by_rep_ray,
    replicate_data,
    replicate_fan,
    replicated_primitive_collections,
)

SMALL = ["p1", "p2", "p1xp1", "f1", "f2", "p121"]


def mult(name, by_ray):
    return multiplicities_by_rep_ray(grading_of_fan(load_fan(name)), by_ray)


def test_p1_doubled_is_p3():
    f = load_fan("p1")
    m = mult("p1", {0: 2})
    r = replicate_data(RaySet.of_fan(f), m)
    assert r.rank == 3 == f.rank + (2 - 1) * 2
    g = replicate_fan(f, m)
    assert g.n_rays == 4
    assert find_isomorphism(g, projective_space(3)) is not None
    assert replicated_primitive_collections(f, m) == [frozenset(range(4))]


def test_p2_doubled_is_p5():
    f = load_fan("p2")
    m = mult("p2", {0: 2})
    g = replicate_fan(f, m)
    assert (g.rank, g.n_rays, len(g.max_cones)) == (5, 6, 6)
    assert betti_oracle(g) == [1] * 6
    assert find_isomorphism(g, projective_space(5)) is not None
    assert replicated_primitive_collections(f, m) == [frozenset(range(6))]


def test_f1_one_class_doubled():
    f = load_fan("f1")
    m = mult("f1", {1: 2})
    cols = replicated_primitive_collections(f, m)
    assert [len(c) for c in cols] == [2, 3]
    g = replicate_fan(f, m)
    assert cols == primitive_collections(g)


@pytest.mark.parametrize("name", SMALL + ["dp6", "p3"])
def test_trivial_multiplicities_give_same_fan(name):
    f = load_fan(name)
    g = replicate_fan(f, {})
    assert find_isomorphism(f, g) is not None


@pytest.mark.parametrize("name", SMALL)
def test_replicated_fan_invariants(name):
    f = load_fan(name)
    g0 = grading_of_fan(f)
    for rep in sorted({c[0] for c in equivalence_classes(g0)}):
        m = multiplicities_by_rep_ray(g0, {rep: 2})
        r = replicate_data(RaySet.of_fan(f), m)
        g = replicate_fan(f, m, r)
        assert is_regular(g) or not is_regular(f)
        assert is_projective(g) or not is_projective(f)
        assert verify_primitive_saturation(g).ok
        # copies are equivalent exactly when their originals share a class
        gg = grading_of_fan(g)
        for i, (x, _) in enumerate(r.copies):
            for j, (y, _) in enumerate(r.copies):
                assert (gg.degrees[i] == gg.degrees[j]) == (g0.degrees[x] == g0.degrees[y])
        assert replicated_primitive_collections(f, m) == primitive_collections(g)


def test_section_maps():
    f = load_fan("f1")
    r = replicate_data(RaySet.of_fan(f), mult("f1", {0: 2, 1: 3}))
    k = f.n_rays
    for d in r.section_choices():
        assert r.plus_matrix @ r.j_matrix(d) == IntMatrix.identity(k)
        nu = r.nu_matrix(d)
        for (x, c), v in zip(r.copies, r.xi_prime.vectors):
            want = f.rays[x] if c == d[x] else (0,) * f.rank
            assert tuple(nu @ list(v)) == want


def test_bad_multiplicities():
    with pytest.raises(InconsistentSpecError):
        replicate_data(RaySet.of_fan(load_fan("p2")), mult("p2", {0: 0}))
    with pytest.raises(InconsistentSpecError):
        mult("f1", {0: 2, 2: 3})
    with pytest.raises(InconsistentSpecError):
        replicate_data(RaySet.of_fan(load_fan("p2")), {(5,): 2})


def test_preconditions():
    with pytest.raises(NotCompleteError):
        replicate_fan(load_fan("figure"), {})
    from test_cohom import cube_fan
    with pytest.raises(NotSimplicialError):
        replicate_fan(cube_fan(), {})


@given(st.sampled_from(["p1", "p2", "p1xp1", "f1"]), st.data())
@settings(max_examples=15, deadline=None)
def test_random_multiplicities(name, data):
    f = load_fan(name)
    g0 = grading_of_fan(f)
    reps = [c[0] for c in equivalence_classes(g0)]
    chosen = {rep: data.draw(st.integers(1, 2)) for rep in reps}
    if sum(chosen.values()) - len(chosen) > 3:
        return
    m = multiplicities_by_rep_ray(g0, chosen)
    r = replicate_data(RaySet.of_fan(f), m)
    expected_rank = f.rank + sum((chosen[c[0]] - 1) * len(c) for c in equivalence_classes(g0))
    assert r.rank == expected_rank
    g = replicate_fan(f, m, r)
    assert len(g.max_cones) == sum(
        _prod(m[g0.degrees[x]] for x in range(f.n_rays) if x not in s) for s in f.max_cones)
    assert betti_oracle(g)[0] == 1


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def test_projectivity_formulations_agree_on_replicated_fan():
    from toricfam.exactla import lp_max_slack
    from toricfam.fans import projectivity_lp
    g = replicate_fan(load_fan("p2"), mult("p2", {0: 2}))
    res = lp_max_slack(projectivity_lp(g))
    assert is_projective(g) and (res.unbounded or res.value > 0)
