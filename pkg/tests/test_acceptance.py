"""Acceptance criteria 1-10, one test each.

Each test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest) and also when this file is executed directly.
"""

import functools
import random
import time
from itertools import product

from conftest import ACCEPTANCE_LINES, COMPLETE, load_fan, load_json, load_rays, projective_space
from test_exactla import check_snf, random_lp, vertex_oracle
from toricfam.cohom import (
    BundleSpec,
    betti_oracle,
    classes_in,
    classifying_ring,
    compare_hilbert,
    euler_class_W,
    family_presentation_bar,
    family_presentation_tilde,
    point_presentation,
    relation_differences,
    sr_monomial,
    tilde_to_bar_substitution,
)
from toricfam.cox import (
    RaySet,
    build_grading,
    equivalence_classes,
    grading_of_fan,
    k_exponents,
    restriction_diagram,
    verify_primitive_saturation,
)
from toricfam.errors import NotCompleteError
from toricfam.exactla import RationalLP, lp_max_slack
from toricfam.fans import (
    appendix_lemma_sweep,
    find_isomorphism,
    is_complete,
    is_projective,
    is_regular,
    primitive_collections,
)
from toricfam.gring import convolve, hilbert_function, parse_poly
from toricfam.replicate import (
    multiplicities_by_rep_ray,
    replicate_data,
    replicate_fan,
    replicated_primitive_collections,
)


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException:
                line = f"[FAIL] {number:>2}. {title} ({time.perf_counter() - start:.2f}s)"
                ACCEPTANCE_LINES.append(line)
                print(line)
                raise
            line = f"[PASS] {number:>2}. {title} ({time.perf_counter() - start:.2f}s)"
            if detail:
                line += f": {detail}"
            ACCEPTANCE_LINES.append(line)
            print(line)
        return run
    return wrap


@criterion(1, "class groups of P^n, F_a, P(1,2,1)")
def test_c01_class_groups():
    for n in range(1, 5):
        g = grading_of_fan(projective_space(n))
        assert g.class_group == (1, ()) and set(g.degrees) == {(1,)}
    for name in ("f1", "f2", "p1xp1"):
        assert grading_of_fan(load_fan(name)).class_group == (2, ())
    g = grading_of_fan(load_fan("p121"))
    assert g.class_group == (1, ()) and g.degrees == ((1,), (2,), (1,))
    return "P^1..P^4 -> Z, F_a -> Z^2, P(1,2,1) -> Z (1,2,1)"


@criterion(2, "Betti numbers from presentations match the f-vector oracle")
def test_c02_betti():
    expected = {"p2": [1, 1, 1], "f1": [1, 2, 1], "p3": [1, 1, 1, 1],
                "p1xp1": [1, 2, 1], "dp6": [1, 4, 1]}
    for name in COMPLETE:
        f = load_fan(name)
        b = betti_oracle(f)
        h = hilbert_function(point_presentation(f), 2 * f.rank).as_list()
        assert h == b
        assert sum(b) == len(f.max_cones)
        assert b == b[::-1]
        if name in expected:
            assert b == expected[name]
    return f"{len(COMPLETE)} fans"


def _replicated_catalog():
    out = []
    for name in COMPLETE:
        f = load_fan(name)
        g = grading_of_fan(f)
        for block in equivalence_classes(g):
            m = multiplicities_by_rep_ray(g, {block[0]: 2})
            out.append((f"{name}x2@{block[0]}", replicate_fan(f, m)))
    return out


@criterion(3, "primitive collections are unions of degree classes")
def test_c03_saturation():
    fans = [(n, load_fan(n)) for n in COMPLETE] + _replicated_catalog()
    for name, f in fans:
        res = verify_primitive_saturation(f)
        assert res.ok, (name, res.counterexample)
    try:
        verify_primitive_saturation(load_fan("figure"))
    except NotCompleteError:
        pass
    else:
        raise AssertionError("figure fan accepted")
    return f"{len(fans)} complete fans ok, figure fan rejected"


@criterion(4, "k-exponents on the 4-ray configuration over P^2")
def test_c04_k_exponents():
    d = restriction_diagram(load_rays("xi4"), load_fan("p2"))
    g = d.grading_xi
    a1, a2 = g.degrees[0], g.degrees[2]
    assert d.J == (3,)
    assert k_exponents(d, 0, a1) == {3: 0}
    assert k_exponents(d, 0, a2) == {3: -1}
    # the same values from an explicit solve with each representative
    for rep, m, k in ((1, (-1, 1), 0), (2, (-1, 0), -1)):
        vals = [sum(a * b for a, b in zip(m, v)) for v in g.rays.vectors]
        assert vals[0] == -1 and vals[rep] == 1
        assert all(vals[x] == 0 for x in (1, 2) if x != rep)
        assert vals[3] == k
    return "k(alpha1) = 0, k(alpha2) = -1"


@criterion(5, "replication round trip")
def test_c05_replication():
    p1 = load_fan("p1")
    m = multiplicities_by_rep_ray(grading_of_fan(p1), {0: 2})
    r = replicate_data(RaySet.of_fan(p1), m)
    assert r.rank == 3 == p1.rank + (2 - 1) * 2
    g = replicate_fan(p1, m, r)
    assert find_isomorphism(g, projective_space(3)) is not None
    assert replicated_primitive_collections(p1, m) == [frozenset(range(4))]
    assert is_complete(g) and is_regular(g) and is_projective(g)
    p2 = load_fan("p2")
    m2 = multiplicities_by_rep_ray(grading_of_fan(p2), {0: 2})
    g2 = replicate_fan(p2, m2)
    assert g2.n_rays == 6 and sum(betti_oracle(g2)) == 6
    assert sum(hilbert_function(point_presentation(g2), 12).as_list()) == 6
    return "P^1 x2 = P^3, P^2 x2 has 6 rays and Betti sum 6"


@criterion(6, "projectivized bundle presentation")
def test_c06_projective_bundle():
    for r in (2, 3):
        f = projective_space(r - 1)
        cs = [f"c{i}" for i in range(1, r + 1)]
        spec = BundleSpec.from_json({"classes": [{"rep_ray": 0, "rank": r, "chern": cs}], "truncation": 4})
        d = restriction_diagram(RaySet.of_fan(f), f)
        p = family_presentation_tilde(d, spec)
        rel = " + ".join([f"f0^{r}"] + [f"c{i}*f0^{r - i}" for i in range(1, r)] + [f"c{r}"])
        nonlinear = [q for q in p.relations if p.half_degree(q) > 1]
        assert nonlinear == [parse_poly(rel)]
        cutoff = 2 * (r + 3)
        base = hilbert_function(spec.base.presentation(), cutoff).as_list()
        assert hilbert_function(p, cutoff).as_list() == convolve(base, [1] * r, cutoff // 2 + 1)
    return "r = 2, 3 at truncation 4"


@criterion(7, "tilde and bar presentations for the 4-ray configuration")
def test_c07_tilde_bar():
    d = restriction_diagram(load_rays("xi4"), load_fan("p2"))
    spec = BundleSpec.from_json(load_json("xi4_bundle"))
    t = family_presentation_tilde(d, spec)
    b = family_presentation_bar(d, spec)
    cmp = compare_hilbert(t, b, 10)
    assert cmp.equal
    diff = relation_differences(t, b, tilde_to_bar_substitution(d, spec))
    assert diff.a_not_in_b or diff.b_not_in_a
    return f"Hilbert {cmp.dims_a} on both sides; {len(diff.a_not_in_b)}+{len(diff.b_not_in_a)} relations differ"


@criterion(8, "Euler classes with zero Chern data reduce to SR monomials")
def test_c08_euler_degeneration():
    count = 0
    for name in COMPLETE:
        f = load_fan(name)
        xs = RaySet.of_fan(f)
        d = restriction_diagram(xs, f)
        lr = classifying_ring(build_grading(xs))
        names = [f"f{i}" for i in range(f.n_rays)]
        for pi in primitive_collections(f):
            e = euler_class_W(classes_in(pi, d), BundleSpec({}, {}), d)
            assert not lr.normal_form(e - sr_monomial(pi, names))
            count += 1
    return f"{count} primitive collections"


@criterion(9, "star lemma over all covectors in [-3, 3]^n")
def test_c09_appendix_lemma():
    checked = 0
    for name in COMPLETE:
        f = load_fan(name)
        for m in product(range(-3, 4), repeat=f.rank):
            for out in appendix_lemma_sweep(f, m):
                if out.holds:
                    checked += 1
    assert checked > 0
    return f"{checked} hypothesis-satisfying cases, 0 falsifications"


@criterion(10, "SNF and LP kernels")
def test_c10_linear_algebra():
    rng = random.Random(10)
    for _ in range(200):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        check_snf([[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)])
    for _ in range(100):
        n, A, b, c = random_lp(rng)
        lp = RationalLP(n, c)
        for row, rhs in zip(A, b):
            lp.ge(row, rhs)
        res = lp_max_slack(lp)
        want = vertex_oracle(A, b, c)
        assert res.infeasible if want is None else res.value == want
    return "200 SNF checks, 100 LPs"


if __name__ == "__main__":
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_c")]:
        try:
            fn()
        except AssertionError:
            pass
