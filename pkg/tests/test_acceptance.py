"""The ten acceptance criteria, one test each.

Each test records a one-line PASS/FAIL verdict, printed in the terminal
summary (and to stdout under ``pytest -s``).
"""

import random
import time
from fractions import Fraction
from functools import wraps

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ACCEPTANCE, LEMMA1, check_lemma1
from fermionic_tqft.chain_complex import (admissible_sets, build_complex, verify_all_marked_sets,
                                          verify_complex)
from fermionic_tqft.exact_linalg import LabeledMatrix
from fermionic_tqft.genfun import (check_pentagon, generating_function, genfun_inner, genfun_matrix,
                                   genfun_product, state_sum, tet_function_of)
from fermionic_tqft.grassmann import (GrassmannElement, berezin_multi, eq_up_to_sign,
                                      identify_generators)
from fermionic_tqft.library import (EXAMPLES, MERIDIAN_PAIRS, PARALLEL_PAIRS, example, single_tetrahedron,
                                    solid_torus, solid_torus_closed_form, solid_torus_factored,
                                    solid_torus_pair, two_tetrahedron_sphere)
from fermionic_tqft.surgery import (boundary_13, boundary_22, boundary_31, boundary_sites,
                                    build_triangle_tree, connected_sum, glue_with_info,
                                    glued_generating_function, make_inner_tetrahedron,
                                    pachner_14, predict_boundary_change, random_interior_move,
                                    remove_tetrahedron, MoveError)
from fermionic_tqft.torsion import random_tau_chain, torsion_D
from oracles import genfun_leibniz, lemma1_holds


def criterion(number, text):
    def deco(fn):
        @wraps(fn)
        def run(*args, **kwargs):
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                ACCEPTANCE[number] = (ok, text)
                print("criterion %2d: %s  %s" % (number, "PASS" if ok else "FAIL", text))
        return run
    return deco


def distinct_rationals(rng, n):
    out = []
    while len(out) < n:
        z = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        if z not in out:
            out.append(z)
    return out


# -- 1 ----------------------------------------------------------------------------------

@criterion(1, "pentagon identity at (0,1,2,3,4) and 100 random points, under 1 s")
def test_01_pentagon():
    start = time.perf_counter()
    assert check_pentagon([0, 1, 2, 3, 4])
    rng = random.Random(20240601)
    for _ in range(100):
        assert check_pentagon(distinct_rationals(rng, 5))
    assert time.perf_counter() - start < 1.0


# -- 2 ----------------------------------------------------------------------------------

def fuzzed_triangulations(count, seed):
    """Triangulations reached from the examples by random interior and boundary moves."""
    rng = random.Random(seed)
    bases = [example(n) for n in ("tet", "s3", "solid-torus")]
    out = []
    while len(out) < count:
        t = rng.choice(bases)
        for _ in range(rng.randint(1, 4)):
            if t.components and rng.random() < 0.5:
                sites = boundary_sites(t)
                kind = rng.choice([k for k in ("1-3", "2-2", "3-1") if sites[k]])
                try:
                    t = {"1-3": boundary_13, "2-2": boundary_22, "3-1": boundary_31}[kind](
                        t, rng.choice(sites[kind]))
                except MoveError:
                    continue
            else:
                step = random_interior_move(t, rng, max_tets=12)
                if step:
                    t = step[0]
        out.append(t)
    return out


@criterion(2, "complex property for every builtin example and admissible D, and 50 fuzzed triangulations, under 10 s")
def test_02_complex_property():
    start = time.perf_counter()
    for name in EXAMPLES:
        t = example(name)
        assert verify_all_marked_sets(t)
        sets = list(admissible_sets(t))
        if len(sets) <= 1000:
            for D in sets:
                assert verify_complex(build_complex(t, D)), (name, D)
        else:
            # too many to list one by one; the all-at-once check above covers them,
            # and a seeded sample is also checked explicitly
            rng = random.Random(7)
            for D in rng.sample(sets, 200):
                assert verify_complex(build_complex(t, D)), (name, D)
    rng = random.Random(11)
    for t in fuzzed_triangulations(50, seed=5):
        assert verify_all_marked_sets(t)
        sets = list(admissible_sets(t))
        D = rng.choice(sets)
        assert verify_complex(build_complex(t, D))
    assert time.perf_counter() - start < 10.0


# -- 3 ----------------------------------------------------------------------------------

@criterion(3, "I(S^3) = 1 on two tetrahedra and after 20 random interior moves")
def test_03_sphere():
    t = two_tetrahedron_sphere()
    assert generating_function(t).normalized().element == GrassmannElement.constant(1)
    rng = random.Random(3)
    moves = 0
    while moves < 20:
        step = random_interior_move(t, rng)
        assert step is not None
        t = step[0]
        moves += 1
        f = generating_function(t)
        assert f.normalized().element == GrassmannElement.constant(1)
        assert abs(f.element.scalar_part()) == 1


# -- 4 ----------------------------------------------------------------------------------

@criterion(4, "10 random nondegenerate tau-chains per example agree with the standard one up to sign")
def test_04_tau_chains():
    rng = random.Random(4)
    for name in ("tet", "s3", "s3-big", "solid-torus", "pretzel"):
        t = example(name)
        f = generating_function(t)
        # a marked set with nonzero invariant (the leading monomial) and the first admissible one
        marked = [list(sorted(f.element.terms)[0]), next(iter(admissible_sets(t)))]
        for D in marked:
            c = build_complex(t, D)
            ref = torsion_D(c)
            for _ in range(10):
                other = torsion_D(c, random_tau_chain(c, rng))
                assert other in (ref, -ref), (name, D, ref, other)


# -- 5 ----------------------------------------------------------------------------------

@criterion(5, "solid torus: degree 4, meridian substitutions vanish, parallels do not, closed form matches up to sign")
def test_05_solid_torus():
    for zetas in (None, {1: 2, 2: 5, 3: -1, 4: Fraction(11, 3)}):
        t = solid_torus(zetas)
        f = generating_function(t)
        assert f.degree == 4 and f.element.degrees() == {4}
        for p, q in MERIDIAN_PAIRS:
            assert identify_generators(f.element, q, p).is_zero()
        for p, q in PARALLEL_PAIRS + ((9, 12),):
            assert not identify_generators(f.element, q, p).is_zero()
        scale, factors = solid_torus_factored(zetas)
        assert [sorted(x.generators()) for x in factors[:2]] == [[5, 6], [7, 8]]
        assert all(x.degrees() == {1} for x in factors)
        assert all(len(x.terms) == 6 for x in factors[2:])
        assert eq_up_to_sign(f.element, solid_torus_closed_form(zetas))


# -- 6 ----------------------------------------------------------------------------------

@criterion(6, "boundary-move predictions (1-3, 2-2, 3-1) match direct recomputation on >= 5 cases each, under 30 s")
def test_06_boundary_moves():
    start = time.perf_counter()
    counts = {"b1-3": 0, "b2-2": 0, "b3-1": 0}
    tet = single_tetrahedron()
    grown = []
    for face in tet.boundary_faces:
        new = boundary_13(tet, face)
        assert eq_up_to_sign(predict_boundary_change(generating_function(tet), new).element,
                             generating_function(new).element)
        counts["b1-3"] += 1
        grown.append(new)
    st_ = solid_torus()
    for face in st_.boundary_faces[:2]:
        new = boundary_13(st_, face)
        assert eq_up_to_sign(predict_boundary_change(generating_function(st_), new).element,
                             generating_function(new).element)
        counts["b1-3"] += 1
    for base in grown[:2] + [st_]:
        I0 = generating_function(base)
        for tag in boundary_sites(base)["2-2"][:4]:
            new = boundary_22(base, tag)
            assert eq_up_to_sign(predict_boundary_change(I0, new).element,
                                 generating_function(new).element), tag
            counts["b2-2"] += 1
    for base in grown:
        I0 = generating_function(base)
        for v in boundary_sites(base)["3-1"]:
            new = boundary_31(base, v)
            direct = generating_function(new).element
            for form in range(3):
                assert eq_up_to_sign(predict_boundary_change(I0, new, form).element, direct)
            counts["b3-1"] += 1
    assert min(counts.values()) >= 5, counts
    assert time.perf_counter() - start < 30.0


# -- 7 ----------------------------------------------------------------------------------

def matrices(min_rows=1, max_rows=6, max_cols=3):
    vals = st.fractions(min_value=-5, max_value=5, max_denominator=4)

    @st.composite
    def build(draw):
        n = draw(st.integers(min_rows, max_rows))
        m = draw(st.integers(0, min(max_cols, n)))
        rows = [[draw(vals) for _ in range(m)] for _ in range(n)]
        return rows
    return build()


@criterion(7, "generating-function algebra: concatenation and Berezin form, 200 random cases each")
def test_07_genfun_algebra():
    _concatenation()
    _berezin_form()


@settings(max_examples=200, deadline=None)
@given(matrices(max_rows=6, max_cols=3), st.data())
def _concatenation(rows, data):
    n = len(rows)
    m = len(rows[0]) if rows else 0
    split = data.draw(st.integers(0, m))
    A = [r[:split] for r in rows]
    B = [r[split:] for r in rows]
    C = LabeledMatrix.from_rows(rows) if m else LabeledMatrix(range(n), [])
    fa = genfun_matrix(LabeledMatrix.from_rows(A) if split else LabeledMatrix(range(n), []))
    fb = genfun_matrix(LabeledMatrix.from_rows(B) if m - split else LabeledMatrix(range(n), []))
    fc = genfun_matrix(C)
    assert fc == fa * fb
    assert fc == genfun_product(C)
    if m:
        assert fc.terms == genfun_leibniz(rows)
    else:
        assert fc == GrassmannElement.constant(1)


@settings(max_examples=200, deadline=None)
@given(matrices(min_rows=2, max_rows=6, max_cols=3), st.data())
def _berezin_form(rows, data):
    n = len(rows)
    m = len(rows[0])
    A = LabeledMatrix.from_rows(rows) if m else LabeledMatrix(range(n), [])
    inner = sorted(data.draw(st.sets(st.integers(0, n - 1), max_size=m)))
    ids = {r: r + 1 for r in range(n)}
    via_integral = genfun_inner(A, inner, ids, method="integral")
    via_subsets = genfun_inner(A, inner, ids, method="subsets")
    literal = berezin_multi(genfun_matrix(A, ids), [ids[r] for r in reversed(inner)])
    assert via_integral == via_subsets == literal


# -- 8 ----------------------------------------------------------------------------------

@criterion(8, "state sum = 2 I_M up to sign (no inner vertex, one component); 0 with an inner vertex or two components")
def test_08_state_sum():
    tet = single_tetrahedron()
    cases = [tet, solid_torus(), boundary_13(tet, ("t1", 0)),
             boundary_22(boundary_13(tet, ("t1", 0)), 1)]
    for t in cases:
        assert not t.inner_vertices and len(t.components) == 1
        assert eq_up_to_sign(state_sum(t), 2 * generating_function(t).element)
    with_inner = pachner_14(tet, "t1")
    assert with_inner.inner_vertices
    assert state_sum(with_inner).is_zero()
    big, k = make_inner_tetrahedron(tet)
    shell = remove_tetrahedron(big, k)
    assert len(shell.components) == 2 and not shell.inner_vertices
    assert state_sum(shell).is_zero()


# -- 9 ----------------------------------------------------------------------------------

@criterion(9, "gluing formula for tet+tet and torus+torus, I(S^3 # S^3) = 1, S^3 minus a tetrahedron, under 60 s")
def test_09_gluing_and_sums():
    start = time.perf_counter()
    tet = single_tetrahedron()
    mirror = tet.replace(tets={"t1": (2, 1, 3, 4)}, name="tet'")
    vmap = {1: 1, 2: 2, 3: 3, 4: 4}
    M, _ = glue_with_info(tet, 0, mirror, 0, vmap)
    g = glued_generating_function(generating_function(tet), generating_function(mirror),
                                  tet, 0, mirror, 0, vmap)
    assert eq_up_to_sign(g, generating_function(M).element)
    assert eq_up_to_sign(g, GrassmannElement.constant(1))

    M1, M2, vmap = solid_torus_pair()
    M, _ = glue_with_info(M1, 0, M2, 0, vmap)
    I1, I2 = generating_function(M1), generating_function(M2)
    direct = generating_function(M).element
    for side in (2, 1):
        g = glued_generating_function(I1, I2, M1, 0, M2, 0, vmap, build_triangle_tree(M1, 0), side)
        assert eq_up_to_sign(g, direct)

    s3 = two_tetrahedron_sphere()
    summed, _, _ = connected_sum(s3, s3)
    assert generating_function(summed).normalized().element == GrassmannElement.constant(1)

    ball = remove_tetrahedron(s3, "t1")
    half_tet = tet_function_of(ball, "t2") * Fraction(1, 2)
    assert eq_up_to_sign(generating_function(ball).element, half_tet)
    assert time.perf_counter() - start < 60.0


# -- 10 ---------------------------------------------------------------------------------

@criterion(10, "edge-count lemma on every triangulation constructed in the suite (strict iff boundary)")
def test_10_edge_count_lemma():
    # an explicit sweep here; the conftest hook checks every other test's triangulations
    built = [example(n) for n in EXAMPLES]
    built += fuzzed_triangulations(20, seed=10)
    big, k = make_inner_tetrahedron(single_tetrahedron())
    built.append(remove_tetrahedron(big, k))
    for t in built:
        d = t.validate()
        assert lemma1_holds(d)
        assert (d.m > 0) == (d.N1_inner < d.N0_inner + d.N3 < d.N1)
        assert check_lemma1(t) is None
    assert not LEMMA1["failures"]
