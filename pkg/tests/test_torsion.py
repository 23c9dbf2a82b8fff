import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from fermionic_tqft.chain_complex import admissible_sets, build_complex
from fermionic_tqft.library import (refined_sphere, single_tetrahedron, solid_torus,
                                    two_tetrahedron_sphere)
from fermionic_tqft.surgery import pachner_14
from fermionic_tqft.torsion import (all_invariants, chain_minors, inner_zeta_square_product,
                                    invariant_I_D, random_tau_chain, standard_tau_chain, torsion_D)
from oracles import tetfun_literal

zeta_sets = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6),
                     min_size=4, max_size=4, unique=True)


def test_sphere_torsion_value():
    t = two_tetrahedron_sphere()
    # derived: 2 * prod over the six edges of (zeta_i - zeta_j)^2 with zetas 0, 1, 3, 7
    expected = 2
    for a, b in ((0, 1), (0, 3), (0, 7), (1, 3), (1, 7), (3, 7)):
        expected *= (a - b) ** 2
    assert expected == 2032128
    assert torsion_D(build_complex(t, [])) == expected
    assert invariant_I_D(t) == 1


@settings(max_examples=25)
@given(zeta_sets)
def test_sphere_invariant_is_one(zs):
    assert abs(invariant_I_D(two_tetrahedron_sphere(dict(zip((1, 2, 3, 4), zs))))) == 1


def test_refined_sphere_invariant_up_to_sign():
    assert abs(invariant_I_D(refined_sphere())) == 1


@settings(max_examples=30)
@given(zeta_sets)
def test_single_tet_invariants_are_half_tet_function(zs):
    zetas = dict(zip((1, 2, 3, 4), zs))
    t = single_tetrahedron(zetas)
    names = {frozenset(e.endpoints): e.tag for e in t.edges}
    literal = tetfun_literal({v: zetas[v] for v in t.tets["t1"]}, names)
    got = all_invariants(t)
    assert len(got) == 6
    for (tag,), value in got.items():
        assert value == literal.get((tag,), 0) / 2


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_torsion_independent_of_tau_chain_up_to_sign(seed):
    rng = random.Random(seed)
    for t, D in ((two_tetrahedron_sphere(), []), (solid_torus(), [1, 2, 5, 7]),
                 (single_tetrahedron(), [3])):
        c = build_complex(t, D)
        ref = torsion_D(c)
        assert ref
        for _ in range(3):
            # only the magnitude is chain independent; the sign follows the selection
            assert torsion_D(c, random_tau_chain(c, rng)) in (ref, -ref)


def test_standard_chain_shapes_are_square():
    c = build_complex(solid_torus(), [1, 2, 5, 7])
    chain = standard_tau_chain(c)
    assert all(r == k for r, k in chain.shapes())
    m1, m2, m3, m4, m5 = chain_minors(c, chain)
    assert m1 and m2 and m4 and m5


def test_pachner_14_preserves_invariant_up_to_sign():
    t = solid_torus()
    before = all_invariants(t)
    after = all_invariants(pachner_14(t, t.tet_order[2], Fraction(29, 3)))
    assert before.keys() == after.keys()
    signs = {1 if before[D] == after[D] else -1 for D in before if before[D]}
    assert all(abs(before[D]) == abs(after[D]) for D in before)
    assert len(signs) == 1


def test_inner_zeta_square_product():
    t = two_tetrahedron_sphere()
    assert inner_zeta_square_product(t) == 2032128 // 2
    assert inner_zeta_square_product(single_tetrahedron()) == 1


def test_admissible_sets_are_lexicographic():
    sets = list(admissible_sets(solid_torus()))
    assert sets[0] == [1, 2, 3, 4] and sets[-1] == [9, 10, 11, 12]
    assert sets == sorted(sets)
