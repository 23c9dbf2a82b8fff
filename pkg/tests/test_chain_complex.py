import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermionic_tqft.chain_complex import (ComplexError, admissible_sets, build_complex, build_f3,
                                          dy_label, full_matrices, phi_label, verify_all_marked_sets,
                                          verify_complex)
from fermionic_tqft.exact_linalg import LabeledMatrix
from fermionic_tqft.library import (refined_sphere, single_tetrahedron, solid_torus,
                                    two_tetrahedron_sphere)
from fermionic_tqft.surgery import random_interior_move
from oracles import tetfun_literal

zeta_sets = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6),
                     min_size=4, max_size=4, unique=True)


def test_single_tet_dimensions():
    c = build_complex(single_tetrahedron(), [0])
    assert c.dimensions == [3, 3, 1, 1, 3, 3]
    assert c.euler_characteristic == 0
    assert verify_complex(c)


def test_closed_sphere_dimensions():
    c = build_complex(two_tetrahedron_sphere(), [])
    # 4 inner vertices, 2 tets, 6 inner edges
    assert c.dimensions == [3, 4, 2, 6, 8, 3]
    assert verify_complex(c)


def test_solid_torus_all_marked_sets():
    t = solid_torus()
    sets = list(admissible_sets(t))
    assert len(sets) == 495  # 12 choose 4
    assert verify_all_marked_sets(t)
    for D in random.Random(3).sample(sets, 20):
        assert verify_complex(build_complex(t, D))


@settings(max_examples=40)
@given(zeta_sets)
def test_single_tet_f3_column_is_tet_function(zs):
    """The f3 column of one tetrahedron holds the coefficients of its six-term function."""
    zetas = dict(zip((1, 2, 3, 4), zs))
    t = single_tetrahedron(zetas)
    f3 = full_matrices(t)["f3"]
    names = {frozenset(e.endpoints): e.tag for e in t.edges}
    want = tetfun_literal({v: zetas[v] for v in t.tets["t1"]}, names)
    got = {(e.tag,): f3.entry(phi_label(e.index), dy_label(t, "t1")) for e in t.edges}
    assert {k: v for k, v in got.items() if v} == want


@settings(max_examples=25)
@given(zeta_sets, st.integers(0, 10 ** 6))
def test_complex_property_survives_random_moves(zs, seed):
    rng = random.Random(seed)
    t = two_tetrahedron_sphere(dict(zip((1, 2, 3, 4), zs)))
    for _ in range(3):
        t = random_interior_move(t, rng, max_tets=10)[0]
    assert verify_all_marked_sets(t)


def test_perturbed_f3_breaks_complex():
    c = build_complex(refined_sphere(), [])
    assert verify_complex(c)
    f3 = c.f3
    key = next(iter(sorted(f3.entries, key=str)))
    bumped = dict(f3.entries)
    bumped[key] += Fraction(1, 7)
    broken = dataclasses.replace(c, f3=LabeledMatrix(f3.row_labels, f3.col_labels, bumped))
    check = verify_complex(broken)
    assert not check and check.failure in ("f3 f2 != 0", "f4 f3 != 0")


def test_marked_set_errors():
    t = solid_torus()
    with pytest.raises(ComplexError):
        build_complex(t, [1, 2, 3])
    with pytest.raises(ComplexError):
        build_complex(t, [1, 1, 2, 3])
    with pytest.raises(ComplexError):
        build_f3(t, [1, 2, 3, 99])


def test_f3_restriction_keeps_inner_and_marked_rows():
    t = solid_torus()
    f3 = build_f3(t, [1, 5, 9, 12])
    inner = {phi_label(e.index) for e in t.inner_edges}
    marked = {phi_label(t.edge_by_tag(g).index) for g in (1, 5, 9, 12)}
    assert set(f3.row_labels) == inner | marked
    assert f3.shape == (6, 6)
