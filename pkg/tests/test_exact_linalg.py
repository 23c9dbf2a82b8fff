import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermionic_tqft.exact_linalg import (BasisLabel, LabeledMatrix, LinalgError, canonical, det,
                                         det_dense, minor, rank, scalar, select_independent_rows)
from oracles import leibniz_det

fracs = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def square(n):
    return st.lists(st.lists(fracs, min_size=n, max_size=n), min_size=n, max_size=n)


def test_scalar_is_canonical():
    x = scalar("-6/4")
    assert (x.numerator, x.denominator) == (-3, 2)
    assert scalar(3) == Fraction(3)
    with pytest.raises(TypeError):
        scalar(0.5)


def test_det_examples():
    assert det(LabeledMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 1
    assert det(LabeledMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert det(LabeledMatrix.from_rows([[1, 2, 3], [4, 5, 6], [1, 2, 3]])) == 0
    assert det_dense([]) == 1


def test_det_rejects_non_square():
    with pytest.raises(LinalgError):
        det(LabeledMatrix.from_rows([[1, 2]]))


@settings(max_examples=150)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_leibniz(rows):
    assert det_dense(rows) == leibniz_det(rows)


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_det_multiplicative(pair):
    a, b = pair
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert det_dense(ab) == det_dense(a) * det_dense(b)


@settings(max_examples=60)
@given(st.integers(2, 4).flatmap(square), st.data())
def test_det_alternating_and_multilinear(rows, data):
    n = len(rows)
    i, j = data.draw(st.sampled_from([(i, j) for i in range(n) for j in range(n) if i != j]))
    swapped = [list(r) for r in rows]
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert det_dense(swapped) == -det_dense(rows)
    c = data.draw(fracs)
    other = data.draw(st.lists(fracs, min_size=n, max_size=n))
    mixed = [list(r) for r in rows]
    mixed[i] = [c * x + y for x, y in zip(rows[i], other)]
    replaced = [list(r) for r in rows]
    replaced[i] = other
    assert det_dense(mixed) == c * det_dense(rows) + det_dense(replaced)


def test_minor_conventions():
    m = LabeledMatrix.from_rows([[1, 2], [3, 4]], ["r0", "r1"], ["c0", "c1"])
    assert minor(m, [], []) == 1
    assert minor(m, ["r0", "r1"], ["c0", "c1"]) == det(m)
    assert minor(m, ["r1"], ["c0"]) == 3
    # order of the labels fixes the sign
    assert minor(m, ["r1", "r0"], ["c0", "c1"]) == 2
    with pytest.raises(LinalgError):
        minor(m, ["r0"], [])
    with pytest.raises(LinalgError):
        minor(m, ["zz"], ["c0"])


def test_select_first_row_zero():
    m = LabeledMatrix.from_rows([[0], [5]], ["r0", "r1"], ["c"])
    assert select_independent_rows(m, ["r0", "r1"]) == ["r1"]


def test_select_identity_keeps_all():
    m = LabeledMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert select_independent_rows(m, [0, 1, 2]) == [0, 1, 2]


def test_select_rank_deficient_raises():
    m = LabeledMatrix.from_rows([[1, 2], [2, 4]])
    with pytest.raises(LinalgError):
        select_independent_rows(m, [0, 1])


def test_select_random_5x3():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(5)]
        m = LabeledMatrix.from_rows(rows)
        if rank(m) < 3:
            continue
        picked = select_independent_rows(m, list(range(5)))
        assert len(picked) == 3 and det_dense([rows[k] for k in picked]) != 0
        good = [C for C in combinations(range(5), 3) if leibniz_det([rows[k] for k in C])]
        assert tuple(picked) in good
        # a greedy scan yields the lexicographically first nonsingular subset
        assert tuple(picked) == good[0]


def test_labeled_matrix_invariants():
    with pytest.raises(LinalgError):
        LabeledMatrix(["a", "a"], ["b"])
    m = LabeledMatrix(["a", "b"], ["x"], {("a", "x"): 2})
    assert m.entry("b", "x") == 0
    assert m.transpose().entry("x", "a") == 2
    assert (m.transpose() @ m).entry("x", "x") == 4


def test_basis_label_order():
    labels = [BasisLabel("lie_dual", ("a",)), BasisLabel("beta", (2,)), BasisLabel("alpha", (2,)),
              BasisLabel("alpha", (1,)), BasisLabel("phi", (0,)), BasisLabel("dy", (0, "t1")),
              BasisLabel("sway", (0, "b")), BasisLabel("sway", (0, "a")), BasisLabel("dz", (3,)),
              BasisLabel("lie", ("c",)), BasisLabel("conj_sway", (0, "a"))]
    kinds = [(x.kind, x.key) for x in canonical(labels)]
    assert kinds == [("lie", ("c",)), ("dz", (3,)), ("sway", (0, "a")), ("sway", (0, "b")),
                     ("dy", (0, "t1")), ("phi", (0,)), ("alpha", (1,)), ("alpha", (2,)),
                     ("beta", (2,)), ("conj_sway", (0, "a")), ("lie_dual", ("a",))]
