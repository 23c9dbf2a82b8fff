"""Generating functions of matrices, the tetrahedron function and I_M.

Integration order convention: ``berezin_multi(x, [g1, g2, ...])`` integrates
``g1`` first.  The generating function of a manifold integrates its inner
rows starting from the last one, so that the coefficient of a monomial
``a[D]`` (tags increasing) is exactly I_D.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .chain_complex import bases, full_matrices, phi_label
from .exact_linalg import LabeledMatrix, LinalgError, det_dense, scalar
from .grassmann import (GrassmannElement, eq_up_to_sign, product_integrate, render,
                        sign_normalized, to_json)
from .torsion import inner_zeta_square_product, standard_selection
from .triangulation import Triangulation


def _default_ids(A: LabeledMatrix, gen_ids):
    if gen_ids is None:
        return {r: k + 1 for k, r in enumerate(A.row_labels)}
    return gen_ids


def genfun_matrix(A: LabeledMatrix, gen_ids: Dict[Hashable, int] = None) -> GrassmannElement:
    """Sum over row subsets C of size ``cols`` of ``det A|_C * prod_{k in C} a_k``.

    Generator ids default to 1-based row positions.
    """
    nrows, ncols = A.shape
    if nrows < ncols:
        raise LinalgError("generating function needs rows >= columns (got %dx%d)" % A.shape)
    ids = _default_ids(A, gen_ids)
    dense = A.dense()
    terms = {}
    for C in combinations(range(nrows), ncols):
        d = det_dense([dense[k] for k in C])
        if d:
            mono = tuple(ids[A.row_labels[k]] for k in C)
            terms[mono] = terms.get(mono, 0) + d
    return GrassmannElement(terms)


def column_forms(A: LabeledMatrix, gen_ids: Dict[Hashable, int] = None) -> List[GrassmannElement]:
    """One degree-one element per column: ``sum_r A[r, c] a_r``."""
    ids = _default_ids(A, gen_ids)
    by_col = {c: {} for c in A.col_labels}
    for (r, c), v in A.entries.items():
        by_col[c][ids[r]] = v
    return [GrassmannElement.linear(by_col[c]) for c in A.col_labels]


def genfun_product(A: LabeledMatrix, gen_ids=None) -> GrassmannElement:
    """Same as :func:`genfun_matrix`, as the product of the column forms."""
    if A.shape[0] < A.shape[1]:
        raise LinalgError("generating function needs rows >= columns (got %dx%d)" % A.shape)
    return product_integrate(column_forms(A, gen_ids), [])


def genfun_inner(A: LabeledMatrix, inner: Sequence[Hashable], gen_ids=None,
                 method: str = "integral") -> GrassmannElement:
    """Generating function with inner rows ``inner`` integrated out.

    ``method="integral"`` integrates the product form over the inner
    generators, last row first; ``method="subsets"`` sums primed
    determinants over row subsets containing every inner row, with the inner
    rows moved to the bottom.
    """
    nrows, ncols = A.shape
    if nrows < ncols:
        raise LinalgError("generating function needs rows >= columns (got %dx%d)" % A.shape)
    ids = _default_ids(A, gen_ids)
    inner_set = set(inner)
    unknown = inner_set - set(A.row_labels)
    if unknown:
        raise LinalgError("inner rows %r are not rows of the matrix" % sorted(unknown, key=str))
    inner_rows = [r for r in A.row_labels if r in inner_set]
    if method == "integral":
        gens = [ids[r] for r in reversed(inner_rows)]
        return product_integrate(column_forms(A, ids), gens)
    if method != "subsets":
        raise ValueError("unknown method %r" % (method,))
    outer_rows = [r for r in A.row_labels if r not in inner_set]
    k = ncols - len(inner_rows)
    if k < 0:
        return GrassmannElement()
    dense = {r: row for r, row in zip(A.row_labels, A.dense())}
    bottom = [dense[r] for r in inner_rows]
    terms = {}
    for C in combinations(outer_rows, k):
        d = det_dense([dense[r] for r in C] + bottom)
        if d:
            mono = tuple(ids[r] for r in C)
            terms[mono] = terms.get(mono, 0) + d
    return GrassmannElement(terms)


# -- tetrahedron function --------------------------------------------------------

SLOT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def tetrahedron_function(zetas: Sequence, gens: Dict[Tuple[int, int], int]) -> GrassmannElement:
    """``z12 z34 (a12 + a34) - z13 z24 (a13 + a24) + z14 z23 (a14 + a23)``.

    ``zetas`` are the coordinates of the four vertices in orientation order and
    ``gens`` maps slot pairs ``(p, q)``, ``p < q``, to generator ids.
    """
    z = [scalar(x) for x in zetas]
    if len(set(z)) != 4:
        raise ValueError("tetrahedron function needs four distinct coordinates")

    def d(p, q):
        return z[p] - z[q]

    c01 = d(0, 1) * d(2, 3)
    c02 = -d(0, 2) * d(1, 3)
    c03 = d(0, 3) * d(1, 2)
    coeffs = {}
    for pq, c in (((0, 1), c01), ((2, 3), c01), ((0, 2), c02), ((1, 3), c02),
                  ((0, 3), c03), ((1, 2), c03)):
        g = gens[pq]
        coeffs[g] = coeffs.get(g, 0) + c
    return GrassmannElement.linear(coeffs)


def tet_function_of(t: Triangulation, tet: str) -> GrassmannElement:
    vs = t.tets[tet]
    gens = {pq: t.generator_id(e) for pq, e in t.tet_edges(tet).items()}
    return tetrahedron_function([t.zeta(v) for v in vs], gens)


def pentagon_sides(zetas: Sequence) -> Tuple[GrassmannElement, GrassmannElement]:
    """Both sides of the 2-3 relation for vertices 1..5 with the given coordinates.

    The generator of edge ``ij`` is ``10 * min(i, j) + max(i, j)``.
    """
    z = {k + 1: scalar(v) for k, v in enumerate(zetas)}
    if len(z) != 5 or len(set(z.values())) != 5:
        raise ValueError("pentagon check needs five distinct coordinates")

    def f(*vs):
        gens = {(p, q): 10 * min(vs[p], vs[q]) + max(vs[p], vs[q]) for p, q in SLOT_PAIRS}
        return tetrahedron_function([z[v] for v in vs], gens)

    lhs = f(1, 2, 3, 4) * f(5, 1, 2, 3)
    rhs = product_integrate([f(1, 2, 5, 4), f(2, 3, 5, 4), f(3, 1, 5, 4)], [45])
    rhs = rhs * (1 / (z[4] - z[5]) ** 2)
    return lhs, rhs


def check_pentagon(zetas: Sequence) -> bool:
    lhs, rhs = pentagon_sides(zetas)
    return lhs == rhs


# -- manifold generating function ---------------------------------------------------

@dataclass
class InvariantFunction:
    """Grassmann polynomial over boundary-edge generators (generator id = edge tag)."""

    element: GrassmannElement
    degree: int
    boundary_tags: Tuple[int, ...]
    name: Optional[str] = None
    zetas: Dict[int, Fraction] = field(default_factory=dict)

    def coefficient(self, D: Sequence[int]) -> Fraction:
        return self.element.coefficient(sorted(D))

    def eq_up_to_sign(self, other) -> bool:
        other = other.element if isinstance(other, InvariantFunction) else other
        return eq_up_to_sign(self.element, other)

    def render(self) -> str:
        return render(self.element)

    def to_json(self):
        return to_json(self.element)

    def is_homogeneous(self) -> bool:
        return self.element.degrees() <= {self.degree}

    def normalized(self) -> "InvariantFunction":
        """Same function with the overall sign fixed: leading coefficient positive.

        The raw sign depends on the triangulation and is not an invariant.
        """
        return InvariantFunction(sign_normalized(self.element), self.degree,
                                 self.boundary_tags, self.name, dict(self.zetas))


def reduced_f3(t: Triangulation):
    """The matrix f3 with rows of every edge except the selected inner ones and
    columns of the tetrahedra not used by the standard f2 minor, together with
    the scalar prefactor ``minor f1 minor f5 / (minor f2 minor f4 2 prod' zeta^2)``.
    """
    sel = standard_selection(t)
    full = full_matrices(t)["f3"]
    V2 = bases(t, [])[2]
    used4 = set(sel.cols4)
    rows = [r for r in full.row_labels if r not in used4]
    used2 = set(sel.rows2)
    cols = [c for c in V2 if c not in used2]
    m1, m2, m4, m5 = sel.minors
    scale = m1 * m5 / (m2 * m4 * 2 * inner_zeta_square_product(t))
    return full.restrict(rows=rows, cols=cols), scale


def _edge_ids(t: Triangulation):
    return {phi_label(e.index): t.generator_id(e) for e in t.edges}


def generating_function(t: Triangulation, method: str = "integral") -> InvariantFunction:
    """I_M: the reduced f3 generating function with inner rows integrated out.

    The scalar prefactor is applied once to the whole element.
    """
    A, scale = reduced_f3(t)
    inner = {phi_label(e.index) for e in t.inner_edges}
    inner_rows = [r for r in A.row_labels if r in inner]
    x = genfun_inner(A, inner_rows, _edge_ids(t), method=method) * scale
    return InvariantFunction(x, t.marked_count, tuple(t.boundary_tags), t.name, dict(t.vertices))


def state_sum(t: Triangulation) -> GrassmannElement:
    """``(1/prod' zeta^2) * integral of prod_tets f_tet`` over the inner edges.

    Tetrahedra in canonical order; differentials in canonical inner-edge
    order, the first one integrated first.
    """
    factors = [tet_function_of(t, x) for x in t.tet_order]
    gens = [t.generator_id(e) for e in t.inner_edges]
    return product_integrate(factors, gens) * (1 / inner_zeta_square_product(t))
