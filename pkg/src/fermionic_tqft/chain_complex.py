"""The five-term based chain complex of a triangulated manifold.

Matrices act on column vectors, so ``f2 @ f1`` is the composite
``C^3 -> C^{N0'+3m} -> C^{N3}``.  Row labels index the target space and
column labels the source space.  Full versions of ``f3`` and ``f4`` carry a
row/column for every edge; the complex for a marked set ``D`` restricts them
to inner edges plus ``D``.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Optional, Sequence, Tuple

from .exact_linalg import BasisLabel, LabeledMatrix, canonical
from .triangulation import Triangulation

ABC = ("a", "b", "c")


def lie_labels():
    return [BasisLabel("lie", (x,)) for x in ABC]


def lie_dual_labels():
    return [BasisLabel("lie_dual", (x,)) for x in ABC]


def sway_labels(kappa: int):
    return [BasisLabel("sway", (kappa, x)) for x in ABC]


def conj_sway_labels(kappa: int):
    return [BasisLabel("conj_sway", (kappa, x)) for x in ABC]


def dz_label(v: int):
    return BasisLabel("dz", (v,))


def dy_label(t: Triangulation, tet: str):
    return BasisLabel("dy", (t.tet_order.index(tet), tet))


def phi_label(edge_index: int):
    return BasisLabel("phi", (edge_index,))


def alpha_label(v: int):
    return BasisLabel("alpha", (v,))


def beta_label(v: int):
    return BasisLabel("beta", (v,))


def vertex_row(z: Fraction):
    """The covector ``(2z, 1, -z^2)`` of the first map."""
    return (2 * z, Fraction(1), -z * z)


def vertex_block(z: Fraction):
    """The 3x2 block sending ``(dalpha, dbeta)`` to the three conjugate coordinates."""
    return ((Fraction(-1), 2 * z), (Fraction(0), Fraction(1)), (z, -z * z))


def vertex_weight(t: Triangulation, vs: Sequence[int], v: int) -> Fraction:
    """``-1 / prod_{w != v} (zeta_v - zeta_w)`` over the other vertices of a tetrahedron."""
    p = Fraction(1)
    for w in vs:
        if w != v:
            p *= t.zeta_diff(v, w)
    return -1 / p


class ComplexError(ValueError):
    pass


# -- bases ---------------------------------------------------------------------

def bases(t: Triangulation, D: Sequence[int] = None):
    """The six ordered label lists of the complex (phi space restricted to inner + D)."""
    V1 = [dz_label(v) for v in t.inner_vertices]
    for c in t.components:
        V1 += sway_labels(c.index)
    V2 = [dy_label(t, x) for x in t.tet_order]
    V3 = phi_rows(t, D)
    V4 = []
    for v in t.inner_vertices:
        V4 += [alpha_label(v), beta_label(v)]
    for c in t.components:
        V4 += conj_sway_labels(c.index)
    return [lie_labels(), canonical(V1), V2, V3, canonical(V4), lie_dual_labels()]


def phi_rows(t: Triangulation, D: Optional[Sequence[int]]):
    """Labels of inner edges and marked edges ``D`` (given by tag); ``None`` means all edges."""
    if D is None:
        return [phi_label(e.index) for e in t.edges]
    tags = set(D)
    if len(tags) != len(D):
        raise ComplexError("marked edge listed twice")
    known = set(t.boundary_tags)
    bad = tags - known
    if bad:
        raise ComplexError("marked edges %s are not boundary edges" % sorted(bad))
    return [phi_label(e.index) for e in t.edges if e.is_inner or e.tag in tags]


def admissible_size(t: Triangulation) -> int:
    return t.marked_count


def admissible_sets(t: Triangulation):
    """All admissible D in lexicographic order of the boundary-edge order."""
    k = admissible_size(t)
    if k < 0:
        return
    yield from (list(c) for c in combinations(t.boundary_tags, k))


def check_admissible(t: Triangulation, D: Sequence[int]):
    k = admissible_size(t)
    if len(D) != k:
        raise ComplexError("marked set has %d edges, expected %d" % (len(D), k))
    phi_rows(t, D)


# -- the maps --------------------------------------------------------------------

def build_f1(t: Triangulation) -> LabeledMatrix:
    V0, V1 = lie_labels(), bases(t)[1]
    entries = {}
    for v in t.inner_vertices:
        for lab, x in zip(V0, vertex_row(t.zeta(v))):
            entries[(dz_label(v), lab)] = x
    for c in t.components:
        for lab, s in zip(V0, sway_labels(c.index)):
            entries[(s, lab)] = Fraction(1)
    return LabeledMatrix(V1, V0, entries)


def build_f2(t: Triangulation) -> LabeledMatrix:
    V1, V2 = bases(t)[1], bases(t)[2]
    inner = set(t.inner_vertices)
    entries = {}
    for tet in t.tet_order:
        vs = t.tets[tet]
        row = dy_label(t, tet)
        for v in vs:
            w = vertex_weight(t, vs, v)
            if v in inner:
                key = (row, dz_label(v))
                entries[key] = entries.get(key, 0) + w
            else:
                kappa = t.component_of(v)
                for s, x in zip(sway_labels(kappa), vertex_row(t.zeta(v))):
                    key = (row, s)
                    entries[key] = entries.get(key, 0) + w * x
    return LabeledMatrix(V2, V1, entries)


def f3_entry(t: Triangulation, ordered: Tuple[int, int, int, int]) -> Fraction:
    i, j, k, l = ordered
    return t.zeta_diff(i, j) * t.zeta_diff(k, l)


def build_f3_full(t: Triangulation) -> LabeledMatrix:
    """Rows for every edge; each tetrahedron of the star contributes ``zeta_ij zeta_kl``."""
    V2 = bases(t)[2]
    entries = {}
    for e in t.edges:
        for tet, ordered in t.edge_star(e):
            entries[(phi_label(e.index), dy_label(t, tet))] = f3_entry(t, ordered)
    return LabeledMatrix(phi_rows(t, None), V2, entries)


def build_f3(t: Triangulation, D: Sequence[int]) -> LabeledMatrix:
    check_admissible(t, D)
    full = full_matrices(t)["f3"]
    return full.restrict(rows=phi_rows(t, D))


def _vertex_ab(t: Triangulation, v: int, edge_filter) -> Dict[BasisLabel, Tuple[Fraction, Fraction]]:
    """Coefficients of (dalpha_v, dbeta_v) on each phi column over the accepted edges at v."""
    out = {}
    for e in t.edges:
        if v not in e.endpoints or not edge_filter(e):
            continue
        other = e.endpoints[1] if e.endpoints[0] == v else e.endpoints[0]
        out[phi_label(e.index)] = (Fraction(1), 1 / t.zeta_diff(v, other))
    return out


def build_f4_full(t: Triangulation) -> LabeledMatrix:
    """Columns for every edge; boundary-edge columns are zero by construction."""
    V4 = bases(t)[4]
    entries = {}
    for v in t.inner_vertices:
        for col, (a, b) in _vertex_ab(t, v, lambda e: True).items():
            entries[(alpha_label(v), col)] = a
            entries[(beta_label(v), col)] = b
    for c in t.components:
        rows = conj_sway_labels(c.index)
        for v in c.vertices:
            block = vertex_block(t.zeta(v))
            for col, (a, b) in _vertex_ab(t, v, lambda e: e.is_inner).items():
                for r, (ba, bb) in zip(rows, block):
                    key = (r, col)
                    entries[key] = entries.get(key, 0) + ba * a + bb * b
    return LabeledMatrix(V4, phi_rows(t, None), entries)


def build_f4(t: Triangulation, D: Sequence[int]) -> LabeledMatrix:
    check_admissible(t, D)
    return full_matrices(t)["f4"].restrict(cols=phi_rows(t, D))


def build_f5(t: Triangulation) -> LabeledMatrix:
    V4, V5 = bases(t)[4], lie_dual_labels()
    entries = {}
    for v in t.inner_vertices:
        for r, (ba, bb) in zip(V5, vertex_block(t.zeta(v))):
            entries[(r, alpha_label(v))] = ba
            entries[(r, beta_label(v))] = bb
    for c in t.components:
        for r, s in zip(V5, conj_sway_labels(c.index)):
            entries[(r, s)] = Fraction(1)
    return LabeledMatrix(V5, V4, entries)


def full_matrices(t: Triangulation) -> Dict[str, LabeledMatrix]:
    """D-independent matrices, cached on the triangulation."""
    cache = t.__dict__.get("_full_matrices")
    if cache is None:
        t.validate()
        cache = {"f1": build_f1(t), "f2": build_f2(t), "f3": build_f3_full(t),
                 "f4": build_f4_full(t), "f5": build_f5(t)}
        t.__dict__["_full_matrices"] = cache
    return cache


@dataclass(frozen=True)
class BasedComplex:
    triangulation: Triangulation
    D: Tuple[int, ...]
    f1: LabeledMatrix
    f2: LabeledMatrix
    f3: LabeledMatrix
    f4: LabeledMatrix
    f5: LabeledMatrix

    @property
    def maps(self):
        return [self.f1, self.f2, self.f3, self.f4, self.f5]

    @property
    def bases(self):
        return [self.f1.col_labels, self.f1.row_labels, self.f2.row_labels,
                self.f3.row_labels, self.f4.row_labels, self.f5.row_labels]

    @property
    def dimensions(self):
        return [len(b) for b in self.bases]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dimensions))


def build_complex(t: Triangulation, D: Sequence[int] = ()) -> BasedComplex:
    D = tuple(sorted(D))
    check_admissible(t, D)
    full = full_matrices(t)
    rows = phi_rows(t, D)
    c = BasedComplex(t, D, full["f1"], full["f2"], full["f3"].restrict(rows=rows),
                     full["f4"].restrict(cols=rows), full["f5"])
    if c.euler_characteristic != 0:
        raise ComplexError("dimensions %s do not have zero Euler characteristic" % c.dimensions)
    return c


@dataclass
class ComplexCheck:
    ok: bool
    failure: Optional[str] = None
    product: Optional[LabeledMatrix] = None

    def __bool__(self):
        return self.ok


def verify_complex(c: BasedComplex) -> ComplexCheck:
    """Check that all four consecutive products vanish exactly."""
    maps = c.maps
    for k in range(4):
        prod = maps[k + 1] @ maps[k]
        if not prod.is_zero():
            return ComplexCheck(False, "f%d f%d != 0" % (k + 2, k + 1), prod)
    return ComplexCheck(True)


def verify_all_marked_sets(t: Triangulation) -> ComplexCheck:
    """Complex property for every admissible D at once.

    ``f2 f1`` and ``f5 f4`` do not involve D, ``f4 f3`` only involves inner
    phi rows (marked columns of ``f4`` are zero) and ``f3 f2`` is checked row
    by row on all edges, which covers every D.
    """
    full = full_matrices(t)
    inner_rows = phi_rows(t, [])
    f4_inner = full["f4"].restrict(cols=inner_rows)
    boundary_cols = [phi_label(e.index) for e in t.boundary_edges]
    checks = [
        ("f2 f1", full["f2"] @ full["f1"]),
        ("f3 f2", full["f3"] @ full["f2"]),
        ("f4 f3", f4_inner @ full["f3"].restrict(rows=inner_rows)),
        ("f5 f4", full["f5"] @ f4_inner),
        ("marked columns of f4", full["f4"].restrict(cols=boundary_cols)),
    ]
    for name, m in checks:
        if not m.is_zero():
            return ComplexCheck(False, name + " != 0", m)
    return ComplexCheck(True)
