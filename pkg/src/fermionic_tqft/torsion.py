"""tau-chains, torsion of the complex and the invariants I_D."""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .chain_complex import (BasedComplex, alpha_label, beta_label, bases, build_complex,
                            conj_sway_labels, dz_label, full_matrices, phi_label, sway_labels)
from .exact_linalg import LinalgError, minor, select_independent_rows
from .triangulation import Triangulation


class TorsionError(ValueError):
    pass


@dataclass(frozen=True)
class TauChain:
    """Selected rows and columns of each of the five maps (each in basis order)."""

    rows: Tuple[tuple, ...]
    cols: Tuple[tuple, ...]

    def shapes(self):
        return [(len(r), len(c)) for r, c in zip(self.rows, self.cols)]


def _in_order(basis, chosen):
    chosen = set(chosen)
    return tuple(x for x in basis if x in chosen)


def _minus(basis, removed):
    removed = set(removed)
    return tuple(x for x in basis if x not in removed)


def closed_face(t: Triangulation):
    """Vertices of the fixed 2-face used in the closed case."""
    vs = t.tets[t.tet_order[0]]
    return sorted(vs[:3])


def closed_edge(t: Triangulation):
    return t.edges[0].endpoints


@dataclass(frozen=True)
class StandardSelection:
    """The D-independent part of the standard chain."""

    rows1: tuple
    rows2: tuple
    cols4: tuple
    cols5: tuple
    minors: Tuple[Fraction, Fraction, Fraction, Fraction]  # f1, f2, f4, f5


def standard_selection(t: Triangulation) -> StandardSelection:
    cache = t.__dict__.get("_standard_selection")
    if cache is not None:
        return cache
    full = full_matrices(t)
    V0, V1, V2, V3, V4, V5 = bases(t, [])
    if t.components:
        kappa = t.components[0].index
        rows1 = _in_order(V1, sway_labels(kappa))
        cols5 = _in_order(V4, conj_sway_labels(kappa))
    else:
        rows1 = _in_order(V1, [dz_label(v) for v in closed_face(t)])
        i, j = closed_edge(t)
        cols5 = _in_order(V4, [alpha_label(i), beta_label(i), alpha_label(j)])
    cols2 = _minus(V1, rows1)
    try:
        rows2 = _in_order(V2, select_independent_rows(full["f2"].restrict(cols=cols2), V2))
    except LinalgError as exc:
        raise TorsionError("no nondegenerate tetrahedron selection: %s" % exc)
    rows4 = _minus(V4, cols5)
    inner_phi = [phi_label(e.index) for e in t.inner_edges]
    f4t = full["f4"].restrict(rows=rows4, cols=inner_phi).transpose()
    try:
        cols4 = _in_order(inner_phi, select_independent_rows(f4t, inner_phi))
    except LinalgError as exc:
        raise TorsionError("no nondegenerate inner edge selection: %s" % exc)
    m1 = minor(full["f1"], rows1, V0)
    m2 = minor(full["f2"], rows2, cols2)
    m4 = minor(full["f4"], rows4, cols4)
    m5 = minor(full["f5"], V5, cols5)
    if not (m1 and m2 and m4 and m5):
        raise TorsionError("degenerate standard minor")
    sel = StandardSelection(rows1, rows2, cols4, cols5, (m1, m2, m4, m5))
    t.__dict__["_standard_selection"] = sel
    return sel


def chain_from_selection(c: BasedComplex, rows1, rows2, cols4, cols5) -> TauChain:
    V0, V1, V2, V3, V4, V5 = c.bases
    rows1, rows2 = _in_order(V1, rows1), _in_order(V2, rows2)
    cols4, cols5 = _in_order(V3, cols4), _in_order(V4, cols5)
    rows = (rows1, rows2, _minus(V3, cols4), _minus(V4, cols5), tuple(V5))
    cols = (tuple(V0), _minus(V1, rows1), _minus(V2, rows2), cols4, cols5)
    chain = TauChain(rows, cols)
    if any(r != k for r, k in chain.shapes()):
        raise TorsionError("tau-chain is not square: %s" % chain.shapes())
    return chain


def standard_tau_chain(c: BasedComplex) -> TauChain:
    sel = standard_selection(c.triangulation)
    return chain_from_selection(c, sel.rows1, sel.rows2, sel.cols4, sel.cols5)


def random_tau_chain(c: BasedComplex, rng: random.Random) -> TauChain:
    """A tau-chain from greedy scans over shuffled candidate orders."""
    V0, V1, V2, V3, V4, V5 = c.bases

    def shuffled(xs):
        xs = list(xs)
        rng.shuffle(xs)
        return xs

    rows1 = select_independent_rows(c.f1, shuffled(V1))
    cols2 = _minus(V1, rows1)
    rows2 = select_independent_rows(c.f2.restrict(cols=cols2), shuffled(V2))
    cols5 = select_independent_rows(c.f5.transpose(), shuffled(V4))
    rows4 = _minus(V4, cols5)
    cols4 = select_independent_rows(c.f4.restrict(rows=rows4).transpose(), shuffled(V3))
    return chain_from_selection(c, rows1, rows2, cols4, cols5)


def chain_minors(c: BasedComplex, chain: TauChain) -> List[Fraction]:
    return [minor(m, r, k) for m, r, k in zip(c.maps, chain.rows, chain.cols)]


def torsion_D(c: BasedComplex, chain: Optional[TauChain] = None) -> Fraction:
    """``minor f1 * minor f3 * minor f5 / (minor f2 * minor f4)``; zero when minor f3 vanishes."""
    chain = chain or standard_tau_chain(c)
    m1, m2, m3, m4, m5 = chain_minors(c, chain)
    if not (m1 and m2 and m4 and m5):
        raise TorsionError("degenerate tau-chain")
    return m1 * m3 * m5 / (m2 * m4)


def inner_zeta_square_product(t: Triangulation) -> Fraction:
    p = Fraction(1)
    for e in t.inner_edges:
        p *= t.zeta_diff(*e.endpoints) ** 2
    return p


def invariant_I_D(t: Triangulation, D: Sequence[int] = ()) -> Fraction:
    """``tau_D / (2 prod' zeta_ij^2)`` over inner edges."""
    c = build_complex(t, D)
    return torsion_D(c) / (2 * inner_zeta_square_product(t))


def all_invariants(t: Triangulation):
    """``{tuple(D): I_D}`` over every admissible D."""
    from .chain_complex import admissible_sets
    return {tuple(D): invariant_I_D(t, D) for D in admissible_sets(t)}
