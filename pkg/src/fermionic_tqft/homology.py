"""Rational cellular homology and collapsibility of a triangulation.

Cells are vertex labels, edge classes, face classes (a boundary face or a
glued pair) and tetrahedra.  Used to certify example manifolds, e.g. that a
boundary circle bounds in M or that M collapses onto a graph.
"""

from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .exact_linalg import rank_dense
from .triangulation import Triangulation, face_slots, perm_sign


def _face_classes(t: Triangulation):
    """Representative face key and ordered label triple for every face class."""
    rep = {}
    for k in t.tet_order:
        for p in range(4):
            f = (k, p)
            g = t.partner.get(f, f)
            rep[f] = min(f, g, key=t.face_sort_key)
    classes = sorted(set(rep.values()), key=t.face_sort_key)
    return rep, classes


def _relative_sign(ordered: Sequence[int], reference: Sequence[int]) -> int:
    return perm_sign([reference.index(v) for v in ordered])


def cellular_boundaries(t: Triangulation):
    """Cell lists and the boundary maps as sparse dicts ``{(cell, face): coeff}``."""
    t.validate()
    verts = sorted(t.vertices)
    edges = [e.index for e in t.edges]
    rep, faces = _face_classes(t)
    tets = list(t.tet_order)

    d1 = {}
    for e in t.edges:
        i, j = e.endpoints
        d1[(e.index, j)] = d1.get((e.index, j), 0) + 1
        d1[(e.index, i)] = d1.get((e.index, i), 0) - 1

    d2 = {}
    for f in faces:
        slots = face_slots(f[1])
        for n in range(3):
            a, b = [s for m, s in enumerate(slots) if m != n]
            e = t.edge_of(f[0], a, b)
            x, y = t.tets[f[0]][a], t.tets[f[0]][b]
            sign = (-1) ** n * (1 if (x, y) == tuple(e.endpoints) else -1)
            d2[(f, e.index)] = d2.get((f, e.index), 0) + sign

    d3 = {}
    for k in tets:
        vs = t.tets[k]
        for p in range(4):
            f = rep[(k, p)]
            mine = [vs[s] for s in face_slots(p)]
            sign = (-1) ** p * _relative_sign(mine, t.face_labels(f))
            d3[(k, f)] = d3.get((k, f), 0) + sign
    return (verts, edges, faces, tets), (d1, d2, d3)


def _dense(d, rows, cols):
    # columns are the cells, rows their faces
    return [[d.get((c, r), 0) for c in cols] for r in rows]


def betti_numbers(t: Triangulation) -> Tuple[int, int, int, int]:
    (V, E, F, T), (d1, d2, d3) = cellular_boundaries(t)
    r1 = rank_dense(_dense(d1, V, E)) if E else 0
    r2 = rank_dense(_dense(d2, E, F)) if F else 0
    r3 = rank_dense(_dense(d3, F, T)) if T else 0
    return (len(V) - r1, len(E) - r1 - r2, len(F) - r2 - r3, len(T) - r3)


def edge_cycle(t: Triangulation, tags: Sequence[int]) -> Dict[int, int]:
    """The 1-chain of a closed boundary path given by edge tags, oriented consistently.

    The tags must form a single cycle; a two-edge circle ``p, q`` gives ``p - q``
    up to orientation.
    """
    edges = [t.edge_by_tag(g) for g in tags]
    chain = {}
    first = edges[0]
    at = first.endpoints[1]
    chain[first.index] = 1
    rest = list(edges[1:])
    while rest:
        for e in rest:
            if at in e.endpoints:
                i, j = e.endpoints
                chain[e.index] = chain.get(e.index, 0) + (1 if i == at else -1)
                at = j if i == at else i
                rest.remove(e)
                break
        else:
            raise ValueError("edges %r do not form a path" % (list(tags),))
    if at != first.endpoints[0]:
        raise ValueError("edges %r do not close up" % (list(tags),))
    return chain


def is_null_homologous(t: Triangulation, chain: Dict[int, int]) -> bool:
    """Whether an edge 1-cycle bounds in M, over the rationals."""
    (V, E, F, T), (d1, d2, d3) = cellular_boundaries(t)
    if F:
        m = _dense(d2, E, F)
    else:
        m = [[] for _ in E]
    aug = [row + [chain.get(e, 0)] for row, e in zip(m, E)]
    base = rank_dense(m) if F else 0
    return rank_dense(aug) == base


def collapse(t: Triangulation) -> Dict[int, int]:
    """Greedy elementary collapses; returns the number of surviving cells per dimension.

    A cell is free when it lies in exactly one surviving cell of the next
    dimension and appears there exactly once.
    """
    (V, E, F, T), (d1, d2, d3) = cellular_boundaries(t)
    # unsigned incidence counts: (cell, face) -> multiplicity
    inc = {}
    rep, _ = _face_classes(t)
    for k in T:
        for p in range(4):
            key = (k, rep[(k, p)])
            inc[key] = inc.get(key, 0) + 1
    for f in F:
        for a, b in combinations(face_slots(f[1]), 2):
            key = (f, t.edge_of(f[0], a, b).index)
            inc[key] = inc.get(key, 0) + 1
    for e in t.edges:
        for v in e.endpoints:
            inc[(e.index, v)] = inc.get((e.index, v), 0) + 1
    alive = {3: set(T), 2: set(F), 1: set(E), 0: set(V)}
    cofaces: Dict[tuple, List[tuple]] = {}
    for (c, f), m in inc.items():
        dc = 3 if c in alive[3] else 2 if c in alive[2] else 1
        cofaces.setdefault((dc - 1, f), []).append((c, m))

    changed = True
    while changed:
        changed = False
        for d in (2, 1, 0):
            for f in sorted(alive[d], key=str):
                live = [(c, m) for c, m in cofaces.get((d, f), []) if c in alive[d + 1]]
                if len(live) == 1 and live[0][1] == 1:
                    alive[d].discard(f)
                    alive[d + 1].discard(live[0][0])
                    changed = True
    return {d: len(c) for d, c in alive.items()}


def collapses_to_graph(t: Triangulation) -> bool:
    left = collapse(t)
    return left[3] == 0 and left[2] == 0
