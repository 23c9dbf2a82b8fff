"""Moves, gluings and connected sums of triangulated manifolds.

Interior Pachner moves replace a small cluster of tetrahedra by another one
with the same outer faces; boundary tags are carried over so generating
functions before and after a move can be compared monomial by monomial.
Boundary moves glue one new tetrahedron onto the boundary and come with a
predicted transformation of the generating function.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .genfun import InvariantFunction, generating_function, tetrahedron_function
from .grassmann import (GrassmannElement, berezin, mul, product_integrate, relative_sign,
                        rename_generators)
from .torsion import invariant_I_D
from .triangulation import (Triangulation, TriangulationError, face_slots,
                            natural_key, oriented_face_sign, perm_sign)


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    site: object
    removed: Tuple[str, ...] = ()
    created: Tuple[str, ...] = ()
    new_vertex: Optional[int] = None
    details: Tuple = ()


# -- helpers -----------------------------------------------------------------------

def fresh_tet_ids(t: Triangulation, count: int, prefix: str = "t") -> List[str]:
    out, k = [], 1
    while len(out) < count:
        name = "%s%d" % (prefix, k)
        if name not in t.tets:
            out.append(name)
        k += 1
    return out


def fresh_zeta(used) -> Fraction:
    """First of ``n + 1/7`` (n = 0, 1, ...) not among ``used``."""
    used = set(used)
    n = 0
    while Fraction(7 * n + 1, 7) in used:
        n += 1
    return Fraction(7 * n + 1, 7)


def fresh_vertex(t: Triangulation, zeta=None) -> Tuple[int, Fraction]:
    label = max(t.vertices) + 1
    z = fresh_zeta(t.vertices.values()) if zeta is None else Fraction(zeta)
    if z in t.vertices.values():
        raise MoveError("coordinate %s is already used" % z)
    return label, z


def _orient_like(labels: Sequence[int], face_labels: Sequence[int], sign: int) -> Tuple[int, ...]:
    """Order ``labels`` so the face on ``face_labels`` has induced orientation ``sign``."""
    vs = list(labels)
    p = [k for k, v in enumerate(vs) if v not in face_labels]
    assert len(p) == 1
    if oriented_face_sign(vs, p[0]) != sign:
        vs[0], vs[1] = vs[1], vs[0]
    return tuple(vs)


def _finish(t_new: Triangulation, t_old: Triangulation, record: MoveRecord) -> Triangulation:
    try:
        t_new.validate()
    except TriangulationError as exc:
        raise MoveError("%s produced an invalid triangulation: %s" % (record.kind, exc))
    t_new.history = t_old.history + (record,)
    return t_new


def replace_region(t: Triangulation, removed: Sequence[str], new_label_sets: Sequence[Sequence[int]],
                   kind: str, site, new_vertices: Dict[int, Fraction] = None) -> Triangulation:
    """Replace tetrahedra ``removed`` by tetrahedra on ``new_label_sets``.

    The outer faces of the removed cluster are matched with faces of the new
    tetrahedra by their vertex sets, which must be unambiguous; the remaining
    new faces are glued pairwise.  Orientations of the new tetrahedra follow
    the outer faces they inherit.  Tags of boundary edges are carried over.
    """
    removed = list(dict.fromkeys(removed))
    region = set(removed)
    outer = {}
    for T in removed:
        for p in range(4):
            f = (T, p)
            g = t.partner.get(f)
            if g is not None and g[0] in region:
                continue
            key = frozenset(t.face_labels(f))
            if key in outer:
                raise MoveError("%s: two outer faces of the region carry vertices %s" % (kind, sorted(key)))
            outer[key] = (f, g)
    ids = fresh_tet_ids(t, len(new_label_sets))
    new_tets = {}
    for name, labels in zip(ids, new_label_sets):
        labels = tuple(labels)
        if len(set(labels)) != 4:
            raise MoveError("%s would create a tetrahedron with repeated vertices %r" % (kind, labels))
        for p in range(4):
            key = frozenset(labels[s] for s in face_slots(p))
            if key in outer:
                f, _ = outer[key]
                sign = oriented_face_sign(t.tets[f[0]], f[1])
                new_tets[name] = _orient_like(labels, key, sign)
                break
        else:
            raise MoveError("%s: new tetrahedron %r has no outer face" % (kind, labels))
    gluings = [(fa, fb) for fa, fb in t.gluing_pairs() if fa[0] not in region and fb[0] not in region]
    used_outer = set()
    internal = {}
    new_face_of_outer = {}
    for name in ids:
        vs = new_tets[name]
        for p in range(4):
            key = frozenset(vs[s] for s in face_slots(p))
            if key in outer:
                if key in used_outer:
                    raise MoveError("%s: outer face %s claimed twice" % (kind, sorted(key)))
                used_outer.add(key)
                new_face_of_outer[outer[key][0]] = (name, p)
                g = outer[key][1]
                if g is not None:
                    gluings.append(((name, p), g))
            else:
                internal.setdefault(key, []).append((name, p))
    if used_outer != set(outer):
        raise MoveError("%s: some outer faces are not covered by the new tetrahedra" % kind)
    for key, faces in internal.items():
        if len(faces) != 2:
            raise MoveError("%s: inner face %s occurs %d times" % (kind, sorted(key), len(faces)))
        gluings.append(tuple(faces))

    tags = {}
    for e in t.boundary_edges:
        keep = [m for m in e.members if m[0] not in region]
        if keep:
            tags[keep[0]] = e.tag
            continue
        u, v = e.endpoints
        found = None
        for m in e.members:
            for p in range(4):
                if p in (m[1], m[2]) or (m[0], p) not in new_face_of_outer:
                    continue
                name, _ = new_face_of_outer[(m[0], p)]
                a, b = sorted((new_tets[name].index(u), new_tets[name].index(v)))
                found = (name, a, b)
                break
            if found:
                break
        if found is None:
            raise MoveError("%s: lost track of boundary edge %d" % (kind, e.tag))
        tags[found] = e.tag

    tets = {k: vs for k, vs in t.tets.items() if k not in region}
    tets.update(new_tets)
    vertices = dict(t.vertices)
    vertices.update(new_vertices or {})
    used = {v for vs in tets.values() for v in vs}
    vertices = {v: z for v, z in vertices.items() if v in used}
    t_new = Triangulation(vertices, tets, gluings, tags=tags, name=t.name)
    record = MoveRecord(kind, site, tuple(removed), tuple(ids),
                        next(iter(new_vertices)) if new_vertices else None)
    return _finish(t_new, t, record)


# -- interior Pachner moves -------------------------------------------------------------

def pachner_23(t: Triangulation, face) -> Triangulation:
    """Replace the two tetrahedra sharing ``face = (tet, slot)`` by three around a new edge."""
    face = (str(face[0]), int(face[1]))
    other = t.partner.get(face)
    if other is None:
        raise MoveError("2-3 move needs an interior face, %r is on the boundary" % (face,))
    if other[0] == face[0]:
        raise MoveError("2-3 move needs two different tetrahedra")
    a = t.tets[face[0]][face[1]]
    b = t.tets[other[0]][other[1]]
    if a == b:
        raise MoveError("2-3 move needs distinct apex vertices (both are %d)" % a)
    x, y, z = t.face_labels(face)
    new = [(a, b, x, y), (a, b, y, z), (a, b, z, x)]
    return replace_region(t, [face[0], other[0]], new, "2-3", face)


def pachner_32(t: Triangulation, edge) -> Triangulation:
    """Replace the three tetrahedra around an inner edge of degree 3 by two."""
    e = t.edges[edge] if isinstance(edge, int) else edge
    if not e.is_inner:
        raise MoveError("3-2 move needs an inner edge")
    star = t.edge_star(e)
    if len(star) != 3:
        raise MoveError("3-2 move needs an edge of degree 3, got %d" % len(star))
    a, b = e.endpoints
    link = {v for _, vs in star for v in vs[2:]}
    if len(link) != 3:
        raise MoveError("3-2 move needs three distinct link vertices")
    x, y, z = sorted(link)
    return replace_region(t, [tet for tet, _ in star], [(a, x, y, z), (b, x, y, z)], "3-2", e.index)


def pachner_14(t: Triangulation, tet: str, zeta=None) -> Triangulation:
    """Cone a tetrahedron from a new inner vertex."""
    if tet not in t.tets:
        raise MoveError("unknown tetrahedron %r" % (tet,))
    x, z = fresh_vertex(t, zeta)
    vs = t.tets[tet]
    new = [tuple(x if k == s else vs[k] for k in range(4)) for s in range(4)]
    return replace_region(t, [tet], new, "1-4", tet, {x: z})


def pachner_41(t: Triangulation, vertex: int) -> Triangulation:
    """Remove an inner vertex of degree 4."""
    if vertex not in t.inner_vertices:
        raise MoveError("4-1 move needs an inner vertex")
    star = [k for k in t.tet_order if vertex in t.tets[k]]
    link = {v for k in star for v in t.tets[k] if v != vertex}
    if len(star) != 4 or len(link) != 4:
        raise MoveError("4-1 move needs a vertex in exactly four tetrahedra over four link vertices")
    return replace_region(t, star, [tuple(sorted(link))], "4-1", vertex)


def interior_sites(t: Triangulation) -> Dict[str, list]:
    sites = {"2-3": [], "3-2": [], "1-4": list(t.tet_order), "4-1": []}
    for fa, fb in t.gluing_pairs():
        if fa[0] != fb[0] and t.tets[fa[0]][fa[1]] != t.tets[fb[0]][fb[1]]:
            sites["2-3"].append(fa)
    for e in t.inner_edges:
        if len(e.members) == 3:
            sites["3-2"].append(e.index)
    for v in t.inner_vertices:
        if sum(v in vs for vs in t.tets.values()) == 4:
            sites["4-1"].append(v)
    return sites


MOVES = {"2-3": pachner_23, "3-2": pachner_32, "1-4": pachner_14, "4-1": pachner_41}


def random_interior_move(t: Triangulation, rng: random.Random, max_tets: int = 14):
    """Apply one random interior move; returns (new triangulation, kind, site) or None.

    Moves that grow the triangulation are avoided once it has ``max_tets``
    tetrahedra.  Sites whose move turns out to be invalid are skipped.
    """
    sites = interior_sites(t)
    weights = {"2-3": 2, "3-2": 3, "1-4": 1, "4-1": 3}
    if len(t.tets) >= max_tets:
        weights["2-3"] = weights["1-4"] = 0
    kinds = [k for k in ("2-3", "3-2", "1-4", "4-1") if sites[k] and weights[k]]
    while kinds:
        kind = rng.choices(kinds, weights=[weights[k] for k in kinds])[0]
        options = list(sites[kind])
        rng.shuffle(options)
        for site in options:
            try:
                return MOVES[kind](t, site), kind, site
            except MoveError:
                continue
        kinds.remove(kind)
    return None


# -- boundary moves -------------------------------------------------------------------

def _next_tag(t: Triangulation) -> int:
    return max(t.boundary_tags) + 1 if t.boundary_edges else 0


def _tag_new_edges(t: Triangulation, tags: dict, nxt: int):
    """Give boundary edges of ``t`` without an inherited tag fresh tags from ``nxt`` on."""
    for e in t.boundary_edges:
        if not any(m in tags for m in e.members):
            tags[e.members[0]] = nxt
            nxt += 1


def _with_new_tet(t: Triangulation, labels, glued_faces, kind, site, new_vertices=None):
    """Glue one new tetrahedron on ``labels`` to the boundary faces ``glued_faces``."""
    first = glued_faces[0]
    sign = -oriented_face_sign(t.tets[first[0]], first[1])
    vs = _orient_like(labels, t.face_labels(first), sign)
    (name,) = fresh_tet_ids(t, 1)
    gluings = t.gluing_pairs()
    for f in glued_faces:
        key = set(t.face_labels(f))
        p = [k for k in range(4) if vs[k] not in key]
        if len(p) != 1:
            raise MoveError("%s: face %r does not belong to the new tetrahedron" % (kind, f))
        gluings.append(((name, p[0]), f))
    tets = dict(t.tets)
    tets[name] = vs
    vertices = dict(t.vertices)
    vertices.update(new_vertices or {})
    # old tags stay; edges of the new tetrahedron not glued anywhere get fresh tags
    tags = t.normalized_tags()
    tmp = Triangulation(vertices, tets, gluings, tags=tags, name=t.name)
    try:
        tmp.validate()
    except TriangulationError as exc:
        raise MoveError("%s produced an invalid triangulation: %s" % (kind, exc))
    _tag_new_edges(tmp, tags, _next_tag(t))
    t_new = Triangulation(vertices, tets, gluings, tags=tags, name=t.name)
    return t_new, name, vs


def boundary_13(t: Triangulation, face, zeta=None) -> Triangulation:
    """Glue a new tetrahedron by one face, with a new boundary vertex."""
    face = (str(face[0]), int(face[1]))
    if not t.is_boundary_face(face):
        raise MoveError("1-3 move needs a boundary face")
    x, z = fresh_vertex(t, zeta)
    labels = (x,) + t.face_labels(face)
    t_new, name, vs = _with_new_tet(t, labels, [face], "b1-3", face, {x: z})
    rec = MoveRecord("b1-3", face, (), (name,), x)
    return _finish(t_new, t, rec)


def _faces_around_edge(t: Triangulation, e):
    out = []
    for f in t.boundary_faces:
        for p, q in combinations(face_slots(f[1]), 2):
            if t.edge_of(f[0], p, q).index == e.index:
                out.append(f)
    return out


def boundary_22(t: Triangulation, tag: int) -> Triangulation:
    """Glue a new tetrahedron onto the two boundary faces at a boundary edge."""
    e = t.edge_by_tag(tag)
    faces = _faces_around_edge(t, e)
    if len(faces) != 2:
        raise MoveError("2-2 move: edge %d has %d boundary faces" % (tag, len(faces)))
    u, v = e.endpoints
    apex = [next(x for x in t.face_labels(f) if x not in (u, v)) for f in faces]
    if apex[0] == apex[1]:
        raise MoveError("2-2 move needs distinct opposite vertices")
    t_new, name, vs = _with_new_tet(t, (u, v, apex[0], apex[1]), faces, "b2-2", tag)
    rec = MoveRecord("b2-2", tag, (), (name,), None, (("edge", tag),))
    return _finish(t_new, t, rec)


def boundary_31(t: Triangulation, vertex: int) -> Triangulation:
    """Glue a new tetrahedron onto the three boundary faces around a boundary vertex."""
    faces = [f for f in t.boundary_faces if vertex in t.face_labels(f)]
    if len(faces) != 3:
        raise MoveError("3-1 move needs a boundary vertex of degree 3 (got %d faces)" % len(faces))
    link = sorted({x for f in faces for x in t.face_labels(f) if x != vertex})
    if len(link) != 3:
        raise MoveError("3-1 move needs three distinct link vertices")
    comp = t.components[t.component_of(vertex)]
    if len(comp.vertices) < 5:
        raise MoveError("3-1 move would leave a boundary component with fewer than 4 vertices")
    old_tags = {}
    for f in faces:
        for ed in t.boundary_face_edges(f):
            if vertex in ed.endpoints:
                other = ed.endpoints[0] if ed.endpoints[1] == vertex else ed.endpoints[1]
                old_tags[other] = ed.tag
    t_new, name, vs = _with_new_tet(t, (vertex,) + tuple(link), faces, "b3-1", vertex)
    rec = MoveRecord("b3-1", vertex, (), (name,), None,
                     (("vertex", vertex), ("link", tuple(link)), ("tags", tuple(sorted(old_tags.items())))))
    return _finish(t_new, t, rec)


def boundary_glue(t: Triangulation, kind: str, site, **kw) -> Triangulation:
    fn = {"1-3": boundary_13, "2-2": boundary_22, "3-1": boundary_31}.get(kind)
    if fn is None:
        raise MoveError("unknown boundary move %r" % (kind,))
    return fn(t, site, **kw)


def boundary_sites(t: Triangulation) -> Dict[str, list]:
    sites = {"1-3": list(t.boundary_faces), "2-2": [], "3-1": []}
    for e in t.boundary_edges:
        faces = _faces_around_edge(t, e)
        u, v = e.endpoints
        apex = {next(x for x in t.face_labels(f) if x not in (u, v)) for f in faces}
        if len(faces) == 2 and len(apex) == 2:
            sites["2-2"].append(e.tag)
    for v in t.boundary_vertices:
        faces = [f for f in t.boundary_faces if v in t.face_labels(f)]
        comp = t.components[t.component_of(v)]
        link = {x for f in faces for x in t.face_labels(f) if x != v}
        if len(faces) == 3 and len(link) == 3 and len(comp.vertices) >= 5:
            sites["3-1"].append(v)
    return sites


def _tet_gens(t: Triangulation, tet: str, override=None):
    gens = {pq: t.generator_id(e) for pq, e in t.tet_edges(tet).items()}
    for pq, e in t.tet_edges(tet).items():
        if override and e.index in override:
            gens[pq] = override[e.index]
    return gens


def predict_boundary_change(I_old: InvariantFunction, t_new: Triangulation, form: int = 0) -> InvariantFunction:
    """Generating function after the last boundary move of ``t_new``, from the one before.

    1-3: multiply by the tetrahedron function.  2-2: multiply, integrate over
    the edge ``uv`` that became inner and divide by ``zeta_uv^2`` (the
    normalization every inner edge carries).  3-1: ``1/(zeta_ij zeta_kl)`` times the
    integral over ``a_ij``; ``form`` 0, 1, 2 picks ``j`` among the link
    vertices.
    """
    rec = t_new.history[-1]
    name = rec.created[0]
    vs = t_new.tets[name]
    zetas = [t_new.zeta(v) for v in vs]
    x = I_old.element
    if rec.kind == "b1-3":
        out = x * tetrahedron_function(zetas, _tet_gens(t_new, name))
    elif rec.kind == "b2-2":
        old_tag = dict(rec.details)["edge"]
        inner = [e for e in t_new.tet_edges(name).values() if e.is_inner]
        if len(inner) != 1:
            raise MoveError("2-2 move should create exactly one inner edge")
        big = max([old_tag] + list(x.generators()) + t_new.boundary_tags) + 1000
        x = rename_generators(x, {old_tag: big})
        f = tetrahedron_function(zetas, _tet_gens(t_new, name, {inner[0].index: big}))
        out = berezin(mul(x, f), big) * (1 / t_new.zeta_diff(*inner[0].endpoints) ** 2)
    elif rec.kind == "b3-1":
        det = dict(rec.details)
        i = det["vertex"]
        link = list(det["link"])
        tags = dict(det["tags"])
        j = link[form]
        k, l = [w for w in link if w != j]
        out = berezin(x, tags[j]) * (1 / (t_new.zeta_diff(i, j) * t_new.zeta_diff(k, l)))
    else:
        raise MoveError("no prediction for move %r" % (rec.kind,))
    return InvariantFunction(out, t_new.marked_count, tuple(t_new.boundary_tags), t_new.name,
                             dict(t_new.vertices))


# -- boundary surface isomorphisms and gluing --------------------------------------------

def _face_edges_by_labels(t: Triangulation, f):
    """Edge class of each label pair of a face."""
    vs = t.tets[f[0]]
    out = {}
    for p, q in combinations(face_slots(f[1]), 2):
        out[frozenset((vs[p], vs[q]))] = t.edge_of(f[0], p, q)
    return out


def _neighbour_across(t: Triangulation, comp_faces, f, edge_index):
    for g in comp_faces:
        if g == f:
            continue
        if any(e.index == edge_index for e in _face_edges_by_labels(t, g).values()):
            return g
    raise MoveError("boundary surface is not closed at edge %d" % edge_index)


def surface_isomorphism(M1: Triangulation, c1: int, M2: Triangulation, c2: int,
                        vertex_map: Dict[int, int]) -> Dict[Tuple[str, int], Tuple[str, int]]:
    """Face correspondence between boundary components extending ``vertex_map``.

    The map must reverse orientation.  Faces are propagated across edges from
    each admissible image of the first face; the first consistent complete
    propagation wins.
    """
    G1 = M1.components[c1]
    G2 = M2.components[c2]
    if (len(G1.vertices), len(G1.edges), len(G1.faces)) != (len(G2.vertices), len(G2.edges), len(G2.faces)):
        raise MoveError("boundary components have different sizes")
    if set(vertex_map) != set(G1.vertices) or set(vertex_map.values()) != set(G2.vertices):
        raise MoveError("vertex map must be a bijection between the boundary vertex sets")

    def image_labels(f):
        return frozenset(vertex_map[v] for v in M1.face_labels(f))

    def reversing(f, g):
        # orientation of f transported to the labels of M2
        s1 = (-1) ** f[1] * perm_sign([vertex_map[v] for v in M1.face_labels(f)])
        s2 = oriented_face_sign(M2.tets[g[0]], g[1])
        return s1 == -s2

    start = G1.faces[0]
    for cand in G2.faces:
        if image_labels(start) != frozenset(M2.face_labels(cand)) or not reversing(start, cand):
            continue
        fmap = {start: cand}
        queue = [start]
        ok = True
        while queue and ok:
            f = queue.pop(0)
            g = fmap[f]
            e1 = _face_edges_by_labels(M1, f)
            e2 = _face_edges_by_labels(M2, g)
            for pair, edge1 in e1.items():
                edge2 = e2[frozenset(vertex_map[v] for v in pair)]
                f_next = _neighbour_across(M1, G1.faces, f, edge1.index)
                g_next = _neighbour_across(M2, G2.faces, g, edge2.index)
                if image_labels(f_next) != frozenset(M2.face_labels(g_next)) or not reversing(f_next, g_next):
                    ok = False
                    break
                if f_next in fmap:
                    if fmap[f_next] != g_next:
                        ok = False
                        break
                else:
                    fmap[f_next] = g_next
                    queue.append(f_next)
        if ok and len(fmap) == len(G1.faces) and len(set(fmap.values())) == len(G2.faces):
            return fmap
    raise MoveError("no orientation-reversing simplicial isomorphism extends the vertex map")


def gluing_vertex_maps(M1: Triangulation, c1: int, M2: Triangulation, c2: int,
                       match_zeta: bool = True):
    """Vertex bijections of two boundary components that extend to an
    orientation-reversing isomorphism, in lexicographic order of the images.

    With ``match_zeta`` only maps between vertices of equal coordinate are tried.
    """
    G1, G2 = M1.components[c1], M2.components[c2]
    src = sorted(G1.vertices)
    if len(src) != len(G2.vertices):
        return
    for image in permutations(sorted(G2.vertices)):
        vmap = dict(zip(src, image))
        if match_zeta and any(M1.zeta(a) != M2.zeta(b) for a, b in vmap.items()):
            continue
        try:
            surface_isomorphism(M1, c1, M2, c2, vmap)
        except MoveError:
            continue
        yield vmap


def transport_zetas(M1: Triangulation, M2: Triangulation, vertex_map: Dict[int, int]) -> Triangulation:
    """Copy of M2 whose matched vertices take the coordinates of their M1 partners.

    Unmatched M2 vertices keep their coordinate unless it collides with one
    in use, in which case they get a fresh one.
    """
    zetas = dict(M2.vertices)
    for v1, v2 in vertex_map.items():
        zetas[v2] = M1.zeta(v1)
    taken = set(M1.vertices.values())
    fixed = set(vertex_map.values())
    used = {zetas[v] for v in fixed}
    for v in sorted(zetas):
        if v in fixed:
            continue
        if zetas[v] in taken or zetas[v] in used:
            zetas[v] = fresh_zeta(taken | used)
        used.add(zetas[v])
    out = M2.replace(vertices=zetas, tags=M2.normalized_tags())
    out.validate()
    return out


@dataclass
class GlueInfo:
    vertex_map: Dict[int, int]      # M2 label -> label in the result
    tet_map: Dict[str, str]         # M2 tet id -> id in the result
    tag_offset: int                 # M2 boundary tag t becomes t + offset
    face_pairs: List[Tuple[Tuple[str, int], Tuple[str, int]]]


def glue_faces(M1: Triangulation, M2: Triangulation, face_pairs, vertex_map: Dict[int, int],
               name=None) -> Tuple[Triangulation, GlueInfo]:
    """Disjoint union of M1 and M2 with the given boundary faces glued.

    ``vertex_map`` sends M1 labels to M2 labels on the glued faces; the
    other M2 vertices get fresh labels.
    """
    inv = {}
    for v1, v2 in vertex_map.items():
        if M1.zeta(v1) != M2.zeta(v2):
            raise MoveError("zeta mismatch: vertex %d (%s) matched to %d (%s)"
                            % (v1, M1.zeta(v1), v2, M2.zeta(v2)))
        inv[v2] = v1
    vertices = dict(M1.vertices)
    nxt = max(M1.vertices) + 1
    for v2 in sorted(M2.vertices):
        if v2 in inv:
            continue
        if M2.zeta(v2) in vertices.values():
            raise MoveError("coincident coordinates: vertex %d of the second manifold has zeta=%s"
                            % (v2, M2.zeta(v2)))
        inv[v2] = nxt
        vertices[nxt] = M2.zeta(v2)
        nxt += 1
    tet_map = {}
    for k in M2.tet_order:
        new = k
        while new in M1.tets or new in tet_map.values():
            new += "'"
        tet_map[k] = new
    tets = dict(M1.tets)
    for k, vs in M2.tets.items():
        tets[tet_map[k]] = tuple(inv[v] for v in vs)
    gluings = M1.gluing_pairs()
    gluings += [((tet_map[a[0]], a[1]), (tet_map[b[0]], b[1])) for a, b in M2.gluing_pairs()]
    glued1, glued2 = set(), set()
    for f1, f2 in face_pairs:
        if not M1.is_boundary_face(f1) or not M2.is_boundary_face(f2):
            raise MoveError("only boundary faces can be glued")
        gluings.append((f1, (tet_map[f2[0]], f2[1])))
        glued1.add(f1)
        glued2.add(f2)
    offset = (max(M1.boundary_tags) + 1) if M1.boundary_edges else 0
    tags = {}
    for e in M1.boundary_edges:
        tags[e.members[0]] = e.tag
    for e in M2.boundary_edges:
        m = e.members[0]
        tags[(tet_map[m[0]], m[1], m[2])] = e.tag + offset
    t = Triangulation(vertices, tets, gluings, tags=tags, name=name)
    try:
        t.validate()
    except TriangulationError as exc:
        raise MoveError("gluing produced an invalid triangulation: %s" % exc)
    return t, GlueInfo(inv, tet_map, offset, list(face_pairs))


def glue(M1: Triangulation, c1: int, M2: Triangulation, c2: int, vertex_map: Dict[int, int],
         name=None) -> Triangulation:
    """Glue boundary component ``c1`` of M1 to component ``c2`` of M2."""
    fmap = surface_isomorphism(M1, c1, M2, c2, vertex_map)
    return glue_faces(M1, M2, sorted(fmap.items(), key=lambda kv: M1.face_sort_key(kv[0])),
                      vertex_map, name=name)[0]


def glue_with_info(M1, c1, M2, c2, vertex_map, name=None):
    fmap = surface_isomorphism(M1, c1, M2, c2, vertex_map)
    return glue_faces(M1, M2, sorted(fmap.items(), key=lambda kv: M1.face_sort_key(kv[0])),
                      vertex_map, name=name)


# -- maximal tree of triangles ------------------------------------------------------------

@dataclass
class TriangleTree:
    order: Tuple[int, ...]                     # i_1 .. i_n
    triangles: Tuple[Tuple[str, int], ...]     # boundary faces Delta_1 .. Delta_{n-2}
    inner_edges: Tuple[int, ...]               # G: tags of edges shared by two tree triangles
    rim_edges: Tuple[int, ...]                 # tags of the other edges of tree triangles
    free_edges: Tuple[int, ...]                # F: tags of edges in no tree triangle
    virtual_tets: Tuple[Tuple[int, int, int, int], ...] = ()
    virtual_edges: Tuple[Tuple[int, int], ...] = ()


def build_triangle_tree(t: Triangulation, component: int) -> TriangleTree:
    """Vertex ordering and tree of triangles, by depth-first search with smallest-first choices."""
    comp = t.components[component]
    faces = list(comp.faces)
    edges_of = {f: {e.index for e in t.boundary_face_edges(f)} for f in faces}
    n = len(comp.vertices)

    def extend(tree, covered, order):
        if len(covered) == n:
            return tree, order
        tree_edges = set().union(*(edges_of[f] for f in tree))
        for f in faces:
            if f in tree:
                continue
            labels = t.face_labels(f)
            new = [v for v in labels if v not in covered]
            if len(new) != 1 or not (edges_of[f] & tree_edges):
                continue
            # the shared edge must join two covered vertices
            res = extend(tree + [f], covered | {new[0]}, order + [new[0]])
            if res:
                return res
        return None

    for f in faces:
        labels = t.face_labels(f)
        if len(set(labels)) != 3:
            continue
        res = extend([f], set(labels), list(sorted(labels)))
        if res:
            tree, order = res
            break
    else:
        raise MoveError("boundary component %d admits no tree of triangles" % component)

    count = {}
    for f in tree:
        for k in edges_of[f]:
            count[k] = count.get(k, 0) + 1
    inner = sorted(t.edges[k].tag for k, c in count.items() if c == 2)
    rim = sorted(t.edges[k].tag for k, c in count.items() if c == 1)
    free = sorted(t.edges[k].tag for k in comp.edges if k not in count)
    vt, ve = _virtual_cluster(t, tree)
    return TriangleTree(tuple(order), tuple(tree), tuple(inner), tuple(rim), tuple(free), vt, ve)


def _virtual_cluster(t: Triangulation, tree):
    """Label-level construction of the virtual tetrahedra above the tree."""
    tris = [frozenset(t.face_labels(f)) for f in tree]
    if len(tris) < 2:
        return (), ()
    a, b = tris[0], tris[1]
    tets = [tuple(sorted(a | b))]
    vedges = [tuple(sorted((a - b) | (b - a)))]
    upper = [frozenset(x) for x in combinations(sorted(a | b), 3) if frozenset(x) not in (a, b)]
    for d in tris[2:]:
        cand = [u for u in upper if len(u & d) == 2]
        if len(cand) != 1:
            return tuple(tets), tuple(vedges)
        u = cand[0]
        new = next(iter(d - u))
        w = next(iter(u - d))
        tets.append(tuple(sorted(u | {new})))
        vedges.append(tuple(sorted((w, new))))
        upper.remove(u)
        for pair in combinations(sorted(u & d), 1):
            upper.append(frozenset({w, new, pair[0]}))
    return tuple(tets), tuple(vedges)


def tree_sphere(t: Triangulation, tree: TriangleTree) -> Triangulation:
    """The closed manifold made of the virtual cluster and its mirror image.

    Faces shared inside the cluster are glued inside each copy; the outer
    faces of one copy are glued to the same faces of the other.
    """
    cluster = []
    for labels in tree.virtual_tets:
        vs = tuple(labels)
        for prev in cluster:
            common = set(prev) & set(vs)
            if len(common) == 3:
                p = next(k for k in range(4) if prev[k] not in common)
                q = next(k for k in range(4) if vs[k] not in common)
                if oriented_face_sign(prev, p) == oriented_face_sign(vs, q):
                    vs = (vs[1], vs[0], vs[2], vs[3])
                break
        cluster.append(vs)
    by_face = {}
    for k, vs in enumerate(cluster):
        for p in range(4):
            by_face.setdefault(frozenset(vs[s] for s in face_slots(p)), []).append((k, p))
    tets, gluings = {}, []
    for k, vs in enumerate(cluster):
        tets["u%d" % (k + 1)] = vs
        tets["w%d" % (k + 1)] = (vs[1], vs[0], vs[2], vs[3])
    swap = {0: 1, 1: 0, 2: 2, 3: 3}
    for key, faces in by_face.items():
        if len(faces) == 2:
            (k1, p1), (k2, p2) = faces
            gluings.append((("u%d" % (k1 + 1), p1), ("u%d" % (k2 + 1), p2)))
            gluings.append((("w%d" % (k1 + 1), swap[p1]), ("w%d" % (k2 + 1), swap[p2])))
        elif len(faces) == 1:
            k, p = faces[0]
            gluings.append((("u%d" % (k + 1), p), ("w%d" % (k + 1), swap[p])))
        else:
            raise MoveError("virtual cluster has a face shared by %d tetrahedra" % len(faces))
    s = Triangulation({v: t.zeta(v) for v in tree.order}, tets, gluings, name="tree sphere")
    s.validate()
    return s


def tree_sphere_torsion(t: Triangulation, tree: TriangleTree) -> Fraction:
    """Torsion of the closed tree sphere, ``2 prod' zeta^2 * I``."""
    from .torsion import inner_zeta_square_product
    s = tree_sphere(t, tree)
    return invariant_I_D(s, ()) * 2 * inner_zeta_square_product(s)


def _gamma_edge_map(M1: Triangulation, M2: Triangulation, fmap, vertex_map):
    """Tag of each edge of the glued component of M1 -> tag of the matched M2 edge."""
    out = {}
    for f1, f2 in fmap.items():
        e1 = _face_edges_by_labels(M1, f1)
        e2 = _face_edges_by_labels(M2, f2)
        for pair, edge in e1.items():
            out[edge.tag] = e2[frozenset(vertex_map[v] for v in pair)].tag
    return out


def glued_generating_function(I1: InvariantFunction, I2: InvariantFunction,
                              M1: Triangulation, c1: int, M2: Triangulation, c2: int,
                              vertex_map: Dict[int, int], tree: TriangleTree = None,
                              integrate_side: int = 2) -> GrassmannElement:
    """Generating function of the glued manifold from those of the pieces.

    ``4 / prod_{F u G} zeta^2 * integral of I1 I2`` over ``F`` and the second
    copy of ``G`` (or the first copy with ``integrate_side=1``); generators on
    ``G`` differ between the two pieces, the other generators of the glued
    surface are shared.  The result uses the tag numbering of :func:`glue`.
    """
    fmap = surface_isomorphism(M1, c1, M2, c2, vertex_map)
    emap = _gamma_edge_map(M1, M2, fmap, vertex_map)
    tree = tree or build_triangle_tree(M1, c1)
    gamma = sorted(emap)
    offset = (max(M1.boundary_tags) + 1) if M1.boundary_edges else 0
    top = max([offset] + [g + offset for g in M2.boundary_tags] + M1.boundary_tags) + 1
    X = {tag: top + k for k, tag in enumerate(gamma)}
    Y = {tag: top + len(gamma) + k for k, tag in enumerate(gamma)}
    G = set(tree.inner_edges)
    ren1 = {tag: (Y[tag] if (tag in G and integrate_side == 1) else X[tag]) for tag in gamma}
    x1 = rename_generators(I1.element, ren1)
    ren2 = {g: g + offset for g in M2.boundary_tags}
    back = {v: k for k, v in emap.items()}
    for g2, g1 in back.items():
        if g1 in G and integrate_side == 2:
            ren2[g2] = Y[g1]
        else:
            ren2[g2] = X[g1]
    x2 = rename_generators(I2.element, ren2)
    gens = [X[tag] for tag in tree.free_edges] + [Y[tag] for tag in sorted(G)]
    scale = Fraction(4)
    for tag in list(tree.free_edges) + sorted(G):
        e = M1.edge_by_tag(tag)
        scale /= M1.zeta_diff(*e.endpoints) ** 2
    return product_integrate([x1, x2], gens) * scale


# -- removing a tetrahedron and connected sums -----------------------------------------------

def remove_tetrahedron(t: Triangulation, tet: str) -> Triangulation:
    """Remove the interior of a tetrahedron whose vertices are all inner."""
    if tet not in t.tets:
        raise MoveError("unknown tetrahedron %r" % (tet,))
    if any(v not in t.inner_vertices for v in t.tets[tet]):
        raise MoveError("tetrahedron %s touches the boundary" % tet)
    if any((tet, p) not in t.partner for p in range(4)):
        raise MoveError("tetrahedron %s has a boundary face" % tet)
    if len(t.tets) < 2:
        raise MoveError("cannot remove the only tetrahedron")
    tets = {k: vs for k, vs in t.tets.items() if k != tet}
    gluings = [(a, b) for a, b in t.gluing_pairs() if a[0] != tet and b[0] != tet]
    tags = t.normalized_tags()
    tmp = Triangulation(t.vertices, tets, gluings, tags=tags, name=t.name)
    try:
        tmp.validate()
    except TriangulationError as exc:
        raise MoveError("removing %s gives an invalid triangulation: %s" % (tet, exc))
    _tag_new_edges(tmp, tags, _next_tag(t))
    out = Triangulation(t.vertices, tets, gluings, tags=tags, name=t.name)
    out.validate()
    out.history = t.history + (MoveRecord("remove", tet, (tet,)),)
    return out


def removed_tet_component(t_new: Triangulation, vertices) -> int:
    vs = set(vertices)
    for c in t_new.components:
        if set(c.vertices) == vs:
            return c.index
    raise MoveError("no boundary component on vertices %s" % sorted(vs))


def make_inner_tetrahedron(t: Triangulation) -> Tuple[Triangulation, str]:
    """Return t itself and an all-inner tetrahedron, refining by 1-4 moves if needed."""
    inner = set(t.inner_vertices)
    for k in t.tet_order:
        if all(v in inner for v in t.tets[k]) and all((k, p) in t.partner for p in range(4)):
            return t, k
    cur = t
    target = t.tet_order[0]
    for step in range(4):
        cur = pachner_14(cur, target)
        created = cur.history[-1].created
        inner = set(cur.inner_vertices)
        best = max(created, key=lambda k: (sum(v in inner for v in cur.tets[k]), natural_key(k)))
        target = best
        if all(v in inner for v in cur.tets[target]):
            return cur, target
    raise MoveError("could not produce an inner tetrahedron")


def connected_sum(M1: Triangulation, M2: Triangulation, name=None):
    """Connected sum through removal of inner tetrahedra and gluing of the new spheres.

    Returns ``(M, M2_used, info)``: ``M2_used`` is the copy of M2 with the
    coordinates actually used (inner vertices of the removed tetrahedron take
    over the coordinates of the matching M1 vertices).
    """
    A, a = make_inner_tetrahedron(M1)
    B, b = make_inner_tetrahedron(M2)
    va, vb = A.tets[a], B.tets[b]
    # orientation-reversing vertex correspondence a -> b
    corr = {va[0]: vb[1], va[1]: vb[0], va[2]: vb[2], va[3]: vb[3]}
    B2 = transport_zetas(A, B, corr)
    A1 = remove_tetrahedron(A, a)
    B1 = remove_tetrahedron(B2, b)
    c1 = removed_tet_component(A1, va)
    c2 = removed_tet_component(B1, vb)
    M, info = glue_with_info(A1, c1, B1, c2, corr, name=name)
    return M, B2, info


def self_glue_faces(t: Triangulation, c1: int, c2: int, vertex_map: Dict[int, int]) -> Triangulation:
    """Glue two boundary components of one manifold to each other."""
    fmap = surface_isomorphism(t, c1, t, c2, vertex_map)
    gluings = t.gluing_pairs() + list(fmap.items())
    # identify vertices: component-2 labels are replaced by their partners
    inv = {v2: v1 for v1, v2 in vertex_map.items()}
    tets = {k: tuple(inv.get(v, v) for v in vs) for k, vs in t.tets.items()}
    vertices = {v: z for v, z in t.vertices.items() if v not in inv or inv[v] == v}
    out = Triangulation(vertices, tets, gluings, tags=t.normalized_tags(), name=t.name)
    return out


# -- randomized invariance checks ----------------------------------------------------------

@dataclass
class FuzzReport:
    ok: bool
    applied: List[Tuple[str, object]]
    skipped: int
    signs: List[int]            # relative sign of the function after each move
    final: Triangulation
    failure: Optional[str] = None


def fuzz_invariance(t: Triangulation, moves: int, rng: random.Random, max_tets: int = 14,
                    compute=None) -> FuzzReport:
    """Apply random interior moves, comparing the generating function after each.

    ``compute`` maps a triangulation to a GrassmannElement (default: the
    generating function).  A step with no applicable move counts as skipped.
    """
    if compute is None:
        def compute(x):
            return generating_function(x).element
    ref = compute(t)
    cur, applied, signs, skipped = t, [], [], 0
    for _ in range(moves):
        step = random_interior_move(cur, rng, max_tets=max_tets)
        if step is None:
            skipped += 1
            continue
        cur, kind, site = step
        applied.append((kind, site))
        sign = relative_sign(ref, compute(cur))
        signs.append(sign)
        if sign == 0:
            return FuzzReport(False, applied, skipped, signs, cur,
                              "function changed after %s at %r" % (kind, site))
    return FuzzReport(True, applied, skipped, signs, cur)
