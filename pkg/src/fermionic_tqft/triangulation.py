"""Oriented triangulated 3-manifolds with boundary.

Tetrahedra are ordered 4-tuples of vertex labels; the listed order is the
orientation.  Faces are addressed as ``(tet, missing_slot)`` and a gluing
pairs two faces.  Because every tetrahedron carries four distinct labels, the
slot-to-slot map of a gluing is forced by the labels, so only the face pairing
is stored.  Several tetrahedra, edges or faces may share the same labels.

Boundary edges carry integer *tags* that survive interior moves.  Tags are
the Grassmann generator ids of the generating function.
"""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_linalg import scalar

FaceKey = Tuple[str, int]
Member = Tuple[str, int, int]


class TriangulationError(ValueError):
    """Raised for malformed or invalid triangulations; ``problems`` lists each violation."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def natural_key(text: str):
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t)
                 for t in re.split(r"(\d+)", str(text)) if t != "")


def perm_sign(seq: Sequence) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def face_slots(p: int) -> Tuple[int, int, int]:
    return tuple(s for s in range(4) if s != p)


def oriented_face_sign(verts: Sequence[int], p: int) -> int:
    """Orientation induced on the face opposite slot ``p``, relative to sorted labels."""
    labels = [verts[s] for s in face_slots(p)]
    return (-1) ** p * perm_sign(labels)


def even_order(verts: Sequence[int], first: int, second: int) -> Tuple[int, int, int, int]:
    """Reorder ``verts`` by an even permutation so that it starts ``first, second``."""
    si, sj = verts.index(first), verts.index(second)
    r, s = [k for k in range(4) if k not in (si, sj)]
    if perm_sign([si, sj, r, s]) < 0:
        r, s = s, r
    return (verts[si], verts[sj], verts[r], verts[s])


@dataclass(frozen=True)
class EdgeClass:
    index: int
    endpoints: Tuple[int, int]
    members: Tuple[Member, ...]
    is_inner: bool
    tag: Optional[int] = None


@dataclass(frozen=True)
class BoundaryComponent:
    index: int
    faces: Tuple[FaceKey, ...]
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)


@dataclass
class Diagnostics:
    N0: int
    N1: int
    N3: int
    N0_inner: int
    N1_inner: int
    m: int
    marked: int
    boundary_chi: List[int] = field(default_factory=list)

    def as_dict(self):
        return {"N0": self.N0, "N1": self.N1, "N3": self.N3, "N0'": self.N0_inner,
                "N1'": self.N1_inner, "m": self.m, "#D": self.marked,
                "boundary_chi": list(self.boundary_chi)}


class _UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class Triangulation:
    """A compact oriented triangulated 3-manifold, possibly with boundary.

    ``vertices`` maps vertex label to its coordinate (a Fraction);
    ``tets`` maps tetrahedron id to its oriented vertex 4-tuple;
    ``gluings`` is an iterable of face pairs ``((tet, slot), (tet, slot))``;
    ``tags`` maps a representative edge member ``(tet, s, t)`` to the tag of
    its (boundary) edge class.
    """

    def __init__(self, vertices, tets, gluings=(), tags=None, name=None):
        self.vertices: Dict[int, Fraction] = {int(v): scalar(z) for v, z in dict(vertices).items()}
        self.tets: Dict[str, Tuple[int, int, int, int]] = {
            str(t): tuple(int(x) for x in vs) for t, vs in dict(tets).items()}
        partner: Dict[FaceKey, FaceKey] = {}
        problems = []
        if isinstance(gluings, dict):
            gluings = gluings.items()
        for fa, fb in gluings:
            fa, fb = (str(fa[0]), int(fa[1])), (str(fb[0]), int(fb[1]))
            for f in (fa, fb):
                if f[0] not in self.tets:
                    problems.append("gluing refers to unknown tetrahedron %r" % (f[0],))
                elif not 0 <= f[1] <= 3:
                    problems.append("bad slot %r in gluing" % (f,))
            if fa == fb:
                problems.append("face %r glued to itself" % (fa,))
            for f, g in ((fa, fb), (fb, fa)):
                if partner.get(f, g) != g:
                    problems.append("face %r glued twice" % (f,))
                partner[f] = g
        for t, vs in self.tets.items():
            if len(vs) != 4:
                problems.append("tetrahedron %r does not have 4 vertices" % (t,))
        if problems:
            raise TriangulationError(problems)
        self.partner = partner
        self.tags: Dict[Member, int] = dict(tags or {})
        self.name = name
        self.history: tuple = ()

    # -- construction helpers ----------------------------------------------
    def replace(self, **kw) -> "Triangulation":
        args = dict(vertices=self.vertices, tets=self.tets, gluings=self.gluing_pairs(),
                    tags=self.tags, name=self.name)
        args.update(kw)
        return Triangulation(**args)

    def gluing_pairs(self) -> List[Tuple[FaceKey, FaceKey]]:
        seen, out = set(), []
        for f in sorted(self.partner, key=self.face_sort_key):
            if f not in seen:
                g = self.partner[f]
                seen.update((f, g))
                out.append((f, g))
        return out

    # -- orders ------------------------------------------------------------
    def tet_sort_key(self, t):
        return natural_key(t)

    def face_sort_key(self, f: FaceKey):
        return (natural_key(f[0]), f[1])

    def member_sort_key(self, m: Member):
        return (natural_key(m[0]), m[1], m[2])

    @cached_property
    def tet_order(self) -> List[str]:
        return sorted(self.tets, key=self.tet_sort_key)

    # -- elementary geometry ------------------------------------------------
    def zeta(self, v: int) -> Fraction:
        return self.vertices[v]

    def zeta_diff(self, i: int, j: int) -> Fraction:
        return self.vertices[i] - self.vertices[j]

    def face_labels(self, f: FaceKey) -> Tuple[int, int, int]:
        vs = self.tets[f[0]]
        return tuple(vs[s] for s in face_slots(f[1]))

    def is_boundary_face(self, f: FaceKey) -> bool:
        return f not in self.partner

    def slot_map(self, fa: FaceKey, fb: FaceKey) -> Dict[int, int]:
        """Slot of ``fb``'s tetrahedron glued to each slot of ``fa``'s face."""
        va, vb = self.tets[fa[0]], self.tets[fb[0]]
        return {s: vb.index(va[s]) for s in face_slots(fa[1])}

    def member_labels(self, m: Member) -> Tuple[int, int]:
        vs = self.tets[m[0]]
        return tuple(sorted((vs[m[1]], vs[m[2]])))

    # -- structural checks --------------------------------------------------
    def _structural_problems(self) -> List[str]:
        problems = []
        zs = list(self.vertices.values())
        if len(set(zs)) != len(zs):
            seen = {}
            for v, z in sorted(self.vertices.items()):
                if z in seen:
                    problems.append("coincident coordinates: vertices %d and %d both have zeta=%s"
                                    % (seen[z], v, z))
                seen.setdefault(z, v)
        used = set()
        for t in self.tet_order:
            vs = self.tets[t]
            if len(set(vs)) != 4:
                problems.append("tetrahedron %s has repeated vertices %r" % (t, vs))
            for v in vs:
                if v not in self.vertices:
                    problems.append("tetrahedron %s uses unknown vertex %d" % (t, v))
            used.update(vs)
        for v in sorted(set(self.vertices) - used):
            problems.append("vertex %d belongs to no tetrahedron" % v)
        if not self.tets:
            problems.append("triangulation has no tetrahedra")
        if problems:
            return problems
        for fa, fb in self.gluing_pairs():
            la, lb = set(self.face_labels(fa)), set(self.face_labels(fb))
            if la != lb:
                problems.append("faces %r and %r are glued but carry vertices %s and %s"
                                % (fa, fb, sorted(la), sorted(lb)))
                continue
            if oriented_face_sign(self.tets[fa[0]], fa[1]) == oriented_face_sign(self.tets[fb[0]], fb[1]):
                problems.append("gluing of %r to %r does not reverse orientation" % (fa, fb))
        return problems

    # -- derived combinatorics ---------------------------------------------
    @cached_property
    def _derived(self):
        problems = self._structural_problems()
        if problems:
            raise TriangulationError(problems)
        uf = _UnionFind()
        for t in self.tets:
            for p, q in combinations(range(4), 2):
                uf.add((t, p, q))
        for fa, fb in self.gluing_pairs():
            smap = self.slot_map(fa, fb)
            for p, q in combinations(face_slots(fa[1]), 2):
                a, b = sorted((smap[p], smap[q]))
                uf.union((fa[0], p, q), (fb[0], a, b))
        boundary_faces = sorted((f for t in self.tets for f in ((t, p) for p in range(4))
                                 if f not in self.partner), key=self.face_sort_key)
        boundary_members = set()
        for t, p in boundary_faces:
            for a, b in combinations(face_slots(p), 2):
                boundary_members.add((t, a, b))
        groups = []
        for members in uf.groups().values():
            members = tuple(sorted(members, key=self.member_sort_key))
            labels = {self.member_labels(m) for m in members}
            if len(labels) != 1:
                raise TriangulationError("edge class %r joins different vertex pairs" % (members,))
            inner = not any(m in boundary_members for m in members)
            groups.append((labels.pop(), members, inner))

        # tags: reuse any tag carried by a member, then assign fresh ones
        tag_of_group = {}
        used_tags = set()
        for gi, (_, members, inner) in enumerate(groups):
            if inner:
                continue
            found = sorted(self.tags[m] for m in members if m in self.tags)
            if found:
                if found[0] in used_tags:
                    raise TriangulationError("boundary tag %d used by two edges" % found[0])
                tag_of_group[gi] = found[0]
                used_tags.add(found[0])
        next_tag = max(used_tags) + 1 if used_tags else 0
        untagged = sorted((gi for gi, g in enumerate(groups) if not g[2] and gi not in tag_of_group),
                          key=lambda gi: (groups[gi][0], self.member_sort_key(groups[gi][1][0])))
        for gi in untagged:
            tag_of_group[gi] = next_tag
            next_tag += 1

        bnd = sorted((gi for gi, g in enumerate(groups) if not g[2]), key=lambda gi: tag_of_group[gi])
        inn = sorted((gi for gi, g in enumerate(groups) if g[2]),
                     key=lambda gi: self.member_sort_key(groups[gi][1][0]))
        edges = []
        member_edge = {}
        for idx, gi in enumerate(bnd + inn):
            ends, members, inner = groups[gi]
            e = EdgeClass(idx, ends, members, inner, None if inner else tag_of_group[gi])
            edges.append(e)
            for m in members:
                member_edge[m] = idx

        boundary_vertices = {v for f in boundary_faces for v in self.face_labels(f)}
        inner_vertices = sorted(set(self.vertices) - boundary_vertices)

        # boundary components: faces sharing an edge class
        fuf = _UnionFind(boundary_faces)
        by_edge = {}
        for t, p in boundary_faces:
            for a, b in combinations(face_slots(p), 2):
                by_edge.setdefault(member_edge[(t, a, b)], []).append((t, p))
        for fs in by_edge.values():
            for f in fs[1:]:
                fuf.union(fs[0], f)
        comps = []
        for fs in fuf.groups().values():
            fs = tuple(sorted(fs, key=self.face_sort_key))
            verts = sorted({v for f in fs for v in self.face_labels(f)})
            es = sorted({member_edge[(f[0], a, b)] for f in fs for a, b in combinations(face_slots(f[1]), 2)})
            comps.append((fs, verts, es))
        comps.sort(key=lambda c: self.face_sort_key(c[0][0]))
        components = [BoundaryComponent(i, c[0], tuple(c[1]), tuple(c[2])) for i, c in enumerate(comps)]
        vertex_component = {}
        for c in components:
            for v in c.vertices:
                vertex_component.setdefault(v, c.index)
        return {
            "edges": edges,
            "member_edge": member_edge,
            "boundary_faces": boundary_faces,
            "inner_vertices": inner_vertices,
            "boundary_vertices": sorted(boundary_vertices),
            "components": components,
            "vertex_component": vertex_component,
        }

    @property
    def edges(self) -> List[EdgeClass]:
        return self._derived["edges"]

    @property
    def inner_edges(self) -> List[EdgeClass]:
        return [e for e in self.edges if e.is_inner]

    @property
    def boundary_edges(self) -> List[EdgeClass]:
        return [e for e in self.edges if not e.is_inner]

    @property
    def inner_vertices(self) -> List[int]:
        return self._derived["inner_vertices"]

    @property
    def boundary_vertices(self) -> List[int]:
        return self._derived["boundary_vertices"]

    @property
    def boundary_faces(self) -> List[FaceKey]:
        return self._derived["boundary_faces"]

    @property
    def components(self) -> List[BoundaryComponent]:
        return self._derived["components"]

    def component_of(self, v: int) -> Optional[int]:
        return self._derived["vertex_component"].get(v)

    def edge_of(self, tet: str, s: int, t: int) -> EdgeClass:
        a, b = sorted((s, t))
        return self.edges[self._derived["member_edge"][(tet, a, b)]]

    def edge_by_tag(self, tag: int) -> EdgeClass:
        for e in self.boundary_edges:
            if e.tag == tag:
                return e
        raise KeyError("no boundary edge with tag %r" % (tag,))

    def tet_edges(self, tet: str) -> Dict[Tuple[int, int], EdgeClass]:
        """Edge class of each slot pair of ``tet``."""
        return {(p, q): self.edge_of(tet, p, q) for p, q in combinations(range(4), 2)}

    @property
    def boundary_tags(self) -> List[int]:
        return [e.tag for e in self.boundary_edges]

    def generator_id(self, e: EdgeClass) -> int:
        """Grassmann generator of an edge: its tag, or an id after all tags."""
        if not e.is_inner:
            return e.tag
        base = max(self.boundary_tags) + 1 if self.boundary_edges else 0
        return base + e.index

    def normalized_tags(self) -> Dict[Member, int]:
        return {e.members[0]: e.tag for e in self.boundary_edges}

    @property
    def marked_count(self) -> int:
        return len(self.inner_vertices) + len(self.tets) - len(self.inner_edges)

    # -- validation ----------------------------------------------------------
    def validate(self) -> Diagnostics:
        """Check all manifold conditions; raise TriangulationError listing the violations."""
        derived = self._derived
        problems = []
        tuf = _UnionFind(self.tets)
        for fa, fb in self.gluing_pairs():
            tuf.union(fa[0], fb[0])
        if len(tuf.groups()) > 1:
            problems.append("triangulation is not connected (%d pieces)" % len(tuf.groups()))
        problems.extend(self._vertex_link_problems())
        for c in derived["components"]:
            if len(c.vertices) < 4:
                problems.append("boundary component %d has only %d vertices" % (c.index, len(c.vertices)))
            if 3 * len(c.faces) != 2 * len(c.edges):
                problems.append("boundary component %d is not a closed surface" % c.index)
        d = self.diagnostics()
        if not (d.N1_inner <= d.N0_inner + d.N3 <= d.N1):
            problems.append("edge count inequality fails: %d <= %d <= %d"
                            % (d.N1_inner, d.N0_inner + d.N3, d.N1))
        strict = d.N1_inner < d.N0_inner + d.N3 < d.N1
        equal = d.N1_inner == d.N0_inner + d.N3 == d.N1
        if d.m and not strict:
            problems.append("edge count inequality should be strict with nonempty boundary")
        if not d.m and not equal:
            problems.append("edge count inequality should be an equality for a closed manifold")
        if problems:
            raise TriangulationError(problems)
        return d

    def diagnostics(self) -> Diagnostics:
        return Diagnostics(
            N0=len(self.vertices), N1=len(self.edges), N3=len(self.tets),
            N0_inner=len(self.inner_vertices), N1_inner=len(self.inner_edges),
            m=len(self.components), marked=self.marked_count,
            boundary_chi=[c.euler_characteristic for c in self.components])

    def _vertex_link_problems(self) -> List[str]:
        problems = []
        corners: Dict[int, List[Tuple[str, int]]] = {}
        for t, vs in self.tets.items():
            for s, v in enumerate(vs):
                corners.setdefault(v, []).append((t, s))
        edges_at = {}
        for e in self.edges:
            for v in e.endpoints:
                edges_at[v] = edges_at.get(v, 0) + 1
        for v, cs in sorted(corners.items()):
            uf = _UnionFind(cs)
            link_edges = 0.0
            boundary_link_edges = 0
            for t, s in cs:
                for p in range(4):
                    if p == s:
                        continue
                    f = (t, p)
                    g = self.partner.get(f)
                    if g is None:
                        boundary_link_edges += 1
                    else:
                        link_edges += 0.5
                        uf.union((t, s), (g[0], self.tets[g[0]].index(v)))
            n_edges = int(link_edges) + boundary_link_edges
            chi = edges_at.get(v, 0) - n_edges + len(cs)
            pieces = len(uf.groups())
            if pieces != 1:
                problems.append("link of vertex %d is disconnected (%d pieces)" % (v, pieces))
            elif boundary_link_edges == 0 and chi != 2:
                problems.append("link of inner vertex %d is not a sphere (chi=%d)" % (v, chi))
            elif boundary_link_edges and chi != 1:
                problems.append("link of boundary vertex %d is not a disk (chi=%d)" % (v, chi))
        return problems

    def is_valid(self) -> bool:
        try:
            self.validate()
        except TriangulationError:
            return False
        return True

    # -- stars and surfaces -------------------------------------------------
    def edge_star(self, e: EdgeClass) -> List[Tuple[str, Tuple[int, int, int, int]]]:
        """Tetrahedra around ``e`` in cyclic (inner) or path (boundary) order.

        Each tetrahedron comes with its vertices reordered by an even
        permutation so that the first two are the endpoints of ``e``.
        """
        i, j = e.endpoints
        member_set = {m[0]: m for m in e.members}
        if len(member_set) != len(e.members):
            raise TriangulationError("edge %d meets a tetrahedron twice" % e.index)

        def faces_along(t):
            vs = self.tets[t]
            return [(t, s) for s in range(4) if vs[s] not in (i, j)]

        start = min(member_set, key=self.tet_sort_key)
        if not e.is_inner:
            for t in sorted(member_set, key=self.tet_sort_key):
                if any(f not in self.partner for f in faces_along(t)):
                    start = t
                    break
        order = [start]
        prev_face = None
        if not e.is_inner:
            prev_face = next(f for f in faces_along(start) if f not in self.partner)
        else:
            prev_face = faces_along(start)[0]
        cur = start
        while True:
            out_face = next(f for f in faces_along(cur) if f != prev_face)
            nxt = self.partner.get(out_face)
            if nxt is None or nxt[0] == start:
                break
            order.append(nxt[0])
            prev_face = nxt
            cur = nxt[0]
        if len(order) != len(member_set):
            raise TriangulationError("star of edge %d is not a single cycle or path" % e.index)
        return [(t, even_order(self.tets[t], i, j)) for t in order]

    def boundary_surface(self) -> List[dict]:
        out = []
        for c in self.components:
            out.append({
                "component": c.index,
                "vertices": list(c.vertices),
                "edges": [self.edges[k].tag for k in c.edges],
                "faces": [list(f) for f in c.faces],
                "n0": len(c.vertices), "n1": len(c.edges), "n2": len(c.faces),
                "chi": c.euler_characteristic,
            })
        return out

    def boundary_face_edges(self, f: FaceKey) -> List[EdgeClass]:
        return [self.edge_of(f[0], a, b) for a, b in combinations(face_slots(f[1]), 2)]

    # -- identity ------------------------------------------------------------
    def signature(self):
        """Label-level description used to compare triangulations up to tet renaming."""
        def canon(vs):
            best = None
            for a, b in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
                for first, second in ((vs[a], vs[b]), (vs[b], vs[a])):
                    cand = even_order(vs, first, second)
                    if best is None or cand < best:
                        best = cand
            return best
        tets = sorted(canon(vs) for vs in self.tets.values())
        glued = sorted(tuple(sorted((tuple(sorted(self.face_labels(fa))), tuple(sorted(self.face_labels(fb))))))
                       for fa, fb in self.gluing_pairs())
        return (tuple(sorted(self.vertices.items())), tuple(tets), tuple(glued))

    def __repr__(self):
        return "Triangulation(%s%d vertices, %d tets)" % (
            (self.name + ": ") if self.name else "", len(self.vertices), len(self.tets))


# -- JSON file format --------------------------------------------------------

def _fmt_fraction(z: Fraction) -> str:
    return str(z.numerator) if z.denominator == 1 else "%d/%d" % (z.numerator, z.denominator)


def from_dict(doc: dict, name=None) -> Triangulation:
    """Build a triangulation from the JSON document structure."""
    problems = []
    try:
        vertices = {int(v["id"]): Fraction(str(v["zeta"])) for v in doc["vertices"]}
        tets = {str(t["id"]): tuple(int(x) for x in t["vertices"]) for t in doc["tetrahedra"]}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise TriangulationError("malformed vertices/tetrahedra: %s" % (exc,))
    if len(vertices) != len(doc["vertices"]):
        problems.append("duplicate vertex id")
    if len(tets) != len(doc["tetrahedra"]):
        problems.append("duplicate tetrahedron id")
    gl = doc.get("gluings", [])
    pairs = []
    if gl == "by-shared-faces":
        by_labels = {}
        for t in sorted(tets, key=natural_key):
            for p in range(4):
                key = frozenset(tets[t][s] for s in face_slots(p))
                by_labels.setdefault(key, []).append((t, p))
        for key, faces in sorted(by_labels.items(), key=lambda kv: sorted(kv[0])):
            if len(faces) == 2:
                pairs.append(tuple(faces))
            elif len(faces) > 2:
                problems.append("face %s is shared by %d tetrahedra; gluing is ambiguous"
                                % (sorted(key), len(faces)))
    else:
        for k, g in enumerate(gl):
            try:
                ta, sa = str(g["a"]["tet"]), [int(s) for s in g["a"]["slots"]]
                tb, sb = str(g["b"]["tet"]), [int(s) for s in g["b"]["slots"]]
            except (KeyError, TypeError, ValueError) as exc:
                problems.append("gluing #%d is malformed: %s" % (k, exc))
                continue
            if ta not in tets or tb not in tets:
                problems.append("gluing #%d refers to an unknown tetrahedron" % k)
                continue
            if len(sa) != 3 or len(sb) != 3 or len(set(sa)) != 3 or len(set(sb)) != 3 \
                    or not set(sa) <= {0, 1, 2, 3} or not set(sb) <= {0, 1, 2, 3}:
                problems.append("gluing #%d: slots must be three distinct corners 0-3" % k)
                continue
            for x, y in zip(sa, sb):
                if tets[ta][x] != tets[tb][y]:
                    problems.append("gluing #%d: slot %d of %s (vertex %d) meets slot %d of %s (vertex %d)"
                                    % (k, x, ta, tets[ta][x], y, tb, tets[tb][y]))
                    break
            else:
                pairs.append(((ta, ({0, 1, 2, 3} - set(sa)).pop()), (tb, ({0, 1, 2, 3} - set(sb)).pop())))
    tags = {}
    for k, item in enumerate(doc.get("boundary_tags", [])):
        try:
            s, t = sorted(int(x) for x in item["slots"])
            tags[(str(item["tet"]), s, t)] = int(item["tag"])
        except (KeyError, TypeError, ValueError) as exc:
            problems.append("boundary tag #%d is malformed: %s" % (k, exc))
    if problems:
        raise TriangulationError(problems)
    return Triangulation(vertices, tets, pairs, tags=tags, name=name or doc.get("name"))


def to_dict(t: Triangulation) -> dict:
    doc = {
        "vertices": [{"id": v, "zeta": _fmt_fraction(z)} for v, z in sorted(t.vertices.items())],
        "tetrahedra": [{"id": k, "vertices": list(t.tets[k])} for k in t.tet_order],
        "gluings": [],
    }
    if t.name:
        doc["name"] = t.name
    for fa, fb in t.gluing_pairs():
        sa = list(face_slots(fa[1]))
        smap = t.slot_map(fa, fb)
        doc["gluings"].append({"a": {"tet": fa[0], "slots": sa},
                               "b": {"tet": fb[0], "slots": [smap[s] for s in sa]}})
    doc["boundary_tags"] = [{"tet": m[0], "slots": [m[1], m[2]], "tag": tag}
                            for m, tag in sorted(t.normalized_tags().items(), key=lambda kv: kv[1])]
    return doc


def load(path, name=None) -> Triangulation:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TriangulationError("%s: invalid JSON at line %d column %d: %s"
                                     % (path, exc.lineno, exc.colno, exc.msg))
    return from_dict(doc, name=name)


def dump(t: Triangulation, path):
    with open(path, "w") as fh:
        json.dump(to_dict(t), fh, indent=1)
