"""Builtin example manifolds.

Every constructor takes an optional coordinate assignment ``{vertex: zeta}``
for the four base vertices 1..4; defaults are ``0, 1, 3, 7``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from .grassmann import GrassmannElement
from .surgery import glue_faces, pachner_14, pachner_23
from .triangulation import Triangulation

DEFAULT_ZETAS = {1: Fraction(0), 2: Fraction(1), 3: Fraction(3), 4: Fraction(7)}


def _zetas(zetas):
    z = dict(DEFAULT_ZETAS)
    if zetas is not None:
        z.update({int(k): Fraction(v) for k, v in dict(zetas).items()})
    return z


def single_tetrahedron(zetas=None) -> Triangulation:
    return Triangulation(_zetas(zetas), {"t1": (1, 2, 3, 4)}, name="tet")


def two_tetrahedron_sphere(zetas=None) -> Triangulation:
    """S^3 as two tetrahedra on the same four vertices glued face to face."""
    gl = [(("t1", p), ("t2", (1, 0, 2, 3)[p])) for p in range(4)]
    return Triangulation(_zetas(zetas), {"t1": (1, 2, 3, 4), "t2": (2, 1, 3, 4)}, gl, name="s3")


def refined_sphere(zetas=None) -> Triangulation:
    """S^3 after a 1-4 move, a 2-3 move and another 1-4 move (9 tetrahedra)."""
    t = pachner_14(two_tetrahedron_sphere(zetas), "t1")
    t = pachner_23(t, t.gluing_pairs()[0][0])
    t = pachner_14(t, t.tet_order[-1])
    return t.replace(name="s3-big")


# Six tetrahedra on the vertices 1..4; the boundary is a torus with four
# vertices and twelve edges, two edges joining each pair of vertices.  The
# construction collapses onto a circle.  The circles formed by edges 5, 6
# (ends 1, 3) and by edges 7, 8 (ends 2, 4) bound discs; the other
# two-edge circles do not.
_ST_TETS = {"p0": (1, 3, 2, 4), "p1": (1, 3, 2, 4), "p2": (1, 3, 2, 4), "p3": (1, 3, 2, 4),
            "n0": (3, 1, 2, 4), "n1": (3, 1, 2, 4)}
_ST_GLUINGS = [(("p0", 0), ("n0", 1)), (("p1", 0), ("n1", 1)), (("p0", 1), ("n0", 0)),
               (("p2", 1), ("n1", 0)), (("p1", 2), ("n0", 2)), (("p3", 2), ("n1", 2)),
               (("p2", 3), ("n0", 3)), (("p3", 3), ("n1", 3))]
_ST_TAGS = {("n0", 1, 2): 1, ("p1", 0, 2): 2, ("p2", 1, 3): 3, ("n0", 0, 3): 4,
            ("n0", 0, 1): 5, ("p0", 0, 1): 6, ("n1", 2, 3): 7, ("p3", 2, 3): 8,
            ("n1", 1, 3): 9, ("n0", 1, 3): 10, ("n0", 0, 2): 11, ("n1", 0, 2): 12}

MERIDIAN_PAIRS = ((5, 6), (7, 8))
PARALLEL_PAIRS = ((1, 2), (3, 4), (9, 10), (11, 12))


def solid_torus(zetas=None) -> Triangulation:
    return Triangulation(_zetas(zetas), _ST_TETS, _ST_GLUINGS, _ST_TAGS, name="solid-torus")


def solid_torus_factored(zetas=None) -> Tuple[Fraction, list]:
    """The solid-torus generating function as ``(scale, [four degree-one factors])``.

    ``scale * f1 f2 f3 f4`` with ``f1 = a5 - a6``, ``f2 = a7 - a8`` and two
    six-term factors of tetrahedron-function shape.
    """
    z = _zetas(zetas)

    def d(i, j):
        return z[i] - z[j]

    c12, c13, c14 = d(1, 2) * d(3, 4), d(1, 3) * d(2, 4), d(1, 4) * d(2, 3)
    lin = GrassmannElement.linear
    factors = [
        lin({5: 1, 6: -1}),
        lin({7: 1, 8: -1}),
        lin({1: c12, 3: c12, 5: -c13, 7: -c13, 9: c14, 11: c14}),
        lin({2: c12, 4: c12, 5: -c13, 7: -c13, 10: c14, 12: c14}),
    ]
    return Fraction(1, 2) * d(1, 3) ** 2 * d(2, 4) ** 2, factors


def solid_torus_closed_form(zetas=None) -> GrassmannElement:
    scale, factors = solid_torus_factored(zetas)
    out = GrassmannElement.constant(scale)
    for f in factors:
        out = out * f
    return out


# A meridian of the first copy goes to a non-meridian circle of the second.
TORUS_GLUING_MAP = {1: 1, 2: 3, 3: 2, 4: 4}


def solid_torus_pair(zetas=None):
    """Two solid tori ready to be glued along their boundaries.

    Returns ``(M1, M2, vertex_map)``; ``M2`` carries the coordinates moved
    along ``vertex_map`` so that matched vertices agree.
    """
    z = _zetas(zetas)
    m1 = solid_torus(z)
    z2 = {TORUS_GLUING_MAP[v]: x for v, x in z.items()}
    m2 = Triangulation(z2, _ST_TETS, _ST_GLUINGS, _ST_TAGS, name="solid-torus'")
    return m1, m2, dict(TORUS_GLUING_MAP)


def pretzel_pieces(zetas=None, fifth=Fraction(23, 2)):
    """Two solid tori and the data gluing them over one boundary triangle.

    Returns ``(M1, M2, face, vertex_map)``: the face of M1 is glued to the
    same face of M2 with two vertices swapped; the vertex of M2 off the
    triangle gets the coordinate ``fifth``.
    """
    z = _zetas(zetas)
    m1 = solid_torus(z)
    face = m1.boundary_faces[0]
    a, b, c = m1.face_labels(face)
    (d,) = set(z) - {a, b, c}
    vmap = {a: b, b: a, c: c}
    z2 = {b: z[a], a: z[b], c: z[c], d: Fraction(fifth)}
    m2 = Triangulation(z2, _ST_TETS, _ST_GLUINGS, _ST_TAGS, name="solid-torus'")
    return m1, m2, face, vmap


def pretzel(zetas=None) -> Triangulation:
    """Solid pretzel: two solid tori glued over one boundary triangle."""
    m1, m2, face, vmap = pretzel_pieces(zetas)
    t, _ = glue_faces(m1, m2, [(face, face)], vmap, name="pretzel")
    return t


@dataclass(frozen=True)
class ExampleManifold:
    name: str
    build: Callable[..., Triangulation]
    description: str
    expected: Optional[Dict[str, object]] = None


EXAMPLES = {
    "tet": ExampleManifold("tet", single_tetrahedron, "single tetrahedron (a ball)",
                           {"N0": 4, "N1": 6, "N3": 1, "marked": 1}),
    "s3": ExampleManifold("s3", two_tetrahedron_sphere, "two-tetrahedron 3-sphere",
                          {"N0": 4, "N1": 6, "N3": 2, "marked": 0, "invariant": 1}),
    "s3-big": ExampleManifold("s3-big", refined_sphere, "3-sphere after refinement moves",
                              {"marked": 0, "invariant": 1}),
    "solid-torus": ExampleManifold("solid-torus", solid_torus,
                                   "six-tetrahedron solid torus, 4-vertex boundary torus",
                                   {"N0": 4, "N3": 6, "marked": 4,
                                    "meridians": MERIDIAN_PAIRS}),
    "pretzel": ExampleManifold("pretzel", pretzel,
                               "two solid tori glued over one boundary triangle",
                               {"N0": 5, "N3": 12, "marked": 8}),
}


def example(name: str, zetas=None) -> Triangulation:
    try:
        ex = EXAMPLES[name]
    except KeyError:
        raise KeyError("unknown example %r (choose from %s)" % (name, ", ".join(EXAMPLES)))
    return ex.build(zetas)
