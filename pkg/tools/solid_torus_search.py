"""Search six-tetrahedron triangulations on four vertices for a solid torus.

All tetrahedra use the labels 1..4; four carry the orientation (1,2,3,4) and
two the opposite one.  For every face triple two of the four positive faces
are glued to the two negative ones and the rest stay on the boundary.  A
candidate is kept when it validates, its boundary is a single torus, it
collapses onto a graph and H1 has rank one.

Usage: python3 tools/solid_torus_search.py [--limit N]
"""

import argparse
import itertools
import sys

from fermionic_tqft.homology import betti_numbers, collapses_to_graph
from fermionic_tqft.triangulation import Triangulation, TriangulationError

POS = ["p0", "p1", "p2", "p3"]
NEG = ["n0", "n1"]
ZETA = {1: 0, 2: 1, 3: 3, 4: 7}


def tets():
    out = {k: (1, 2, 3, 4) for k in POS}
    out.update({k: (2, 1, 3, 4) for k in NEG})
    return out


def slot(k, missing):
    return tets()[k].index(missing)


def choices():
    # (which positive tet is glued to n0, which to n1)
    return list(itertools.permutations(POS, 2))


def candidates():
    per = choices()
    for combo in itertools.product(per, repeat=4):
        gl = []
        for missing, (a, b) in zip((1, 2, 3, 4), combo):
            gl.append(((a, slot(a, missing)), ("n0", slot("n0", missing))))
            gl.append(((b, slot(b, missing)), ("n1", slot("n1", missing))))
        yield gl


def is_solid_torus(t):
    try:
        d = t.validate()
    except TriangulationError:
        return False
    if d.m != 1 or d.boundary_chi != [0] or t.inner_vertices:
        return False
    return collapses_to_graph(t) and betti_numbers(t)[1] == 1


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=1)
    args = ap.parse_args(argv)
    found = 0
    for gl in candidates():
        t = Triangulation(ZETA, tets(), gl)
        if is_solid_torus(t):
            print(gl)
            found += 1
            if found >= args.limit:
                break
    return 0 if found else 1


if __name__ == "__main__":
    sys.exit(main())
