"""Find vertex names and edge tags for the searched solid torus that reproduce
the closed-form generating function

    1/2 z13^2 z24^2 (a5 - a6)(a7 - a8)
        (z12 z34 (a1 + a3) - z13 z24 (a5 + a7) + z14 z23 (a9 + a11))
        (z12 z34 (a2 + a4) - z13 z24 (a5 + a7) + z14 z23 (a10 + a12))

exactly up to sign.  Edges ij carry the tag pair: 12 -> {1,2}, 34 -> {3,4},
13 -> {5,6}, 24 -> {7,8}, 14 -> {9,10}, 23 -> {11,12}.

Usage: python3 tools/solid_torus_labels.py
"""

import itertools
import sys
from fractions import Fraction

from fermionic_tqft.genfun import generating_function
from fermionic_tqft.grassmann import GrassmannElement, eq_up_to_sign
from fermionic_tqft.triangulation import Triangulation

from solid_torus_search import ZETA, candidates, is_solid_torus, tets

PAIRS = {(1, 2): (1, 2), (3, 4): (3, 4), (1, 3): (5, 6), (2, 4): (7, 8),
         (1, 4): (9, 10), (2, 3): (11, 12)}


def closed_form(z):
    def d(i, j):
        return Fraction(z[i] - z[j])

    def lin(c):
        return GrassmannElement.linear(c)

    m1 = lin({5: 1, 6: -1})
    m2 = lin({7: 1, 8: -1})
    c12, c13, c14 = d(1, 2) * d(3, 4), d(1, 3) * d(2, 4), d(1, 4) * d(2, 3)
    f1 = lin({1: c12, 3: c12, 5: -c13, 7: -c13, 9: c14, 11: c14})
    f2 = lin({2: c12, 4: c12, 5: -c13, 7: -c13, 10: c14, 12: c14})
    return (m1 * m2 * f1 * f2) * (Fraction(1, 2) * d(1, 3) ** 2 * d(2, 4) ** 2)


def relabel(gl, sigma):
    ts = {k: tuple(sigma[v] for v in vs) for k, vs in tets().items()}
    return Triangulation(ZETA, ts, gl)


def main():
    gl = next(g for g in candidates() if is_solid_torus(Triangulation(ZETA, tets(), g)))
    target = closed_form(ZETA)
    for perm in itertools.permutations((1, 2, 3, 4)):
        sigma = dict(zip((1, 2, 3, 4), perm))
        t = relabel(gl, sigma)
        by_pair = {}
        for e in t.boundary_edges:
            by_pair.setdefault(tuple(sorted(e.endpoints)), []).append(e)
        if any(len(v) != 2 for v in by_pair.values()):
            continue
        keys = sorted(by_pair)
        for flips in itertools.product((0, 1), repeat=6):
            tags = {}
            for key, flip in zip(keys, flips):
                e1, e2 = by_pair[key]
                if flip:
                    e1, e2 = e2, e1
                tags[e1.members[0]] = PAIRS[key][0]
                tags[e2.members[0]] = PAIRS[key][1]
            tt = Triangulation(ZETA, t.tets, gl, tags)
            if eq_up_to_sign(generating_function(tt).element, target):
                print("sigma", sigma)
                print("tets", tt.tets)
                print("gluings", gl)
                print("tags", tags)
                return 0
    print("no labeling matches")
    return 1


if __name__ == "__main__":
    sys.exit(main())
