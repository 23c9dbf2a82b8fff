"""Slow, literal reference implementations used to check the fast code.

Nothing here imports the package's algorithms; they work from definitions.
"""

from fractions import Fraction
from itertools import combinations, permutations


def perm_parity(p):
    """+1 or -1 by counting inversions."""
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(perm_parity(p))
        for i in range(n):
            term *= rows[i][p[i]]
            if not term:
                break
        total += term
    return total


# -- Grassmann algebra as dict {tuple of generators in *any* order: coeff} -----------------

def canon_word(word):
    """Sort a word of generators by adjacent swaps; None if a generator repeats."""
    if len(set(word)) != len(word):
        return None, 0
    return tuple(sorted(word)), perm_parity([sorted(word).index(g) for g in word])


def gmul(x, y):
    out = {}
    for mx, cx in x.items():
        for my, cy in y.items():
            mono, s = canon_word(mx + my)
            if mono is None:
                continue
            out[mono] = out.get(mono, 0) + s * cx * cy
    return {m: c for m, c in out.items() if c}


def berezin_literal(x, g):
    """Per monomial: drop if g absent, else move g to the right end and strip it."""
    out = {}
    for mono, c in x.items():
        if g not in mono:
            continue
        k = mono.index(g)
        # g passes over len(mono) - 1 - k generators on its way right
        s = -1 if (len(mono) - 1 - k) % 2 else 1
        rest = mono[:k] + mono[k + 1:]
        out[rest] = out.get(rest, 0) + s * c
    return {m: c for m, c in out.items() if c}


def genfun_leibniz(rows, ids=None):
    """Sum over row subsets of size #cols of the Leibniz determinant times the monomial."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    ids = list(range(1, n + 1)) if ids is None else ids
    out = {}
    for C in combinations(range(n), m):
        d = leibniz_det([rows[k] for k in C])
        if d:
            mono, s = canon_word(tuple(ids[k] for k in C))
            out[mono] = out.get(mono, 0) + s * d
    return {k: v for k, v in out.items() if v}


def tetfun_literal(z, names):
    """The six-term tetrahedron function written out by hand.

    ``z`` maps vertex -> coordinate, ``names`` maps frozenset({u, v}) -> generator id;
    vertices in orientation order ``i, j, k, l`` are the keys of ``z`` in insertion order.
    """
    i, j, k, l = list(z)

    def d(a, b):
        return Fraction(z[a]) - Fraction(z[b])

    def a(u, v):
        return names[frozenset((u, v))]

    out = {}
    for coef, pairs in ((d(i, j) * d(k, l), ((i, j), (k, l))),
                        (-d(i, k) * d(j, l), ((i, k), (j, l))),
                        (d(i, l) * d(j, k), ((i, l), (j, k)))):
        for u, v in pairs:
            key = (a(u, v),)
            out[key] = out.get(key, 0) + coef
    return {m: c for m, c in out.items() if c}


def lemma1_holds(d) -> bool:
    """Edge-count inequalities with strictness exactly when the boundary is nonempty."""
    lo, mid, hi = d.N1_inner, d.N0_inner + d.N3, d.N1
    if d.m > 0:
        return lo < mid < hi
    return lo == mid == hi
