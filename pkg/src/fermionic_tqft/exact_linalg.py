"""Exact rational scalars and matrices indexed by labelled bases.

Every number in the package is a :class:`fractions.Fraction`.  Matrices are
stored sparsely as ``{(row_label, col_label): value}`` together with the
ordered row and column label lists, which fix the sign of every minor.
"""

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, NamedTuple, Sequence, Tuple

Scalar = Fraction


def scalar(value) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/7"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted: %r" % (value,))
    return Fraction(value)


# Canonical order of label kinds.  Alpha and beta share a rank so that they
# interleave per vertex (alpha before beta).
KIND_RANK = {
    "lie": 0,
    "dz": 1,
    "sway": 2,
    "dy": 3,
    "phi": 4,
    "alpha": 5,
    "beta": 5,
    "conj_sway": 6,
    "lie_dual": 7,
}
_ABC = {"a": 0, "b": 1, "c": 2}


class BasisLabel(NamedTuple):
    """One distinguished basis vector: a kind plus a kind-specific key.

    Keys are ``("a",)`` for Lie generators, ``(vertex,)`` for dz/alpha/beta,
    ``(component, "a")`` for sways, ``(tet_order,)`` for dy and
    ``(edge_index,)`` for phi.
    """

    kind: str
    key: tuple

    def sort_key(self):
        key = tuple(_ABC.get(k, k) if isinstance(k, str) else k for k in self.key)
        if self.kind in ("alpha", "beta"):
            return (KIND_RANK[self.kind], key, 0 if self.kind == "alpha" else 1)
        return (KIND_RANK[self.kind], key, 0)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "%s%s" % (self.kind, "".join("[%s]" % (k,) for k in self.key))


def canonical(labels: Iterable[BasisLabel]) -> List[BasisLabel]:
    return sorted(labels, key=BasisLabel.sort_key)


class LinalgError(ValueError):
    pass


class LabeledMatrix:
    """Sparse exact matrix whose rows and columns carry ordered labels."""

    __slots__ = ("row_labels", "col_labels", "entries", "_row_pos", "_col_pos")

    def __init__(self, row_labels: Sequence[Hashable], col_labels: Sequence[Hashable],
                 entries: Dict[Tuple[Hashable, Hashable], Fraction] = None):
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        self._row_pos = {r: i for i, r in enumerate(self.row_labels)}
        self._col_pos = {c: j for j, c in enumerate(self.col_labels)}
        if len(self._row_pos) != len(self.row_labels):
            raise LinalgError("duplicate row labels")
        if len(self._col_pos) != len(self.col_labels):
            raise LinalgError("duplicate column labels")
        clean = {}
        for (r, c), v in (entries or {}).items():
            if r not in self._row_pos or c not in self._col_pos:
                raise LinalgError("entry outside the label grid: %r" % ((r, c),))
            v = scalar(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], row_labels=None, col_labels=None):
        n = len(rows)
        m = len(rows[0]) if n else 0
        row_labels = list(range(n)) if row_labels is None else row_labels
        col_labels = list(range(m)) if col_labels is None else col_labels
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != m:
                raise LinalgError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(row_labels[i], col_labels[j])] = v
        return cls(row_labels, col_labels, entries)

    @property
    def shape(self):
        return len(self.row_labels), len(self.col_labels)

    def entry(self, r, c) -> Fraction:
        if r not in self._row_pos or c not in self._col_pos:
            raise LinalgError("unknown label pair %r" % ((r, c),))
        return self.entries.get((r, c), Fraction(0))

    def dense(self, rows=None, cols=None) -> List[List[Fraction]]:
        rows = self.row_labels if rows is None else rows
        cols = self.col_labels if cols is None else cols
        for r in rows:
            if r not in self._row_pos:
                raise LinalgError("unknown row label %r" % (r,))
        for c in cols:
            if c not in self._col_pos:
                raise LinalgError("unknown column label %r" % (c,))
        get = self.entries.get
        zero = Fraction(0)
        return [[get((r, c), zero) for c in cols] for r in rows]

    def transpose(self) -> "LabeledMatrix":
        return LabeledMatrix(self.col_labels, self.row_labels,
                             {(c, r): v for (r, c), v in self.entries.items()})

    def restrict(self, rows=None, cols=None) -> "LabeledMatrix":
        rows = self.row_labels if rows is None else rows
        cols = self.col_labels if cols is None else cols
        rs, cs = set(rows), set(cols)
        return LabeledMatrix(rows, cols, {k: v for k, v in self.entries.items()
                                          if k[0] in rs and k[1] in cs})

    def scaled(self, factor) -> "LabeledMatrix":
        factor = scalar(factor)
        return LabeledMatrix(self.row_labels, self.col_labels,
                             {k: v * factor for k, v in self.entries.items()})

    def __matmul__(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if self.col_labels != other.row_labels:
            if set(self.col_labels) != set(other.row_labels):
                raise LinalgError("inner label sets differ")
        by_row = {}
        for (k, c), v in other.entries.items():
            by_row.setdefault(k, []).append((c, v))
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return LabeledMatrix(self.row_labels, other.col_labels, out)

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, c) -> Dict[Hashable, Fraction]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def __eq__(self, other):
        return (isinstance(other, LabeledMatrix) and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels and self.entries == other.entries)

    def __repr__(self):
        return "LabeledMatrix(%dx%d, nnz=%d)" % (self.shape + (len(self.entries),))


def _to_integer_rows(rows: List[List[Fraction]]) -> Tuple[List[List[int]], Fraction]:
    """Scale every row to integers; returns the rows and the product of scales."""
    from math import lcm
    out, scale = [], Fraction(1)
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, v.denominator)
        out.append([int(v * den) for v in row])
        scale *= den
    return out, scale


def det_dense(rows: List[List[Fraction]]) -> Fraction:
    """Determinant by Bareiss fraction-free elimination on integerized rows.

    The pivot is the first nonzero entry of the column in row order.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LinalgError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a, scale = _to_integer_rows(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1]) / scale


def det(m: LabeledMatrix) -> Fraction:
    if len(m.row_labels) != len(m.col_labels):
        raise LinalgError("determinant of a non-square %dx%d matrix" % m.shape)
    return det_dense(m.dense())


def minor(m: LabeledMatrix, rows: Sequence, cols: Sequence) -> Fraction:
    """Determinant of the submatrix on ``rows`` x ``cols`` in the given order."""
    if len(rows) != len(cols):
        raise LinalgError("minor of a %dx%d selection" % (len(rows), len(cols)))
    if not rows:
        return Fraction(1)
    return det_dense(m.dense(rows, cols))


def rank_dense(rows: List[List[Fraction]]) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if f:
                f /= p
                ri, rr = a[i], a[rank]
                for j in range(c, ncols):
                    ri[j] -= f * rr[j]
        rank += 1
    return rank


def rank(m: LabeledMatrix) -> int:
    return rank_dense(m.dense())


def select_independent_rows(m: LabeledMatrix, candidate_rows: Sequence) -> list:
    """Greedy scan keeping a candidate row iff it raises the rank.

    Returns exactly ``len(m.col_labels)`` rows whose square submatrix is
    nonsingular; raises :class:`LinalgError` when the candidates are rank
    deficient.
    """
    ncols = len(m.col_labels)
    chosen = []
    # Row-reduced basis of the chosen rows, keyed by pivot column.
    basis: List[Tuple[int, List[Fraction]]] = []
    for r in candidate_rows:
        if len(chosen) == ncols:
            break
        vec = m.dense([r])[0]
        for piv, brow in basis:
            f = vec[piv]
            if f:
                vec = [x - f * y for x, y in zip(vec, brow)]
        piv = next((j for j, x in enumerate(vec) if x != 0), None)
        if piv is None:
            continue
        p = vec[piv]
        vec = [x / p for x in vec]
        new_basis = []
        for bp, brow in basis:
            f = brow[piv]
            if f:
                brow = [x - f * y for x, y in zip(brow, vec)]
            new_basis.append((bp, brow))
        basis = new_basis + [(piv, vec)]
        chosen.append(r)
    if len(chosen) != ncols:
        raise LinalgError("candidate rows have rank %d < %d columns" % (len(chosen), ncols))
    return chosen
