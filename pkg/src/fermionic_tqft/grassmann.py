"""Sparse Grassmann algebra over the rationals with Berezin integration.

An element is a map from strictly increasing tuples of integer generator ids
to nonzero Fractions.  The generator ids are opaque here; the triangulation
code maps edges to ids so that the id order is the edge order.
"""

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact_linalg import scalar

Monomial = Tuple[int, ...]


def _merge_sign(x: Monomial, y: Monomial):
    """Sorted concatenation of two monomials and its sign, or (None, 0)."""
    out = []
    sign = 1
    i = j = 0
    nx = len(x)
    while i < nx and j < len(y):
        if x[i] < y[j]:
            out.append(x[i])
            i += 1
        elif x[i] > y[j]:
            # y[j] jumps over the remaining nx - i generators of x
            if (nx - i) & 1:
                sign = -sign
            out.append(y[j])
            j += 1
        else:
            return None, 0
    out.extend(x[i:])
    out.extend(y[j:])
    return tuple(out), sign


def _sort_sign(seq: Sequence[int]):
    """Sort a duplicate-free sequence and return it with the permutation sign."""
    seq = list(seq)
    sign = 1
    for i in range(1, len(seq)):
        k = i
        while k > 0 and seq[k - 1] > seq[k]:
            seq[k - 1], seq[k] = seq[k], seq[k - 1]
            sign = -sign
            k -= 1
    return tuple(seq), sign


class GrassmannElement:
    """Immutable element of a Grassmann algebra in canonical monomial form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Fraction] = None, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            clean: Dict[Monomial, Fraction] = {}
            for mono, c in (terms or {}).items():
                mono_sorted, sign = _sort_sign(mono)
                if len(set(mono_sorted)) != len(mono_sorted):
                    continue
                c = scalar(c) * sign
                v = clean.get(mono_sorted, 0) + c
                if v:
                    clean[mono_sorted] = v
                else:
                    clean.pop(mono_sorted, None)
            self.terms = clean
        self._hash = None

    @classmethod
    def constant(cls, c) -> "GrassmannElement":
        c = scalar(c)
        return cls({(): c} if c else {}, _trusted=True)

    @classmethod
    def generator(cls, g: int, coeff=1) -> "GrassmannElement":
        c = scalar(coeff)
        return cls({(g,): c} if c else {}, _trusted=True)

    @classmethod
    def linear(cls, coeffs: Dict[int, Fraction]) -> "GrassmannElement":
        """Degree-one element ``sum coeffs[g] * a[g]``."""
        return cls({(g,): scalar(c) for g, c in coeffs.items() if c}, _trusted=True)

    # -- basic queries ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def generators(self) -> set:
        return {g for mono in self.terms for g in mono}

    def degrees(self) -> set:
        return {len(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, mono: Iterable[int]) -> Fraction:
        """Coefficient of the product of ``mono`` taken in the listed order."""
        mono_sorted, sign = _sort_sign(tuple(mono))
        return sign * self.terms.get(mono_sorted, Fraction(0))

    def scalar_part(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GrassmannElement(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            c = scalar(other)
            if not c:
                return GrassmannElement()
            return GrassmannElement({m: v * c for m, v in self.terms.items()}, _trusted=True)
        return mul(self, other)

    def __rmul__(self, other):
        # only scalars reach here
        return self.__mul__(other)

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            try:
                other = GrassmannElement.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return "GrassmannElement(%s)" % render(self)

    def __str__(self):
        return render(self)


def mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    out: Dict[Monomial, Fraction] = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            m, s = _merge_sign(mx, my)
            if m is None:
                continue
            v = out.get(m, 0) + (cx * cy if s > 0 else -cx * cy)
            if v:
                out[m] = v
            else:
                del out[m]
    return GrassmannElement(out, _trusted=True)


def berezin(x: GrassmannElement, g: int) -> GrassmannElement:
    """Integral of ``x`` over ``da[g]``.

    ``g`` is moved to the right end of each monomial containing it (with the
    sign of the transpositions) and removed; monomials without ``g`` drop out.
    """
    out = {}
    for mono, c in x.terms.items():
        try:
            p = mono.index(g)
        except ValueError:
            continue
        if (len(mono) - 1 - p) & 1:
            c = -c
        out[mono[:p] + mono[p + 1:]] = c
    return GrassmannElement(out, _trusted=True)


def berezin_multi(x: GrassmannElement, gens: Sequence[int]) -> GrassmannElement:
    """Iterated integral; ``gens[0]`` is the differential applied first."""
    if len(set(gens)) != len(gens):
        raise ValueError("duplicate generator in the integration list")
    for g in gens:
        x = berezin(x, g)
        if not x:
            break
    return x


def identify_generators(x: GrassmannElement, g: int, h: int) -> GrassmannElement:
    """Substitute ``a[g] := a[h]``."""
    if g == h:
        raise ValueError("cannot identify a generator with itself")
    out: Dict[Monomial, Fraction] = {}
    for mono, c in x.terms.items():
        if g in mono:
            if h in mono:
                continue
            mono, s = _sort_sign(tuple(h if k == g else k for k in mono))
            c = c * s
        v = out.get(mono, 0) + c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return GrassmannElement(out, _trusted=True)


def rename_generators(x: GrassmannElement, mapping: Dict[int, int]) -> GrassmannElement:
    """Apply an injective relabelling of generators (unmapped ids are kept)."""
    out: Dict[Monomial, Fraction] = {}
    for mono, c in x.terms.items():
        new, s = _sort_sign(tuple(mapping.get(k, k) for k in mono))
        if len(set(new)) != len(new):
            raise ValueError("generator renaming is not injective on %r" % (mono,))
        out[new] = out.get(new, 0) + c * s
    return GrassmannElement(out)


def eq_up_to_sign(x: GrassmannElement, y: GrassmannElement) -> bool:
    return x == y or x == -y


def relative_sign(x: GrassmannElement, y: GrassmannElement) -> int:
    """+1 if x == y, -1 if x == -y (and nonzero), 0 otherwise."""
    if x == y:
        return 1
    if x == -y:
        return -1
    return 0


def sign_normalized(x: GrassmannElement) -> GrassmannElement:
    """The representative of ``{x, -x}`` whose leading term (canonical order) is positive."""
    terms = sorted_terms(x)
    if terms and terms[0][1] < 0:
        return -x
    return x


def product_integrate(factors: Sequence[GrassmannElement],
                      integrate: Sequence[int]) -> GrassmannElement:
    """Compute ``berezin_multi(factors[0] * ... * factors[-1], integrate)``.

    Each factor must be homogeneous.  A generator is integrated out as soon as
    the last factor containing it has been multiplied in, which keeps the
    intermediate elements small.  The result equals the naive evaluation
    exactly, sign included.
    """
    if len(set(integrate)) != len(integrate):
        raise ValueError("duplicate generator in the integration list")
    parity = []
    for f in factors:
        if not f:
            return GrassmannElement()
        degs = f.degrees()
        if len(degs) != 1:
            raise ValueError("product_integrate needs homogeneous factors")
        parity.append(next(iter(degs)) & 1)
    last = {}
    for t, f in enumerate(factors):
        for g in f.generators():
            last[g] = t
    if any(g not in last for g in integrate):
        return GrassmannElement()
    # every integration lowers the degree by one
    if sum(next(iter(f.degrees())) for f in factors) < len(integrate):
        return GrassmannElement()
    position = {g: i for i, g in enumerate(integrate)}
    schedule = sorted(integrate, key=lambda g: (last[g], position[g]))
    # sign of reordering anticommuting integration operators
    sign = 1
    order = [position[g] for g in schedule]
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    tail_parity = [0] * (len(factors) + 1)
    for t in range(len(factors) - 1, -1, -1):
        tail_parity[t] = tail_parity[t + 1] ^ parity[t]
    due: Dict[int, List[int]] = {}
    for g in schedule:
        due.setdefault(last[g], []).append(g)
    acc = GrassmannElement.constant(1)
    for t, f in enumerate(factors):
        acc = mul(acc, f)
        for g in due.get(t, ()):
            acc = berezin(acc, g)
            if tail_parity[t + 1]:
                sign = -sign
        if not acc:
            return acc
    return acc if sign > 0 else -acc


# -- text form -------------------------------------------------------------

def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def sorted_terms(x: GrassmannElement):
    return sorted(x.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))


def render(x: GrassmannElement) -> str:
    """``"3/2 * a[1]a[4] - 1 * a[2]a[3]"``; the empty element renders as ``"0"``."""
    if not x.terms:
        return "0"
    parts = []
    for i, (mono, c) in enumerate(sorted_terms(x)):
        body = "".join("a[%d]" % g for g in mono)
        mag = _fmt(abs(c))
        text = mag + (" * " + body if body else "")
        if i == 0:
            parts.append(("-" if c < 0 else "") + text)
        else:
            parts.append((" - " if c < 0 else " + ") + text)
    return "".join(parts)


_TERM = re.compile(r"^\s*(\d+(?:/\d+)?)\s*(?:\*\s*((?:a\[-?\d+\])+))?\s*$")


def parse(text: str) -> GrassmannElement:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return GrassmannElement()
    tokens = re.split(r"\s+([+-])\s+", text)
    first = tokens[0]
    sign = 1
    if first.startswith("-"):
        sign, first = -1, first[1:]
    pieces = [(sign, first)]
    for op, body in zip(tokens[1::2], tokens[2::2]):
        pieces.append((1 if op == "+" else -1, body))
    terms: Dict[Monomial, Fraction] = {}
    for s, body in pieces:
        m = _TERM.match(body)
        if not m:
            raise ValueError("cannot parse Grassmann term %r" % (body,))
        coeff = Fraction(m.group(1)) * s
        gens = tuple(int(g) for g in re.findall(r"a\[(-?\d+)\]", m.group(2) or ""))
        mono, ms = _sort_sign(gens)
        terms[mono] = terms.get(mono, 0) + coeff * ms
    return GrassmannElement(terms)


def to_json(x: GrassmannElement) -> list:
    return [{"edges": list(mono), "coeff": _fmt(c)} for mono, c in sorted_terms(x)]


def from_json(items: list) -> GrassmannElement:
    return GrassmannElement({tuple(it["edges"]): Fraction(it["coeff"]) for it in items})
