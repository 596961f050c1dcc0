"""Constant-coefficient exterior algebra over an ordered coframe e^1..e^n.

Index tuples are 1-based and strictly increasing. Metrics are given by the
Gram matrix of the frame vectors e_1..e_n; 1-forms then carry the inverse
Gram.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from .linalg import Matrix, format_scalar, is_positive_definite, parse_scalar, rational_sqrt


def permutation_sign(seq: Iterable[int]) -> int:
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    pos = {v: i for i, v in enumerate(sorted(seq))}
    perm = [pos[v] for v in seq]
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of e^a ^ e^b relative to e^(sorted a+b); 0 if they overlap."""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


def basis_tuples(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(1, n + 1), k))


class MultiIndexForm:
    """A form ``sum c_I e^I`` on an n-dimensional coframe."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Iterable[int], object] | None = None):
        self.n = n
        acc: dict[tuple[int, ...], Fraction] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if any(i < 1 or i > n for i in idx):
                raise ValueError(f"index out of range in {idx} for frame size {n}")
            if len(set(idx)) != len(idx):
                continue
            s = permutation_sign(idx)
            key = tuple(sorted(idx))
            acc[key] = acc.get(key, Fraction(0)) + s * Fraction(c)
        self.terms = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def basis(cls, n: int, *idx: int) -> MultiIndexForm:
        return cls(n, {idx: 1})

    @classmethod
    def one(cls, n: int) -> MultiIndexForm:
        return cls(n, {(): 1})

    @classmethod
    def from_vector(cls, n: int, k: int, vec) -> MultiIndexForm:
        return cls(n, dict(zip(basis_tuples(n, k), vec)))

    def to_vector(self, k: int) -> tuple[Fraction, ...]:
        degs = self.degrees()
        if degs and degs != {k}:
            raise ValueError(f"form is not homogeneous of degree {k}")
        return tuple(self.terms.get(t, Fraction(0)) for t in basis_tuples(self.n, k))

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    @property
    def degree(self) -> int:
        d = self.degrees()
        if len(d) != 1:
            if not d:
                raise ValueError("zero form has no degree")
            raise ValueError("form is not homogeneous")
        return next(iter(d))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, MultiIndexForm) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def _same_frame(self, other: MultiIndexForm):
        if self.n != other.n:
            raise ValueError(f"frame size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: MultiIndexForm) -> MultiIndexForm:
        self._same_frame(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, Fraction(0)) + v
        return MultiIndexForm(self.n, t)

    def __neg__(self):
        return MultiIndexForm(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return MultiIndexForm(self.n, {k: Fraction(c) * v for k, v in self.terms.items()})

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        return f"MultiIndexForm({format_form(self)!r})"

    def __str__(self):
        return format_form(self)


def wedge(a: MultiIndexForm, b: MultiIndexForm) -> MultiIndexForm:
    if a.n != b.n:
        raise ValueError(f"frame size mismatch: {a.n} vs {b.n}")
    out: dict[tuple[int, ...], Fraction] = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            s = merge_sign(i, j)
            if s:
                key = tuple(sorted(i + j))
                out[key] = out.get(key, Fraction(0)) + s * x * y
    return MultiIndexForm(a.n, out)


def contract(x_index: int, a: MultiIndexForm) -> MultiIndexForm:
    """Interior product with the frame vector e_{x_index}."""
    if not 1 <= x_index <= a.n:
        raise ValueError(f"contraction index {x_index} outside 1..{a.n}")
    out = {}
    for idx, c in a.terms.items():
        if x_index in idx:
            pos = idx.index(x_index)
            out[idx[:pos] + idx[pos + 1:]] = -c if pos % 2 else c
    return MultiIndexForm(a.n, out)


def contract_vector(v, a: MultiIndexForm) -> MultiIndexForm:
    """Interior product with the vector sum v_i e_i."""
    out = MultiIndexForm(a.n)
    for i, c in enumerate(v, start=1):
        if c:
            out = out + Fraction(c) * contract(i, a)
    return out


@dataclass(frozen=True)
class FramedMetric:
    """Gram matrix of the frame vectors plus an orientation permutation."""

    gram: Matrix
    orientation: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = self.gram.nrows
        if not self.orientation:
            object.__setattr__(self, "orientation", tuple(range(1, n + 1)))
        if sorted(self.orientation) != list(range(1, n + 1)):
            raise ValueError("orientation must be a permutation of 1..n")
        if not is_positive_definite(self.gram):
            raise ValueError("metric Gram is not positive definite")

    @classmethod
    def orthonormal(cls, n: int) -> FramedMetric:
        return cls(Matrix.identity(n))

    @classmethod
    def diagonal(cls, *entries) -> FramedMetric:
        return cls(Matrix.diag([Fraction(e) for e in entries]))

    @property
    def n(self) -> int:
        return self.gram.nrows

    @property
    def orientation_sign(self) -> int:
        return permutation_sign(self.orientation)

    def reversed(self) -> FramedMetric:
        o = self.orientation
        return FramedMetric(self.gram, (o[1], o[0]) + o[2:] if len(o) > 1 else o)

    @cached_property
    def det(self) -> Fraction:
        return self.gram.det()

    @cached_property
    def sqrt_det(self) -> Fraction | None:
        return rational_sqrt(self.det)

    @cached_property
    def cometric(self) -> Matrix:
        """Inner product on 1-forms."""
        return self.gram.inverse()

    def form_gram(self, k: int) -> Matrix:
        """Induced inner product on k-forms (compound matrix of the cometric)."""
        tuples = basis_tuples(self.n, k)
        c = self.cometric
        rows = []
        for a in tuples:
            rows.append([c.submatrix([i - 1 for i in a], [j - 1 for j in b]).det() if k else Fraction(1)
                         for b in tuples])
        return Matrix(rows, len(tuples))

    def inner(self, a: MultiIndexForm, b: MultiIndexForm) -> Fraction:
        if a.is_zero() or b.is_zero():
            return Fraction(0)
        k = a.degree
        g = self.form_gram(k)
        va, vb = a.to_vector(k), b.to_vector(k)
        return sum((x * y for x, y in zip(va, g.apply(vb))), Fraction(0))

    def volume_form(self) -> MultiIndexForm:
        if self.sqrt_det is None:
            raise ValueError("det of the metric is not a rational square; volume form is irrational")
        return MultiIndexForm(self.n, {tuple(range(1, self.n + 1)): self.orientation_sign * self.sqrt_det})


def hodge_star_unit(a: MultiIndexForm, m: FramedMetric) -> MultiIndexForm:
    """Hodge star divided by sqrt(det gram); rational for every metric."""
    n = m.n
    full = tuple(range(1, n + 1))
    out = MultiIndexForm(n)
    by_degree: dict[int, dict] = {}
    for idx, c in a.terms.items():
        by_degree.setdefault(len(idx), {})[idx] = c
    for k, terms in by_degree.items():
        g = m.form_gram(k)
        tuples = basis_tuples(n, k)
        vb = MultiIndexForm(n, terms).to_vector(k)
        coeffs = g.apply(vb)
        res = {}
        for I, c in zip(tuples, coeffs):
            if c:
                comp = tuple(i for i in full if i not in I)
                res[comp] = m.orientation_sign * merge_sign(I, comp) * c
        out = out + MultiIndexForm(n, res)
    return out


def hodge_star(a: MultiIndexForm, m: FramedMetric) -> MultiIndexForm:
    """Ordinary Hodge star, fixed by ``a ^ *b = <a, b> vol``."""
    if a.n != m.n:
        raise ValueError("frame size mismatch between form and metric")
    if m.sqrt_det is None:
        raise ValueError("det of the metric is not a rational square; the star is irrational")
    return m.sqrt_det * hodge_star_unit(a, m)


def transversal_star(g: MultiIndexForm, m: FramedMetric, chi: MultiIndexForm, p: int, q: int,
                     unit: bool = False) -> MultiIndexForm:
    """(-1)^{p(q-k)} * (g ^ chi) for a homogeneous k-form ``g``."""
    if g.is_zero():
        return MultiIndexForm(g.n)
    k = g.degree
    if k > q:
        raise ValueError(f"degree {k} exceeds codimension {q}")
    sign = -1 if (p * (q - k)) % 2 else 1
    star = hodge_star_unit if unit else hodge_star
    return sign * star(wedge(g, chi), m)


def format_terms(pairs) -> str:
    """Render (coefficient, name) pairs as ``c1 * n1 - c2 * n2``; name "" is a bare scalar."""
    out = ""
    for c, name in pairs:
        if not c:
            continue
        neg = c < 0
        body = format_scalar(-c if neg else c) + (f" * {name}" if name else "")
        out += ("-" if neg else "") + body if not out else (" - " if neg else " + ") + body
    return out or "0"


def format_form(a: MultiIndexForm) -> str:
    return format_terms((c, f"e{{{','.join(map(str, idx))}}}" if idx else "") for idx, c in a.terms.items())


def split_terms(text: str) -> list[tuple[Fraction, str]]:
    """Split ``"c1 * name1 + c2 * name2 - ..."`` into (coefficient, name) pairs."""
    text = text.strip()
    if text in ("", "0"):
        return []
    out = []
    # tokenize at top-level + / - that start a new term (not inside braces or a fraction sign)
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip().strip("+-").strip() and not cur.rstrip().endswith("*"):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    for t in terms:
        t = t.strip()
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:].strip()
        if "*" in t:
            coef, name = t.rsplit("*", 1)
            coef = parse_scalar(coef.strip())
        else:
            coef, name = Fraction(1), t
        name = name.strip()
        if not name:
            raise ValueError(f"malformed term in {text!r}")
        try:
            # a bare number is a multiple of the unit
            c = parse_scalar(name)
            out.append((sign * coef * c, "1"))
            continue
        except ValueError:
            pass
        out.append((sign * coef, name))
    return out


def parse_form(text: str, n: int) -> MultiIndexForm:
    """Parse ``"1/2 * e{1,2} - e{3}"``; ``1`` or ``e{}`` denotes the unit."""
    terms = {}
    for c, name in split_terms(text):
        if name in ("1", "e{}"):
            idx = ()
        else:
            m = re.fullmatch(r"e\{([\d,\s]*)\}", name)
            if not m:
                raise ValueError(f"not a frame monomial: {name!r}")
            idx = tuple(int(x) for x in m.group(1).split(",") if x.strip())
        f = MultiIndexForm(n, {idx: c})
        for k, v in f.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
    return MultiIndexForm(n, terms)
