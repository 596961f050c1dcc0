"""Exact dense linear algebra over Q and Q(i).

Entries are ``fractions.Fraction`` or :class:`GaussianRational`. Nothing in
here touches floating point; ranks, kernels and signatures are computed by
Gaussian elimination with the first nonzero pivot in column order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def conj(x):
    return x.conjugate() if isinstance(x, GaussianRational) else x


def is_real(x) -> bool:
    return not isinstance(x, GaussianRational) or x.im == 0


def real_part(x) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else Fraction(x)


def i_power(e: int) -> GaussianRational | Fraction:
    """``i**e`` as an exact scalar; real powers come back as Fractions."""
    e %= 4
    return (Fraction(1), I, Fraction(-1), -I)[e]


def _fmt_q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Exact text: ``p/q`` for rationals, ``p/q+r/s*i`` for Gaussian rationals."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _fmt_q(x.re)
        im = _fmt_q(x.im)
        sign = "" if x.im < 0 else "+"
        return f"{_fmt_q(x.re)}{sign}{im}*i"
    return _fmt_q(x)


_Q = r"[+-]?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(rf"^\s*({_Q})\s*(?:([+-])\s*(\d+(?:/\d+)?)\s*\*\s*i)?\s*$")
_PURE_IM_RE = re.compile(rf"^\s*({_Q})\s*\*\s*i\s*$")


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`."""
    text = str(text).strip()
    m = _PURE_IM_RE.match(text)
    if m:
        return GaussianRational(0, Fraction(m.group(1)))
    m = _GAUSS_RE.match(text)
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    re_part = Fraction(m.group(1))
    if m.group(2) is None:
        return re_part
    im = Fraction(m.group(3))
    return GaussianRational(re_part, im if m.group(2) == "+" else -im)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _exact(x):
    if isinstance(x, (Fraction, GaussianRational)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"inexact matrix entry {x!r} of type {type(x).__name__}")


class Matrix:
    """Immutable dense matrix with exact entries.

    Shapes with zero rows or columns are legal and behave as the zero map
    between the corresponding spaces.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(_exact(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # construction
    @classmethod
    def zeros(cls, m: int, n: int) -> Matrix:
        z = Fraction(0)
        return cls(((z,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(((Fraction(int(i == j)) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> Matrix:
        cols = [tuple(c) for c in cols]
        return cls(((c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls(((entries[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)), n)

    @classmethod
    def column(cls, v: Sequence) -> Matrix:
        return cls(((x,) for x in v), 1)

    @classmethod
    def block_diag(cls, blocks: Sequence[Matrix]) -> Matrix:
        m = sum(b.nrows for b in blocks)
        n = sum(b.ncols for b in blocks)
        out = [[Fraction(0)] * n for _ in range(m)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[r0 + i][c0 + j] = b.rows[i][j]
            r0 += b.nrows
            c0 += b.ncols
        return cls(out, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix.zeros(self.ncols, 0)

    @property
    def H(self) -> Matrix:
        """Conjugate transpose."""
        t = self.T
        return Matrix(((conj(x) for x in r) for r in t.rows), t.ncols)

    # arithmetic
    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(((a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(((a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix(((-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> Matrix:
        return Matrix(((c * a for a in r) for r in self.rows), self.ncols)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        zero = Fraction(0)
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                s = zero
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(out, other.ncols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        zero = Fraction(0)
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def hstack(self, other: Matrix) -> Matrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix((r + s for r, s in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def vstack(self, other: Matrix) -> Matrix:
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(((self.rows[i][j] for j in cols) for i in rows), len(cols))

    def select_columns(self, cols: Sequence[int]) -> Matrix:
        return self.submatrix(range(self.nrows), cols)

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    def to_text(self) -> list[list[str]]:
        return [[format_scalar(x) for x in r] for r in self.rows]

    # elimination
    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form and pivot columns."""
        a = [list(r) for r in self.rows]
        m, n = self.nrows, self.ncols
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r >= m:
                break
            piv = next((i for i in range(r, m) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][c]
            a[r] = [x * inv for x in a[r]]
            for i in range(m):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        return Matrix(a, n), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self):
        if not self.is_square():
            raise ValueError("det of non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] / a[c][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return d

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = self.nrows
        r, piv = self.hstack(Matrix.identity(n)).rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return r.submatrix(range(n), range(n, 2 * n))

    def solve(self, b: Matrix) -> Matrix | None:
        """One solution X of ``self @ X == b`` or None if inconsistent."""
        if b.nrows != self.nrows:
            raise ValueError("right-hand side row mismatch")
        n = self.ncols
        r, piv = self.hstack(b).rref()
        if any(p >= n for p in piv):
            return None
        out = [[Fraction(0)] * b.ncols for _ in range(n)]
        for i, p in enumerate(piv):
            out[p] = list(r.rows[i][n:])
        return Matrix(out, b.ncols)


def rank_and_kernel(m: Matrix) -> tuple[int, Matrix]:
    """Rank and a kernel basis (as columns) of ``m``."""
    r, piv = m.rref()
    free = [j for j in range(m.ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -r.rows[i][f]
        basis.append(v)
    return len(piv), Matrix.from_columns(basis, m.ncols)


def kernel(m: Matrix) -> Matrix:
    return rank_and_kernel(m)[1]


def column_space(m: Matrix) -> Matrix:
    """Independent columns of ``m`` spanning its image (pivot columns)."""
    _, piv = m.rref()
    return m.select_columns(piv)


def in_column_space(m: Matrix, v: Sequence) -> bool:
    return m.solve(Matrix.column(v)) is not None


def is_hermitian(s: Matrix) -> bool:
    return s.is_square() and s == s.H


def sylvester_signature(s: Matrix) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` of a symmetric or Hermitian form.

    Congruence diagonalization: pivot on the first nonzero diagonal entry;
    when the remaining diagonal vanishes but an off-diagonal entry ``a_ij``
    does not, replace basis vector ``i`` by ``e_i + conj(a_ij) e_j`` which
    puts ``2|a_ij|^2`` on the diagonal (a 2x2 block step).
    """
    if not is_hermitian(s):
        raise ValueError("sylvester_signature needs a symmetric/Hermitian matrix")
    a = [list(r) for r in s.rows]
    n = s.nrows
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            c = conj(a[i][j])
            # e_i <- e_i + c e_j : row_i += conj(c) row_j, col_i += c col_j
            cc = conj(c)
            a[i] = [x + cc * y for x, y in zip(a[i], a[j])]
            for r in range(n):
                a[r][i] = a[r][i] + c * a[r][j]
            piv = i
        p = a[piv][piv]
        if real_part(p) > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if a[i][piv]:
                f = a[i][piv] / p
                fc = conj(f)
                a[i] = [x - f * y for x, y in zip(a[i], a[piv])]
                for r in range(n):
                    a[r][i] = a[r][i] - fc * a[r][piv]
    return pos, neg, n - pos - neg


def is_positive_definite(g: Matrix) -> bool:
    if not is_hermitian(g):
        return False
    p, _, _ = sylvester_signature(g)
    return p == g.nrows


def adjoint_wrt(a: Matrix, gram_domain: Matrix, gram_codomain: Matrix) -> Matrix:
    """Metric adjoint: ``<a x, y>_cod == <x, a* y>_dom``; a* = G_dom^-1 a^H G_cod."""
    if gram_domain.nrows != a.ncols or gram_codomain.nrows != a.nrows:
        raise ValueError("Gram sizes do not match the operator")
    for g in (gram_domain, gram_codomain):
        if not is_positive_definite(g):
            raise ValueError("Gram matrix is not positive definite")
    return gram_domain.inverse() @ a.H @ gram_codomain


def orthogonal_projection(subspace_basis: Matrix, gram: Matrix) -> Matrix:
    """Gram-orthogonal projector onto the column span: B (B^H G B)^-1 B^H G."""
    if not is_positive_definite(gram):
        raise ValueError("Gram matrix is not positive definite")
    b = subspace_basis
    if b.ncols == 0:
        return Matrix.zeros(gram.nrows, gram.nrows)
    if b.rank() != b.ncols:
        raise ValueError("subspace basis columns are linearly dependent")
    return b @ (b.H @ gram @ b).inverse() @ b.H @ gram


def left_inverse(b: Matrix) -> Matrix:
    """A left inverse of a full-column-rank matrix (coordinates in its span)."""
    if b.ncols == 0:
        return Matrix.zeros(0, b.nrows)
    return (b.H @ b).inverse() @ b.H


def as_gaussian(m: Matrix) -> Matrix:
    return Matrix(((x if isinstance(x, GaussianRational) else GaussianRational(x) for x in r)
                   for r in m.rows), m.ncols)


def matrix_from_text(rows: Sequence[Sequence[str]], ncols: int | None = None) -> Matrix:
    return Matrix(((parse_scalar(x) for x in r) for r in rows), ncols)
