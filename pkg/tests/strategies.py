from fractions import Fraction

from hypothesis import strategies as st

from foliate.linalg import Matrix

small_q = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def matrices(draw, rows=None, cols=None, max_dim=4, entries=small_q):
    m = draw(st.integers(1, max_dim)) if rows is None else rows
    n = draw(st.integers(1, max_dim)) if cols is None else cols
    return Matrix([[draw(entries) for _ in range(n)] for _ in range(m)], n)


@st.composite
def invertible(draw, n):
    # unit lower triangular times unit upper triangular, with a scaled diagonal
    lo = [[draw(small_q) if j < i else Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    up = [[draw(small_q) if j > i else Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [draw(st.sampled_from([Fraction(1), Fraction(-2), Fraction(3, 2), Fraction(-1, 3)])) for _ in range(n)]
    return Matrix(lo, n) @ Matrix.diag(d) @ Matrix(up, n)


@st.composite
def positive_definite(draw, n):
    a = draw(invertible(n))
    return a.T @ a


@st.composite
def symmetric(draw, n):
    a = draw(matrices(rows=n, cols=n))
    return a + a.T
