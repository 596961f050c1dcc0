"""Reference computations written independently of the package internals.

Lie models are handled by evaluating forms on tuples of frame vectors with the
invariant-form differential
    d w(x0..xk) = sum_{i<j} (-1)^{i+j} w([xi, xj], x0..^i..^j..xk),
the mean curvature vector comes from the Koszul formula, and all ranks are
sympy ranks. Nothing here imports the package's linear algebra or exterior
algebra.
"""

from itertools import combinations, permutations

import numpy as np
import sympy as sp


def _sorted_sign(seq):
    """(sign, sorted tuple) or (0, None) when entries repeat."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


class LieOracle:
    def __init__(self, n, constants, leaf, gram=None):
        self.n = n
        self.c = {}
        for i, j, k, v in constants:
            v = sp.Rational(v)
            self.c[(i, j, k)] = self.c.get((i, j, k), 0) + v
            self.c[(j, i, k)] = self.c.get((j, i, k), 0) - v
        self.leaf = sorted(leaf)
        self.G = sp.Matrix(gram) if gram is not None else sp.eye(n)
        self.tuples = {k: list(combinations(range(1, n + 1), k)) for k in range(n + 1)}

    def bracket(self, i, j):
        return {k: self.c.get((i, j, k), 0) for k in range(1, self.n + 1) if self.c.get((i, j, k), 0)}

    # forms are dicts {sorted tuple: value}; evaluation on basis vectors

    def evaluate(self, w, args):
        s, key = _sorted_sign(args)
        return s * w.get(key, 0) if s else 0

    def d_matrix(self, k):
        src, tgt = self.tuples[k], self.tuples[k + 1]
        M = sp.zeros(len(tgt), len(src))
        for col, I in enumerate(src):
            w = {I: 1}
            for row, X in enumerate(tgt):
                val = 0
                for i, j in combinations(range(k + 1), 2):
                    rest = [X[m] for m in range(k + 1) if m not in (i, j)]
                    for z, cz in self.bracket(X[i], X[j]).items():
                        val += (-1) ** (i + j) * cz * self.evaluate(w, [z] + rest)
                M[row, col] = val
        return M

    def wedge1_matrix(self, theta, k):
        """theta ^ . as a matrix on k-forms; theta a dict {index: value}."""
        src, tgt = self.tuples[k], self.tuples[k + 1]
        M = sp.zeros(len(tgt), len(src))
        for col, I in enumerate(src):
            w = {I: 1}
            for row, X in enumerate(tgt):
                val = 0
                for i in range(k + 1):
                    rest = [X[m] for m in range(k + 1) if m != i]
                    val += (-1) ** i * sp.Rational(theta.get(X[i], 0)) * self.evaluate(w, rest)
                M[row, col] = val
        return M

    def basic_basis(self, k):
        """Columns spanning {w : i_X w = 0 and i_X dw = 0 for leaf X}."""
        tr = [I for I in self.tuples[k] if not set(I) & set(self.leaf)]
        idx = [self.tuples[k].index(I) for I in tr]
        if not tr:
            return sp.zeros(len(self.tuples[k]), 0)
        emb = sp.zeros(len(self.tuples[k]), len(tr))
        for c, r in enumerate(idx):
            emb[r, c] = 1
        if k == self.n:
            return emb
        dm = self.d_matrix(k) @ emb
        rows = [r for r, X in enumerate(self.tuples[k + 1]) if set(X) & set(self.leaf)]
        cons = dm.extract(rows, list(range(len(tr)))) if rows else sp.zeros(0, len(tr))
        ker = cons.nullspace() if cons.rows else [sp.eye(len(tr))[:, c] for c in range(len(tr))]
        return sp.Matrix.hstack(*[emb @ v for v in ker]) if ker else sp.zeros(len(self.tuples[k]), 0)

    def twisted_dims(self, theta=None, sign=-1):
        """dim H^k of d + sign*theta on basic forms, k = 0..n."""
        theta = theta or {}
        B = [self.basic_basis(k) for k in range(self.n + 1)]
        ranks = []
        for k in range(self.n + 1):
            if k == self.n or B[k].cols == 0:
                ranks.append(0)
                continue
            D = self.d_matrix(k) + sign * self.wedge1_matrix(theta, k)
            ranks.append((D @ B[k]).rank())
        dims = []
        for k in range(self.n + 1):
            dims.append(B[k].cols - ranks[k] - (ranks[k - 1] if k else 0))
        q = self.n - len(self.leaf)
        return tuple(dims[: q + 1])

    # mean curvature via the Koszul formula for left-invariant fields

    def levi_civita(self, a, b):
        """Coefficients of nabla_{e_a} e_b in the frame."""
        n = self.n
        G = self.G

        def g(u, v):
            return (sp.Matrix(u).T @ G @ sp.Matrix(v))[0, 0]

        def vec(d):
            return [d.get(i, 0) for i in range(1, n + 1)]

        def br(i, j):
            return vec(self.bracket(i, j))

        e = lambda i: [1 if m == i else 0 for m in range(1, n + 1)]
        rhs = []
        for z in range(1, n + 1):
            rhs.append(sp.Rational(1, 2) * (g(br(a, b), e(z)) - g(br(b, z), e(a)) + g(br(z, a), e(b))))
        return list(G.LUsolve(sp.Matrix(rhs)))

    def kappa(self):
        """Mean curvature 1-form g(H, .) as {index: value}."""
        n, L = self.n, self.leaf
        G = self.G
        GL = G.extract([a - 1 for a in L], [a - 1 for a in L])
        GLi = GL.inv()
        H = sp.zeros(n, 1)
        for x, a in enumerate(L):
            for y, b in enumerate(L):
                H += GLi[x, y] * sp.Matrix(self.levi_civita(a, b))
        # project away from the leaf directions
        gv = [(sp.Matrix([1 if m == b else 0 for m in range(1, n + 1)]).T @ G @ H)[0, 0] for b in L]
        coef = GLi @ sp.Matrix(gv)
        for x, a in enumerate(L):
            H[a - 1] -= coef[x]
        k1 = G @ H
        return {i + 1: k1[i] for i in range(n) if k1[i] != 0}

    def kappa_b(self):
        """L2-orthogonal projection of kappa onto basic 1-forms (pointwise cometric Gram)."""
        B = self.basic_basis(1)
        k = sp.Matrix([self.kappa().get(i, 0) for i in range(1, self.n + 1)])
        if B.cols == 0:
            return {}
        C = self.G.inv()
        coeffs = (B.T @ C @ B).inv() @ (B.T @ C @ k)
        v = B @ coeffs
        return {i + 1: v[i] for i in range(self.n) if v[i] != 0}


def float_signature(sym):
    """(pos, neg, zero) from floating-point eigenvalues of a real symmetric matrix."""
    a = np.array([[float(x) for x in r] for r in sym], dtype=float)
    if a.size == 0:
        return (0, 0, 0)
    ev = np.linalg.eigvalsh(a)
    tol = 1e-9 * max(1.0, float(np.abs(ev).max()))
    return int((ev > tol).sum()), int((ev < -tol).sum()), int((np.abs(ev) <= tol).sum())


def sympy_rank(rows):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in rows]).rank() \
        if rows and rows[0] else 0


def brute_permutation_sign(seq):
    """Sign by counting cycles, for cross-checking."""
    seq = list(seq)
    base = sorted(seq)
    pos = [base.index(x) for x in seq]
    seen, sign = set(), 1
    for i in range(len(pos)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = pos[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def all_signed_permutations(n):
    return [(p, brute_permutation_sign(p)) for p in permutations(range(n))]
