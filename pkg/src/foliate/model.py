"""Finite foliated models: construction, validation, basic forms, mean curvature.

A model is a finite graded-commutative dga with per-degree bases, a
differential, leaf contraction operators, per-degree Gram matrices and a
top-degree integration functional. Two constructors exist: Chevalley-Eilenberg
complexes of a Lie algebra (``from_lie_algebra``) and user-supplied cdgas
(``from_cdga``).

Transverse quantities that need square roots (the transversal star and the
pairing integral) are stored as a rational "unit" together with
``root_sq``: the true value is ``sqrt(root_sq) * unit``. Metrics whose
determinants are not rational squares therefore stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from typing import Mapping, Sequence

from .errors import (ConsistencyError, IntegrabilityError, JacobiError, MetricHomotopyError,
                     ModelValidationError, NotRiemannianError, NotUnimodularError)
from .exterior import (FramedMetric, MultiIndexForm, basis_tuples, contract, merge_sign,
                       transversal_star, wedge)
from .linalg import (Matrix, adjoint_wrt, in_column_space, is_positive_definite, kernel,
                     left_inverse, orthogonal_projection, rational_sqrt)

Vector = tuple


def _zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale(c, u):
    return tuple(c * a for a in u)


def _is_zero(u) -> bool:
    return not any(u)


@dataclass(frozen=True)
class LieData:
    """Frame data behind a Chevalley-Eilenberg model."""

    constants: Mapping[tuple[int, int, int], Fraction]  # [e_i, e_j] = sum_k c[i,j,k] e_k
    leaf: tuple[int, ...]
    metric: FramedMetric

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def transverse(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.leaf)

    def bracket(self, u, v) -> Vector:
        out = [Fraction(0)] * self.n
        for (i, j, k), c in self.constants.items():
            if u[i - 1] and v[j - 1]:
                out[k - 1] += c * u[i - 1] * v[j - 1]
        return tuple(out)

    def unit(self, i: int) -> Vector:
        return tuple(Fraction(int(j == i)) for j in range(1, self.n + 1))

    def g(self, u, v) -> Fraction:
        return sum((a * b for a, b in zip(u, self.metric.gram.apply(v))), Fraction(0))


class FoliatedModel:
    """A validated finite foliated model. Treat instances as immutable."""

    def __init__(self, *, name: str, kind: str, p: int, q: int, labels: Sequence[Sequence[str]],
                 mul: Mapping[tuple[int, int], Sequence[Sequence[Vector]]],
                 d: Sequence[Matrix], contractions: Sequence[Sequence[Matrix]],
                 gram: Sequence[Matrix], integral: Vector | None, chi: Vector | None,
                 root_sq: Fraction = Fraction(1), kappa: Vector | None = None,
                 lie: LieData | None = None):
        self.name = name
        self.kind = kind
        self.p = p
        self.q = q
        self.labels = [list(x) for x in labels]
        self.top = len(self.labels) - 1
        self.dims = [len(x) for x in self.labels]
        self.mul = dict(mul)
        self.d = list(d)
        self.contractions = [list(c) for c in contractions]
        self.gram = list(gram)
        self.integral = integral
        self.chi = chi
        self.root_sq = Fraction(root_sq)
        self._kappa = kappa
        self.lie = lie

    def __repr__(self):
        return f"FoliatedModel({self.name!r}, kind={self.kind}, p={self.p}, q={self.q}, dims={self.dims})"

    @property
    def oriented(self) -> bool:
        return self.integral is not None and self.chi is not None

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.top else 0

    def zero(self, k: int) -> Vector:
        return _zero_vec(self.dim(k))

    def unit(self) -> Vector:
        return (Fraction(1),) + _zero_vec(self.dims[0] - 1)

    def d_map(self, k: int) -> Matrix:
        if 0 <= k <= self.top:
            return self.d[k]
        return Matrix.zeros(self.dim(k + 1), self.dim(k))

    def iota(self, a: int, k: int) -> Matrix:
        if 0 <= k <= self.top:
            return self.contractions[a][k]
        return Matrix.zeros(self.dim(k - 1), self.dim(k))

    def product(self, da: int, u: Vector, db: int, v: Vector) -> Vector:
        if da + db > self.top or da < 0 or db < 0:
            return ()
        table = self.mul[(da, db)]
        out = self.zero(da + db)
        for i, x in enumerate(u):
            if not x:
                continue
            row = table[i]
            for j, y in enumerate(v):
                if y:
                    out = _add(out, _scale(x * y, row[j]))
        return out

    def mult_operator(self, da: int, u: Vector, k: int) -> Matrix:
        """Left multiplication by the degree-``da`` element ``u`` on degree ``k``."""
        cols = []
        for j in range(self.dim(k)):
            e = tuple(Fraction(int(i == j)) for i in range(self.dim(k)))
            cols.append(self.product(da, u, k, e) if da + k <= self.top else ())
        return Matrix.from_columns(cols, self.dim(k + da))

    def label_vector(self, k: int, label: str) -> Vector:
        return tuple(Fraction(int(x == label)) for x in self.labels[k])

    def degree_of(self, label: str) -> int:
        for k, ls in enumerate(self.labels):
            if label in ls:
                return k
        raise KeyError(label)

    def with_reversed_orientation(self) -> FoliatedModel:
        """Same model with the transverse orientation flipped."""
        if not self.oriented:
            raise ModelValidationError("model is not transversely oriented")
        if self.lie is not None:
            return from_lie_algebra(self.lie.constants, self.lie.leaf, self.lie.metric.reversed(),
                                    name=self.name + "~rev")
        return FoliatedModel(name=self.name + "~rev", kind=self.kind, p=self.p, q=self.q,
                             labels=self.labels, mul=self.mul, d=self.d,
                             contractions=self.contractions, gram=self.gram,
                             integral=_scale(-1, self.integral), chi=self.chi,
                             root_sq=self.root_sq, kappa=self._kappa)

    @cached_property
    def basic(self) -> BasicComplex:
        return _build_basic(self)

    @cached_property
    def mean_curvature(self) -> MeanCurvatureData:
        return _mean_curvature(self)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg construction


def _normalize_constants(entries) -> dict[tuple[int, int, int], Fraction]:
    c: dict[tuple[int, int, int], Fraction] = {}
    items = entries.items() if isinstance(entries, Mapping) else ((tuple(e[:3]), e[3]) for e in entries)
    for (i, j, k), v in items:
        v = Fraction(v)
        if i == j:
            if v:
                raise ModelValidationError(f"bracket [e{i}, e{i}] must vanish")
            continue
        for key, val in (((i, j, k), v), ((j, i, k), -v)):
            if key in c and c[key] != val:
                raise ModelValidationError(f"inconsistent structure constant for {key}")
            c[key] = val
    return {k: v for k, v in c.items() if v}


def check_jacobi(lie: LieData) -> list[str]:
    bad = []
    n = lie.n
    for i, j, k in iproduct(range(1, n + 1), repeat=3):
        if not i < j < k:
            continue
        x, y, z = lie.unit(i), lie.unit(j), lie.unit(k)
        s = _add(_add(lie.bracket(lie.bracket(x, y), z), lie.bracket(lie.bracket(y, z), x)),
                 lie.bracket(lie.bracket(z, x), y))
        if not _is_zero(s):
            bad.append(f"Jacobi fails on (e{i}, e{j}, e{k})")
    return bad


def check_integrable(lie: LieData) -> list[str]:
    bad = []
    for a in lie.leaf:
        for b in lie.leaf:
            if a < b:
                br = lie.bracket(lie.unit(a), lie.unit(b))
                if any(br[k - 1] for k in lie.transverse):
                    bad.append(f"[e{a}, e{b}] leaves the leaf span")
    return bad


def check_unimodular(lie: LieData) -> list[str]:
    bad = []
    for i in range(1, lie.n + 1):
        tr = sum((lie.constants.get((i, k, k), Fraction(0)) for k in range(1, lie.n + 1)), Fraction(0))
        if tr:
            bad.append(f"tr ad(e{i}) = {tr} != 0")
    return bad


def _d_generator(lie: LieData, k: int) -> MultiIndexForm:
    # de^k = -sum_{i<j} c^k_ij e^i ^ e^j
    terms = {}
    for (i, j, kk), c in lie.constants.items():
        if kk == k and i < j:
            terms[(i, j)] = -c
    return MultiIndexForm(lie.n, terms)


def _d_form(lie: LieData, f: MultiIndexForm, gens: dict[int, MultiIndexForm]) -> MultiIndexForm:
    out = MultiIndexForm(lie.n)
    for idx, c in f.terms.items():
        for pos, i in enumerate(idx):
            left = MultiIndexForm(lie.n, {idx[:pos]: 1})
            right = MultiIndexForm(lie.n, {idx[pos + 1:]: 1})
            term = wedge(wedge(left, gens[i]), right)
            out = out + ((-1) ** pos * c) * term
    return out


def riemannian_diagnostics(lie: LieData, metric: FramedMetric | None = None) -> list[str]:
    """Lie-derivative test of the transverse metric along each leaf generator.

    For transverse coframe elements e^k, L_X e^k = i_X d e^k (Cartan, since
    i_X e^k is constant). With A the matrix of L_X on the transverse coframe
    and H the induced transverse cometric, invariance is A H + H A^T = 0.
    """
    metric = metric or lie.metric
    gens = {k: _d_generator(lie, k) for k in range(1, lie.n + 1)}
    T = lie.transverse
    h = metric.cometric.submatrix([t - 1 for t in T], [t - 1 for t in T])
    bad = []
    for a in lie.leaf:
        rows = []
        for k in T:
            lx = contract(a, gens[k])
            rows.append([lx.terms.get((l,), Fraction(0)) for l in T])
            if any(lx.terms.get((b,), 0) for b in lie.leaf):
                bad.append(f"L_e{a} e^{k} has leafwise components")
        A = Matrix(rows, len(T))
        if not (A @ h + h @ A.T).is_zero():
            bad.append(f"leaf generator e{a} does not preserve the transverse metric")
    return bad


def from_lie_algebra(structure_constants, leaf_indices: Sequence[int], metric: FramedMetric,
                     name: str = "lie", check_algebra: bool = True) -> FoliatedModel:
    """Chevalley-Eilenberg model of a Lie algebra foliated by a subalgebra of frame vectors."""
    n = metric.n
    leaf = tuple(sorted(set(leaf_indices)))
    if any(not 1 <= a <= n for a in leaf):
        raise ModelValidationError("leaf index out of range")
    consts = _normalize_constants(structure_constants)
    if any(not 1 <= x <= n for key in consts for x in key):
        raise ModelValidationError("structure constant index out of range")
    lie = LieData(consts, leaf, metric)
    if bad := check_jacobi(lie):
        raise JacobiError("; ".join(bad))
    if bad := check_integrable(lie):
        raise IntegrabilityError("; ".join(bad))
    if bad := check_unimodular(lie):
        raise NotUnimodularError("; ".join(bad))
    if bad := riemannian_diagnostics(lie):
        raise NotRiemannianError("; ".join(bad))

    p, q = len(leaf), n - len(leaf)
    tuples = [basis_tuples(n, k) for k in range(n + 1)]
    labels = [[f"e{{{','.join(map(str, t))}}}" for t in ts] for ts in tuples]
    index = [{t: i for i, t in enumerate(ts)} for ts in tuples]

    mul = {}
    for da in range(n + 1):
        for db in range(n + 1 - da):
            table = []
            for a in tuples[da]:
                row = []
                for b in tuples[db]:
                    v = [Fraction(0)] * len(tuples[da + db])
                    s = merge_sign(a, b)
                    if s:
                        v[index[da + db][tuple(sorted(a + b))]] = Fraction(s)
                    row.append(tuple(v))
                table.append(row)
            mul[(da, db)] = table

    gens = {k: _d_generator(lie, k) for k in range(1, n + 1)}
    d = []
    for k in range(n + 1):
        cols = [_d_form(lie, MultiIndexForm(n, {t: 1}), gens) for t in tuples[k]]
        if k < n:
            d.append(Matrix.from_columns([c.to_vector(k + 1) if not c.is_zero() else (Fraction(0),) * len(tuples[k + 1])
                                          for c in cols], len(tuples[k + 1])))
        else:
            d.append(Matrix.zeros(0, len(tuples[k])))

    contractions = []
    for a in leaf:
        per = []
        for k in range(n + 1):
            if k == 0:
                per.append(Matrix.zeros(0, 1))
                continue
            cols = []
            for t in tuples[k]:
                c = contract(a, MultiIndexForm(n, {t: 1}))
                cols.append(c.to_vector(k - 1) if not c.is_zero() else (Fraction(0),) * len(tuples[k - 1]))
            per.append(Matrix.from_columns(cols, len(tuples[k - 1])))
        contractions.append(per)

    gram = [metric.form_gram(k) for k in range(n + 1)]
    chi_form, gl_det = _leaf_coform(lie)
    integral = (Fraction(metric.orientation_sign) / metric.det,)
    model = FoliatedModel(name=name, kind="lie", p=p, q=q, labels=labels, mul=mul, d=d,
                          contractions=contractions, gram=gram, integral=integral,
                          chi=chi_form.to_vector(p) if not chi_form.is_zero() else None,
                          root_sq=metric.det * gl_det, lie=lie)
    validate(model, check_algebra)
    return model


def _leaf_projector(lie: LieData, metric: FramedMetric) -> Matrix:
    """g-orthogonal projection of vectors onto the leaf span."""
    n = lie.n
    if not lie.leaf:
        return Matrix.zeros(n, n)
    E = Matrix.from_columns([lie.unit(a) for a in lie.leaf], n)
    return orthogonal_projection(E, metric.gram)


def _leaf_coform(lie: LieData) -> tuple[MultiIndexForm, Fraction]:
    """Unit leaf covolume chi_u (true chi = sqrt(det G_L) chi_u) and det G_L."""
    n = lie.n
    G = lie.metric.gram
    if not lie.leaf:
        return MultiIndexForm.one(n), Fraction(1)
    L = [a - 1 for a in lie.leaf]
    GL = G.submatrix(L, L)
    GLinv = GL.inverse()
    chi = MultiIndexForm.one(n)
    for r in range(len(L)):
        # eps^a(Y) = sum_b GL^{-1}_{ab} g(e_b, Y)
        coeffs = [sum((GLinv[r, s] * G[L[s], j] for s in range(len(L))), Fraction(0)) for j in range(n)]
        eps = MultiIndexForm(n, {(j + 1,): c for j, c in enumerate(coeffs)})
        chi = wedge(chi, eps)
    return chi, GL.det()


def kappa_frame(lie: LieData) -> Vector:
    """Mean curvature 1-form of the leaves via the Koszul formula.

    kappa(Z) = sum_{a,b} (G_L^{-1})_{ab} g([pi Z, e_a], e_b), which is the
    trace over an orthonormal leaf frame written in the (non-orthonormal)
    leaf basis; pi is the projection onto the orthogonal complement of L.
    """
    n = lie.n
    if not lie.leaf:
        return _zero_vec(n)
    G = lie.metric.gram
    L = [a - 1 for a in lie.leaf]
    GLinv = G.submatrix(L, L).inverse()
    pi = Matrix.identity(n) - _leaf_projector(lie, lie.metric)
    out = []
    for k in range(1, n + 1):
        z = pi.apply(lie.unit(k))
        s = Fraction(0)
        for r, a in enumerate(lie.leaf):
            br = lie.bracket(z, lie.unit(a))
            for t, b in enumerate(lie.leaf):
                if GLinv[r, t]:
                    s += GLinv[r, t] * lie.g(br, lie.unit(b))
        out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# general cdga construction


def from_cdga(*, name: str, labels: Sequence[Sequence[str]], p: int, q: int,
              mul: Mapping[tuple[str, str], Mapping[str, object]],
              diff: Mapping[str, Mapping[str, object]],
              contractions: Sequence[Mapping[str, Mapping[str, object]]] = (),
              gram: Sequence[Matrix] | None = None,
              integral: Mapping[str, object] | None = None,
              chi: Mapping[str, object] | None = None,
              kappa: Mapping[str, object] | None = None) -> FoliatedModel:
    """Build a model from a multiplication table on labelled basis elements.

    The first degree-0 label is the unit. Products not listed (and not forced
    by the unit or by graded commutativity) are zero.
    """
    labels = [list(x) for x in labels]
    if not labels or not labels[0]:
        raise ModelValidationError("cdga needs a degree-0 unit")
    top = len(labels) - 1
    deg = {}
    for k, ls in enumerate(labels):
        for x in ls:
            if x in deg:
                raise ModelValidationError(f"duplicate basis label {x!r}")
            deg[x] = k
    unit = labels[0][0]

    def vec(k: int, entries: Mapping[str, object] | None) -> Vector:
        v = [Fraction(0)] * len(labels[k]) if 0 <= k <= top else []
        for lab, c in (entries or {}).items():
            if lab not in deg:
                raise ModelValidationError(f"unknown basis label {lab!r}")
            if deg[lab] != k:
                raise ModelValidationError(f"label {lab!r} has degree {deg[lab]}, expected {k}")
            v[labels[k].index(lab)] += Fraction(c)
        return tuple(v)

    table: dict[tuple[str, str], Vector] = {}
    for (a, b), entries in mul.items():
        if a not in deg or b not in deg:
            raise ModelValidationError(f"unknown label in product ({a}, {b})")
        k = deg[a] + deg[b]
        table[(a, b)] = vec(k, entries) if k <= top else ()
        if k <= top and entries and deg[a] + deg[b] > top:
            raise ModelValidationError("product lands above the top degree")
    for (a, b), v in list(table.items()):
        s = -1 if deg[a] * deg[b] % 2 else 1
        if (b, a) in table:
            if table[(b, a)] != _scale(s, v):
                raise ModelValidationError(f"product table is not graded commutative on ({a}, {b})")
        else:
            table[(b, a)] = _scale(s, v)

    mtab = {}
    for da in range(top + 1):
        for db in range(top + 1 - da):
            rows = []
            for a in labels[da]:
                row = []
                for b in labels[db]:
                    if a == unit:
                        row.append(vec(db, {b: 1}))
                    elif b == unit:
                        row.append(vec(da, {a: 1}))
                    else:
                        row.append(table.get((a, b), _zero_vec(len(labels[da + db]))))
                rows.append(row)
            mtab[(da, db)] = rows

    def per_degree(label_map: Mapping[str, Mapping[str, object]], shift: int) -> list[Matrix]:
        for lab in label_map:
            if lab not in deg:
                raise ModelValidationError(f"unknown basis label {lab!r}")
        out = []
        for k in range(top + 1):
            tgt = k + shift
            cols = [vec(tgt, label_map.get(lab)) if 0 <= tgt <= top else () for lab in labels[k]]
            out.append(Matrix.from_columns(cols, len(labels[tgt]) if 0 <= tgt <= top else 0))
        return out

    d = per_degree(diff, 1)
    ctr = [per_degree(c, -1) for c in contractions]
    if len(ctr) != p:
        raise ModelValidationError(f"{len(ctr)} leaf contractions supplied for leaf rank {p}")
    if gram is None:
        gram = [Matrix.identity(len(ls)) for ls in labels]
    gram = list(gram)
    if len(gram) != top + 1 or any(g.shape != (len(ls), len(ls)) for g, ls in zip(gram, labels)):
        raise ModelValidationError("metric must give one Gram matrix per degree")
    model = FoliatedModel(name=name, kind="cdga", p=p, q=q, labels=labels, mul=mtab, d=d,
                          contractions=ctr, gram=gram,
                          integral=vec(top, integral) if integral is not None else None,
                          chi=vec(p, chi) if chi is not None else None,
                          root_sq=Fraction(1), kappa=vec(1, kappa) if kappa is not None else None)
    validate(model)
    return model


# ---------------------------------------------------------------------------
# validation


def _basis_vec(m: FoliatedModel, k: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(m.dim(k)))


def _algebra_diagnostics(m: FoliatedModel) -> list[str]:
    bad = []
    u = m.unit()
    for k in range(m.top + 1):
        for i in range(m.dim(k)):
            e = _basis_vec(m, k, i)
            if m.product(0, u, k, e) != e:
                bad.append(f"unit fails on {m.labels[k][i]}")
    # Leibniz and associativity on basis elements
    for da in range(m.top + 1):
        for db in range(m.top + 1 - da):
            for i in range(m.dim(da)):
                a = _basis_vec(m, da, i)
                for j in range(m.dim(db)):
                    b = _basis_vec(m, db, j)
                    ab = m.product(da, a, db, b)
                    lhs = m.d_map(da + db).apply(ab)
                    rhs = m.zero(da + db + 1)
                    if da + 1 + db <= m.top:
                        rhs = _add(rhs, m.product(da + 1, m.d_map(da).apply(a), db, b))
                        sgn = -1 if da % 2 else 1
                        rhs = _add(rhs, _scale(sgn, m.product(da, a, db + 1, m.d_map(db).apply(b))))
                    if lhs != rhs:
                        bad.append(f"Leibniz fails on ({m.labels[da][i]}, {m.labels[db][j]})")
                    for x, ctr in enumerate(m.contractions):
                        if da + db == 0:
                            continue
                        lhs = ctr[da + db].apply(ab)
                        rhs = m.zero(da + db - 1)
                        if da > 0:
                            rhs = _add(rhs, m.product(da - 1, ctr[da].apply(a), db, b))
                        if db > 0:
                            sgn = -1 if da % 2 else 1
                            rhs = _add(rhs, _scale(sgn, m.product(da, a, db - 1, ctr[db].apply(b))))
                        if lhs != rhs:
                            bad.append(f"contraction {x} is not an antiderivation on "
                                       f"({m.labels[da][i]}, {m.labels[db][j]})")
    if m.kind == "cdga":
        for da in range(m.top + 1):
            for db in range(m.top + 1 - da):
                for dc in range(m.top + 1 - da - db):
                    for i, j, l in iproduct(range(m.dim(da)), range(m.dim(db)), range(m.dim(dc))):
                        a, b, c = _basis_vec(m, da, i), _basis_vec(m, db, j), _basis_vec(m, dc, l)
                        if m.product(da + db, m.product(da, a, db, b), dc, c) != \
                                m.product(da, a, db + dc, m.product(db, b, dc, c)):
                            bad.append(f"product not associative on ({m.labels[da][i]}, "
                                       f"{m.labels[db][j]}, {m.labels[dc][l]})")
    for x, cx in enumerate(m.contractions):
        for y, cy in enumerate(m.contractions):
            for k in range(1, m.top + 1):
                if k >= 2 and not (m.iota(x, k - 1) @ m.iota(y, k) + m.iota(y, k - 1) @ m.iota(x, k)).is_zero():
                    bad.append(f"contractions {x}, {y} do not anticommute in degree {k}")
    return bad


def model_diagnostics(m: FoliatedModel, algebra: bool = True) -> list[str]:
    """All axiom violations of a model (empty list means valid).

    ``algebra=False`` skips the product/contraction axioms, for models whose
    algebra is known to be valid and only the metric data changed.
    """
    bad = []
    for k in range(m.top + 1):
        if not (m.d_map(k + 1) @ m.d_map(k)).is_zero():
            bad.append(f"d^2 != 0 in degree {k}")
    for k, g in enumerate(m.gram):
        if not is_positive_definite(g):
            bad.append(f"Gram in degree {k} is not positive definite")
    if algebra:
        bad.extend(_algebra_diagnostics(m))
    if m.oriented:
        if len(m.integral) != m.dim(m.top):
            bad.append("integration functional has the wrong length")
        if len(m.chi) != m.dim(m.p):
            bad.append("characteristic form has the wrong degree")
        # Stokes: the integral kills exact top forms
        if m.top >= 1:
            dtop = m.d_map(m.top - 1)
            for j in range(dtop.ncols):
                if sum((a * b for a, b in zip(m.integral, dtop.col(j))), Fraction(0)):
                    bad.append(f"integral of d({m.labels[m.top - 1][j]}) is nonzero")
    return bad


def validate(m: FoliatedModel, algebra: bool = True) -> None:
    bad = model_diagnostics(m, algebra)
    if bad:
        raise ModelValidationError(f"model {m.name!r}: " + "; ".join(bad[:5]))
    m.basic  # builds and checks the basic subcomplex


def is_riemannian(m: FoliatedModel) -> tuple[bool, list[str]]:
    """Transverse-metric invariance along the leaves, with diagnostics."""
    if m.lie is None:
        return True, ["cdga model: transverse metric taken as supplied"]
    bad = riemannian_diagnostics(m.lie)
    return not bad, bad


# ---------------------------------------------------------------------------
# basic subcomplex


class BasicComplex:
    """Basic elements of a model, in coordinates relative to chosen bases.

    ``bases[k]`` holds basic k-elements as columns in ambient coordinates;
    every operator below acts on basic coordinates.
    """

    def __init__(self, model: FoliatedModel, bases: list[Matrix]):
        self.model = model
        self.q = model.q
        self.bases = bases
        self.dims = [b.ncols for b in bases]
        self._coords = [left_inverse(b) for b in bases]
        self.d = [self._restrict(model.d_map(k), k, k + 1) for k in range(self.q + 1)]
        self.gram = [b.T @ model.gram[k] @ b for k, b in enumerate(bases)]

    def __repr__(self):
        return f"BasicComplex({self.model.name!r}, dims={self.dims})"

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.q else 0

    def zero_map(self, k_from: int, k_to: int) -> Matrix:
        return Matrix.zeros(self.dim(k_to), self.dim(k_from))

    def identity(self, k: int) -> Matrix:
        return Matrix.identity(self.dim(k))

    def _restrict(self, amb: Matrix, k_from: int, k_to: int) -> Matrix:
        if not 0 <= k_from <= self.q:
            return self.zero_map(k_from, k_to)
        img = amb @ self.bases[k_from]
        if not 0 <= k_to <= self.q:
            if not img.is_zero():
                raise ConsistencyError(f"basic degree-{k_from} elements map outside the basic range")
            return self.zero_map(k_from, k_to)
        coords = self._coords[k_to] @ img
        if self.bases[k_to] @ coords != img:
            raise ConsistencyError(f"operator does not preserve basic elements ({k_from}->{k_to})")
        return coords

    def to_basic(self, k: int, v: Vector) -> Vector:
        if not 0 <= k <= self.q:
            if any(v):
                raise ValueError(f"nonzero element in degree {k} outside the basic range")
            return ()
        c = self._coords[k].apply(v)
        if self.bases[k].apply(c) != tuple(v):
            raise ValueError(f"degree-{k} element is not basic")
        return c

    def is_basic(self, k: int, v: Vector) -> bool:
        try:
            self.to_basic(k, v)
        except ValueError:
            return False
        return True

    def to_ambient(self, k: int, c: Vector) -> Vector:
        if not 0 <= k <= self.q:
            return self.model.zero(k)
        return self.bases[k].apply(c)

    def d_map(self, k: int) -> Matrix:
        return self.d[k] if 0 <= k <= self.q else self.zero_map(k, k + 1)

    def gram_of(self, k: int) -> Matrix:
        return self.gram[k] if 0 <= k <= self.q else Matrix.zeros(0, 0)

    def wedge_op(self, da: int, c: Vector, k: int) -> Matrix:
        """Left multiplication by the basic degree-``da`` element with coordinates ``c``."""
        if not 0 <= k <= self.q or not 0 <= k + da <= self.model.top:
            return self.zero_map(k, k + da)
        amb = self.model.mult_operator(da, self.to_ambient(da, c), k)
        return self._restrict(amb, k, k + da)

    def adjoint(self, a: Matrix, k_from: int, k_to: int) -> Matrix:
        """Gram adjoint of a map from degree ``k_from`` to ``k_to``."""
        if a.nrows == 0 or a.ncols == 0:
            return Matrix.zeros(a.ncols, a.nrows)
        return adjoint_wrt(a, self.gram_of(k_from), self.gram_of(k_to))

    def contract_op(self, c: Vector, k: int) -> Matrix:
        """theta-contraction on basic k-elements: adjoint of theta-wedge from k-1."""
        return self.adjoint(self.wedge_op(1, c, k - 1), k - 1, k)

    def delta(self, k: int) -> Matrix:
        """delta_b on k-elements: Gram adjoint of d from degree k-1."""
        return self.adjoint(self.d_map(k - 1), k - 1, k)

    def integrate_with_chi(self, k: int, c: Vector) -> Fraction:
        """Unit-normalized  integral(a ^ chi) of a basic degree-q element.

        The true value is ``sqrt(model.root_sq)`` times this number.
        """
        m = self.model
        if not m.oriented:
            raise ModelValidationError(f"model {m.name!r} is not transversely oriented")
        if k != self.q:
            return Fraction(0)
        top = m.product(k, self.to_ambient(k, c), m.p, m.chi)
        return sum((a * b for a, b in zip(m.integral, top)), Fraction(0))

    def pairing_op(self, k: int, c: Vector) -> Vector:
        """Coordinates of the functional b -> integral(a ^ b ^ chi) on degree q-k (unit)."""
        out = []
        for j in range(self.dim(self.q - k)):
            b = tuple(Fraction(int(i == j)) for i in range(self.dim(self.q - k)))
            ab = self.model.product(k, self.to_ambient(k, c), self.q - k, self.to_ambient(self.q - k, b))
            out.append(self.integrate_with_chi(self.q, self.to_basic(self.q, ab)))
        return tuple(out)

    @cached_property
    def star(self) -> TransverseStar:
        return transverse_star(self)


def _build_basic(m: FoliatedModel) -> BasicComplex:
    bases = []
    for k in range(m.q + 1):
        if k > m.top:
            bases.append(Matrix.zeros(0, 0))
            continue
        conds = Matrix.zeros(0, m.dim(k))
        for x in range(len(m.contractions)):
            conds = conds.vstack(m.iota(x, k))
            conds = conds.vstack(m.iota(x, k + 1) @ m.d_map(k))
        bases.append(kernel(conds) if conds.nrows else Matrix.identity(m.dim(k)))
    for k in range(m.q + 1, m.top + 1):
        conds = Matrix.zeros(0, m.dim(k))
        for x in range(len(m.contractions)):
            conds = conds.vstack(m.iota(x, k)).vstack(m.iota(x, k + 1) @ m.d_map(k))
        if conds.nrows and kernel(conds).ncols:
            raise ModelValidationError(f"basic elements exist in degree {k} > codimension {m.q}")
        if not conds.nrows and m.dim(k):
            raise ModelValidationError(f"degree {k} exceeds codimension {m.q} for a model without leaves")
    bc = BasicComplex(m, bases)
    # closed under wedge
    for da in range(m.q + 1):
        for db in range(m.q + 1 - da):
            for i in range(bc.dim(da)):
                for j in range(bc.dim(db)):
                    ab = m.product(da, bases[da].col(i), db, bases[db].col(j))
                    if ab and not bc.is_basic(da + db, ab):
                        raise ModelValidationError(f"basic elements not closed under products in degrees {da},{db}")
    return bc


def basic_subcomplex(m: FoliatedModel) -> BasicComplex:
    return m.basic


# ---------------------------------------------------------------------------
# transversal star on basic elements


@dataclass(frozen=True)
class TransverseStar:
    """Per-degree unit matrices U_k; the transversal star is sqrt(root_sq) * U_k."""

    unit: tuple[Matrix, ...]
    root_sq: Fraction

    @property
    def scale(self) -> Fraction | None:
        return rational_sqrt(self.root_sq)

    def exact(self, k: int) -> Matrix:
        s = self.scale
        if s is None:
            raise ValueError("transversal star is irrational for this metric (non-square scale)")
        return self.unit[k].scale(s)


def star_by_formula(bc: BasicComplex) -> list[Matrix]:
    """U_k from (-1)^{p(q-k)} * (gamma ^ chi), with both factors unit-normalized."""
    m = bc.model
    lie = m.lie
    n, p, q = lie.n, m.p, m.q
    chi = MultiIndexForm.from_vector(n, p, m.chi)
    out = []
    for k in range(q + 1):
        cols = []
        for c in bc.bases[k].columns():
            g = MultiIndexForm.from_vector(n, k, c)
            s = transversal_star(g, lie.metric, chi, p, q, unit=True)
            amb = s.to_vector(q - k) if not s.is_zero() else m.zero(q - k)
            cols.append(bc.to_basic(q - k, amb))
        out.append(Matrix.from_columns(cols, bc.dim(q - k)))
    return out


def star_by_pairing(bc: BasicComplex) -> list[Matrix]:
    """U_k solved from  integral(a ^ U b ^ chi) = <a, b> / root_sq  for all basic a."""
    m = bc.model
    q = bc.q
    out = []
    for k in range(q + 1):
        # P[i, j] = integral(a_i ^ c_j ^ chi) for a_i in degree k, c_j in degree q-k
        P = Matrix([bc.pairing_op(k, a) for a in Matrix.identity(bc.dim(k)).columns()], bc.dim(q - k)) \
            if bc.dim(k) else Matrix.zeros(0, bc.dim(q - k))
        rhs = bc.gram[k].scale(1 / m.root_sq)
        if P.nrows != P.ncols or (P.nrows and P.rank() != P.nrows):
            raise ModelValidationError(f"transverse pairing degenerate in degree {k}; "
                                       "model is not transversely oriented")
        out.append(P.inverse() @ rhs if P.nrows else Matrix.zeros(0, 0))
    return out


def transverse_star(bc: BasicComplex) -> TransverseStar:
    m = bc.model
    if not m.oriented:
        raise ModelValidationError(f"model {m.name!r} is not transversely oriented")
    mats = star_by_formula(bc) if m.lie is not None else star_by_pairing(bc)
    return TransverseStar(tuple(mats), m.root_sq)


# ---------------------------------------------------------------------------
# mean curvature


@dataclass(frozen=True)
class MeanCurvatureData:
    kappa: Vector  # ambient degree 1
    kappa_b: Vector  # ambient degree 1, basic
    kappa_b_coords: Vector  # basic coordinates
    chi: Vector | None  # unit-normalized characteristic form (ambient degree p)
    chi_scale_sq: Fraction  # true chi = sqrt(chi_scale_sq) * chi
    rummler_residual: Vector | None  # ambient degree p+1

    @property
    def taut_representative(self) -> bool:
        return not any(self.kappa)


def _mean_curvature(m: FoliatedModel) -> MeanCurvatureData:
    bc = m.basic
    if m.lie is not None:
        kappa = kappa_frame(m.lie)
        _, gl_det = _leaf_coform(m.lie)
    else:
        kappa = m._kappa if m._kappa is not None else m.zero(1)
        gl_det = Fraction(1)
    if m.dim(1) and bc.dim(1):
        P = orthogonal_projection(bc.bases[1], m.gram[1])
        kappa_b = P.apply(kappa)
    else:
        kappa_b = m.zero(1)
    kb = bc.to_basic(1, kappa_b) if bc.q >= 1 else ()
    if bc.q >= 1 and any(bc.d_map(1).apply(kb)):
        raise ConsistencyError(f"kappa_b is not closed on model {m.name!r}")
    residual = None
    if m.chi is not None and m.p + 1 <= m.top:
        dchi = m.d_map(m.p).apply(m.chi)
        residual = _add(dchi, m.product(1, kappa, m.p, m.chi))
        # p-fold leaf contraction of the residual must vanish
        v = residual
        for x in range(m.p):
            v = m.iota(x, m.p + 1 - x).apply(v)
        if any(v):
            raise ConsistencyError(f"Rummler residual survives the leaf contractions on {m.name!r}")
    return MeanCurvatureData(kappa=kappa, kappa_b=kappa_b, kappa_b_coords=kb, chi=m.chi,
                             chi_scale_sq=gl_det, rummler_residual=residual)


def mean_curvature(m: FoliatedModel) -> MeanCurvatureData:
    return m.mean_curvature


# ---------------------------------------------------------------------------
# metric homotopy between bundle-like metrics


def metric_homotopy(g0: FramedMetric, g1: FramedMetric, m: FoliatedModel,
                    samples: Sequence) -> list[FramedMetric]:
    """Two-stage family of bundle-like metrics from ``g0`` (t=0) to ``g1`` (t=1).

    Stage 1 (t in [0, 1/2]) moves the leafwise coframe of g0 onto its
    g1-orthogonal projection while keeping g0's transverse part; stage 2
    (t in [1/2, 1]) mixes the resulting metric convexly with g1, which now
    shares its leaf/normal splitting. Samples map linearly onto each stage.
    """
    if m.lie is None:
        raise ModelValidationError("metric homotopies need a frame (Lie) model")
    lie = m.lie
    for label, g in (("g0", g0), ("g1", g1)):
        if g.n != lie.n:
            raise ModelValidationError(f"{label} has the wrong size")
        if bad := riemannian_diagnostics(lie, g):
            raise NotRiemannianError(f"{label} is not bundle-like: " + "; ".join(bad))
    if g0.orientation_sign != g1.orientation_sign:
        raise MetricHomotopyError("endpoint metrics induce opposite orientations")
    n = lie.n
    Id = Matrix.identity(n)
    Pi0 = _leaf_projector(lie, g0)
    Pi1 = _leaf_projector(lie, g1)
    G0, G1 = g0.gram, g1.gram
    G0L = Pi0.T @ G0 @ Pi0
    G0Q = (Id - Pi0).T @ G0 @ (Id - Pi0)

    def stage1(t: Fraction) -> Matrix:
        S = Id.scale(1 - t) + Pi1.scale(t)
        return S.T @ G0L @ S + G0Q

    gbar = stage1(Fraction(1))
    out = []
    for s in samples:
        s = Fraction(s)
        if not 0 <= s <= 1:
            raise MetricHomotopyError(f"sample {s} outside [0, 1]")
        if s <= Fraction(1, 2):
            stage, G = "stage 1", stage1(2 * s)
        else:
            t = 2 * s - 1
            stage, G = "stage 2", gbar.scale(1 - t) + G1.scale(t)
        try:
            g = FramedMetric(G, g1.orientation)
        except ValueError as exc:
            raise MetricHomotopyError(f"{stage} at t={s}: {exc}") from exc
        if bad := riemannian_diagnostics(lie, g):
            raise MetricHomotopyError(f"{stage} at t={s} is not bundle-like: " + "; ".join(bad))
        out.append(g)
    return out


def with_metric(m: FoliatedModel, metric: FramedMetric, name: str | None = None) -> FoliatedModel:
    if m.lie is None:
        raise ModelValidationError("only frame models carry a framed metric")
    # same algebra as the already validated m; only metric-dependent checks rerun
    return from_lie_algebra(m.lie.constants, m.lie.leaf, metric, name=name or m.name, check_algebra=False)


def lie_product(a: FoliatedModel, b: FoliatedModel, name: str | None = None) -> FoliatedModel:
    """Direct sum of two frame models (product foliation)."""
    if a.lie is None or b.lie is None:
        raise ModelValidationError("products are built from frame models")
    na = a.lie.n
    consts = dict(a.lie.constants)
    for (i, j, k), c in b.lie.constants.items():
        consts[(i + na, j + na, k + na)] = c
    leaf = a.lie.leaf + tuple(x + na for x in b.lie.leaf)
    G = Matrix.block_diag([a.lie.metric.gram, b.lie.metric.gram])
    orient = a.lie.metric.orientation + tuple(x + na for x in b.lie.metric.orientation)
    return from_lie_algebra(consts, leaf, FramedMetric(G, orient), name=name or f"{a.name}*{b.name}")


__all__ = [
    "BasicComplex", "FoliatedModel", "LieData", "MeanCurvatureData", "TransverseStar",
    "basic_subcomplex", "from_cdga", "from_lie_algebra", "is_riemannian", "kappa_frame",
    "lie_product", "mean_curvature", "metric_homotopy", "model_diagnostics", "star_by_formula",
    "star_by_pairing", "transverse_star", "validate", "with_metric", "in_column_space",
]
