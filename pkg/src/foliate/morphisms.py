"""Maps between foliated models and what they induce on twisted cohomology.

A map f: M -> M' is stored by its pullback f*: per-degree matrices from the
ambient algebra of the target M' to the ambient algebra of the source M.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ConsistencyError, ModelValidationError
from .exterior import MultiIndexForm, basis_tuples, wedge
from .lichnerowicz import (TwistingForm, cohomology, random_closed_thetas,
                           twisted_differential)
from .linalg import Matrix, format_scalar, rational_sqrt
from .model import FoliatedModel
from .signature import basic_signature, pairing_matrix


@dataclass(frozen=True)
class FoliatedModelMap:
    source: FoliatedModel
    target: FoliatedModel
    pullback: tuple[Matrix, ...]  # degree k: target k-elements -> source k-elements
    name: str = "f"

    def pull(self, k: int, v: Sequence) -> tuple:
        if k > self.target.top or k > self.source.top:
            return self.source.zero(k)
        return self.pullback[k].apply(v)

    def basic_pullback(self, k: int) -> Matrix:
        """f* restricted to basic k-elements, in basic coordinates on both sides."""
        bs, bt = self.source.basic, self.target.basic
        if k > bs.q or k > bt.q:
            return Matrix.zeros(bs.dim(k), bt.dim(k))
        img = self.pullback[k] @ bt.bases[k]
        cols = [bs.to_basic(k, c) for c in img.columns()]
        return Matrix.from_columns(cols, bs.dim(k))

    def pull_theta(self, theta: TwistingForm) -> TwistingForm:
        bs = self.source.basic
        return TwistingForm.from_basic(bs, self.basic_pullback(1).apply(theta.coords),
                                       f"{self.name}*({theta.label})")


def compose(f: FoliatedModelMap, g: FoliatedModelMap) -> FoliatedModelMap:
    """g after f (M -f-> M' -g-> M''); pullback f* g*."""
    if f.target is not g.source and f.target.name != g.source.name:
        raise ModelValidationError("maps do not compose")
    pb = tuple(f.pullback[k] @ g.pullback[k] for k in range(min(len(f.pullback), len(g.pullback))))
    return FoliatedModelMap(f.source, g.target, pb, f"{g.name}.{f.name}")


def identity_map(m: FoliatedModel, other: FoliatedModel | None = None) -> FoliatedModelMap:
    """Identity on the underlying algebra; ``other`` may carry a different metric."""
    tgt = other or m
    if tgt.dims != m.dims:
        raise ModelValidationError("identity needs equal ambient dimensions")
    return FoliatedModelMap(m, tgt, tuple(Matrix.identity(d) for d in m.dims), "id")


def map_from_degree1(source: FoliatedModel, target: FoliatedModel, matrix_deg1: Matrix,
                     name: str = "f") -> FoliatedModelMap:
    """Frame-model map from the images of the target's degree-1 generators.

    Column j of ``matrix_deg1`` is f*(e^{j+1}) in the source coframe; higher
    degrees follow multiplicatively.
    """
    if source.lie is None or target.lie is None:
        raise ModelValidationError("degree-1 maps need frame models; use images for cdga models")
    ns, nt = source.lie.n, target.lie.n
    if matrix_deg1.shape != (ns, nt):
        raise ModelValidationError(f"degree-1 matrix must be {ns}x{nt}")
    gens = [MultiIndexForm.from_vector(ns, 1, matrix_deg1.col(j)) for j in range(nt)]
    pb = []
    for k in range(min(ns, nt) + 1):
        cols = []
        for t in basis_tuples(nt, k):
            w = MultiIndexForm.one(ns)
            for i in t:
                w = wedge(w, gens[i - 1])
            cols.append(w.to_vector(k) if not w.is_zero() else source.zero(k))
        pb.append(Matrix.from_columns(cols, source.dim(k)))
    for k in range(min(ns, nt) + 1, nt + 1):
        pb.append(Matrix.zeros(source.dim(k), target.dim(k)))
    return FoliatedModelMap(source, target, tuple(pb), name)


def map_from_images(source: FoliatedModel, target: FoliatedModel,
                    images: Mapping[str, Mapping[str, object]], name: str = "f") -> FoliatedModelMap:
    """Map given by the image of every target basis label (absent labels map to 0; the unit to the unit)."""
    pb = []
    for k in range(target.top + 1):
        cols = []
        for lab in target.labels[k]:
            v = [Fraction(0)] * source.dim(k)
            image = images.get(lab)
            if image is None and k == 0 and lab == target.labels[0][0]:
                image = {source.labels[0][0]: 1}
            for sl, c in (image or {}).items():
                if k > source.top or sl not in source.labels[k]:
                    raise ModelValidationError(f"image of {lab!r} uses {sl!r}, not a degree-{k} source label")
                v[source.labels[k].index(sl)] += Fraction(c)
            cols.append(tuple(v))
        pb.append(Matrix.from_columns(cols, source.dim(k)))
    unknown = set(images) - {x for ls in target.labels for x in ls}
    if unknown:
        raise ModelValidationError(f"unknown target labels {sorted(unknown)}")
    return FoliatedModelMap(source, target, tuple(pb), name)


def validate_map(f: FoliatedModelMap) -> list[str]:
    """Multiplicativity, d-commutation, unit and basic-to-basic checks; empty means valid."""
    s, t = f.source, f.target
    bad = []
    if len(f.pullback) != t.top + 1:
        return [f"pullback has {len(f.pullback)} degrees, target has {t.top + 1}"]
    for k, m in enumerate(f.pullback):
        if m.shape != (s.dim(k), t.dim(k)):
            return [f"pullback in degree {k} has shape {m.shape}, expected {(s.dim(k), t.dim(k))}"]
    if f.pull(0, t.unit()) != s.unit():
        bad.append("unit is not preserved")
    for k in range(t.top + 1):
        lhs = f.pullback[k + 1] @ t.d_map(k) if k + 1 <= t.top else None
        rhs = s.d_map(k) @ f.pullback[k]
        if lhs is None:
            if k + 1 <= s.top and not rhs.is_zero():
                bad.append(f"d-commutation fails leaving degree {k}")
        elif lhs != rhs:
            j = next(j for j in range(lhs.ncols) if lhs.col(j) != rhs.col(j))
            bad.append(f"d-commutation fails on {t.labels[k][j]}")
    for da in range(t.top + 1):
        for db in range(t.top + 1 - da):
            for i in range(t.dim(da)):
                a = tuple(Fraction(int(x == i)) for x in range(t.dim(da)))
                for j in range(t.dim(db)):
                    b = tuple(Fraction(int(x == j)) for x in range(t.dim(db)))
                    lhs = f.pull(da + db, t.product(da, a, db, b))
                    rhs = s.product(da, f.pull(da, a), db, f.pull(db, b))
                    if da + db > s.top:
                        continue
                    if lhs != rhs:
                        bad.append(f"product not preserved on ({t.labels[da][i]}, {t.labels[db][j]})")
    bs, bt = s.basic, t.basic
    for k in range(bt.q + 1):
        for c in (f.pullback[k] @ bt.bases[k]).columns() if k <= t.top else []:
            if any(c) and not bs.is_basic(k, c):
                bad.append(f"a basic degree-{k} element pulls back to a non-basic element")
                break
    return bad


def require_valid(f: FoliatedModelMap) -> FoliatedModelMap:
    bad = validate_map(f)
    if bad:
        raise ModelValidationError(f"map {f.name!r}: " + "; ".join(bad[:5]))
    return f


def induced_cohomology_map(f: FoliatedModelMap, theta: TwistingForm | None = None,
                           sign: int = 1) -> list[Matrix]:
    """f* : H_{d+sign*theta}(target) -> H_{d+sign*f*theta}(source) in harmonic bases."""
    bs, bt = f.source.basic, f.target.basic
    theta = theta or TwistingForm.zero(bt)
    ftheta = f.pull_theta(theta)
    ht = cohomology(bt, theta, sign)
    hs = cohomology(bs, ftheta, sign)
    up_s = twisted_differential(bs, ftheta, sign)
    up_t = twisted_differential(bt, theta, sign)
    out = []
    for k in range(min(bs.q, bt.q) + 1):
        P = f.basic_pullback(k)
        img = P @ ht.harmonic[k]
        if k < bs.q and not (up_s[k] @ img).is_zero():
            raise ConsistencyError(f"pullback of a closed degree-{k} element is not closed")
        if k >= 1:
            ex = P @ up_t[k - 1]
            if ex.ncols and up_s[k - 1].hstack(ex).rank() != up_s[k - 1].rank():
                raise ConsistencyError(f"pullback of an exact degree-{k} element is not exact")
        exact = up_s[k - 1] if k >= 1 else Matrix.zeros(bs.dim(0), 0)
        system = hs.harmonic[k].hstack(exact)
        sol = system.solve(img) if img.ncols else Matrix.zeros(system.ncols, 0)
        if sol is None:
            raise ConsistencyError(f"cannot express pulled-back classes in degree {k}")
        out.append(sol.submatrix(range(hs.harmonic[k].ncols), range(img.ncols)))
    return out


def is_isomorphism(mats: Sequence[Matrix]) -> bool:
    return all(m.nrows == m.ncols and (m.nrows == 0 or m.rank() == m.nrows) for m in mats)


def alvarez_pullback_check(f: FoliatedModelMap) -> bool:
    """Whether f*kappa_b' - kappa_b is d-exact in the source basic complex."""
    bs = f.source.basic
    pulled = f.basic_pullback(1).apply(f.target.mean_curvature.kappa_b_coords)
    diff = tuple(a - b for a, b in zip(pulled, f.source.mean_curvature.kappa_b_coords))
    return bs.d_map(0).solve(Matrix.column(diff)) is not None


@dataclass(frozen=True)
class TransferConstant:
    """lambda = unit * sqrt(scale_sq); its sign is the orientation effect."""

    unit: Fraction
    scale_sq: Fraction

    @property
    def sign(self) -> int:
        return (self.unit > 0) - (self.unit < 0)

    @property
    def square(self) -> Fraction:
        return self.unit * self.unit * self.scale_sq

    @property
    def exact(self) -> Fraction | None:
        r = rational_sqrt(self.scale_sq)
        return None if r is None else self.unit * r

    def __str__(self):
        e = self.exact
        if e is not None:
            return format_scalar(e)
        return f"{'-' if self.sign < 0 else ''}sqrt({format_scalar(self.square)})"


def transfer_constant(f: FoliatedModelMap) -> TransferConstant:
    """lambda with f*nu' = lambda nu + (d - kappa_b) phi, nu the transverse volume."""
    s, t = f.source, f.target
    if not (s.oriented and t.oriented):
        raise ModelValidationError("transfer constant needs transversely oriented models")
    bs, bt = s.basic, t.basic
    if bs.q != bt.q:
        raise ModelValidationError("transfer constant needs equal codimensions")
    q = bs.q
    pulled_k = f.basic_pullback(1).apply(t.mean_curvature.kappa_b_coords)
    if pulled_k != s.mean_curvature.kappa_b_coords:
        raise ModelValidationError("transfer constant needs f*kappa_b' = kappa_b exactly")
    one_t = (Fraction(1),) + (Fraction(0),) * (bt.dim(0) - 1)
    one_s = (Fraction(1),) + (Fraction(0),) * (bs.dim(0) - 1)
    nu_t = bt.star.unit[0].apply(one_t)
    nu_s = bs.star.unit[0].apply(one_s)
    if s.root_sq * bs.integrate_with_chi(q, nu_s) != 1:
        raise ConsistencyError("transverse volume does not integrate to the total volume")
    pulled = f.basic_pullback(q).apply(nu_t)
    ju = bs.integrate_with_chi(q, pulled)
    lam = TransferConstant(ju, s.root_sq * t.root_sq)
    # f*nu'_u - root_sq(source) * ju * nu_u must be (d - kappa_b)-exact
    resid = tuple(a - s.root_sq * ju * b for a, b in zip(pulled, nu_s))
    up = twisted_differential(bs, TwistingForm.kappa_b(bs), -1)
    if q >= 1 and up[q - 1].solve(Matrix.column(resid)) is None:
        raise ConsistencyError("pulled-back volume is not a multiple of the volume class")
    return lam


def orientation_effect(f: FoliatedModelMap) -> int | None:
    try:
        return transfer_constant(f).sign
    except ModelValidationError:
        return None


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Forward f: M -> M', backward g: M' -> M, and a degree-0 unit mu on M' with mu g*f* = id."""

    forward: FoliatedModelMap
    backward: FoliatedModelMap
    mu: tuple | None = None  # basic coordinates on the target; None means the unit
    name: str = ""


def multiplication_operator(m: FoliatedModel, mu: Sequence, k: int) -> Matrix:
    """Multiplication by a basic degree-0 element on basic k-elements."""
    b = m.basic
    return b.wedge_op(0, tuple(mu), k)


def _mu(cert: EquivalenceCertificate) -> tuple:
    bt = cert.forward.target.basic
    if cert.mu is None:
        return (Fraction(1),) + (Fraction(0),) * (bt.dim(0) - 1)
    return tuple(Fraction(x) for x in cert.mu)


def certificate_inverts(cert: EquivalenceCertificate, theta: TwistingForm, sign: int = 1) -> bool:
    """mu * g*f* induces the identity on H_{d+sign*theta}(M')."""
    f, g = cert.forward, cert.backward
    bt = f.target.basic
    gf = compose(g, f)
    theta2 = gf.pull_theta(theta)
    mu = _mu(cert)
    h = cohomology(bt, theta, sign)
    up = twisted_differential(bt, theta, sign)
    for k in range(bt.q + 1):
        M = multiplication_operator(f.target, mu, k)
        # mu must intertwine d + sign*theta2 with d + sign*theta
        if k < bt.q:
            lhs = twisted_differential(bt, theta, sign)[k] @ M
            rhs = multiplication_operator(f.target, mu, k + 1) @ twisted_differential(bt, theta2, sign)[k]
            if lhs != rhs:
                return False
        img = M @ gf.basic_pullback(k) @ h.harmonic[k]
        diff = img - h.harmonic[k]
        if k == 0:
            if not diff.is_zero():
                return False
        elif diff.ncols and up[k - 1].hstack(diff).rank() != up[k - 1].rank():
            return False
    return True


def distinguished_thetas(m: FoliatedModel) -> list[TwistingForm]:
    b = m.basic
    return [TwistingForm.zero(b), TwistingForm.kappa_b(b, Fraction(1, 2)),
            TwistingForm.kappa_b(b, Fraction(-1, 2)), TwistingForm.kappa_b(b, 1),
            TwistingForm.kappa_b(b, -1)]


@dataclass
class EquivalenceReport:
    name: str
    map_diagnostics: list[str]
    isomorphism: dict[str, bool] = field(default_factory=dict)
    inverts: dict[str, bool] = field(default_factory=dict)
    alvarez: bool = False
    codimensions: tuple[int | None, int | None] = (None, None)
    transfer: TransferConstant | None = None
    pairing_scaling: bool | None = None
    sigma: tuple[int | None, int | None] = (None, None)
    orientation_effect: int | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def top_twisted_degree(m: FoliatedModel) -> int | None:
    """Largest k with H^k_{d - kappa_b} nonzero."""
    b = m.basic
    dims = cohomology(b, TwistingForm.kappa_b(b), -1).dims
    nz = [k for k, d in enumerate(dims) if d]
    return max(nz) if nz else None


def equivalence_report(cert: EquivalenceCertificate, random_count: int = 3, seed: int = 0) -> EquivalenceReport:
    f, g = cert.forward, cert.backward
    rep = EquivalenceReport(cert.name or f.name, validate_map(f) + validate_map(g))
    if rep.map_diagnostics:
        rep.failures.append("map validation: " + "; ".join(rep.map_diagnostics[:3]))
        return rep
    thetas = distinguished_thetas(f.target) + random_closed_thetas(f.target.basic, random_count, seed)
    for th in thetas:
        iso = is_isomorphism(induced_cohomology_map(f, th, 1))
        inv = certificate_inverts(cert, th, 1)
        rep.isomorphism[th.label] = iso
        rep.inverts[th.label] = inv
        if not iso:
            rep.failures.append(f"isomorphism: f* not invertible for theta={th.label}")
        if not inv:
            rep.failures.append(f"certificate: mu g*f* is not the identity for theta={th.label}")
    rep.alvarez = alvarez_pullback_check(f)
    if not rep.alvarez:
        rep.failures.append("alvarez: f*kappa_b' and kappa_b are not cohomologous")
    s, t = f.source, f.target
    rep.codimensions = (top_twisted_degree(s), top_twisted_degree(t))
    if not (rep.codimensions[0] == s.q and rep.codimensions[1] == t.q and s.q == t.q):
        rep.failures.append(f"codimension: top twisted degrees {rep.codimensions}, codimensions {(s.q, t.q)}")
    if s.oriented and t.oriented and s.q == t.q:
        lam = transfer_constant(f)
        rep.transfer = lam
        rep.orientation_effect = lam.sign
        if lam.sign == 0:
            rep.failures.append("transfer: lambda vanishes")
        if s.q % 2 == 0:
            rep.pairing_scaling = pairing_scales(f, lam)
            if not rep.pairing_scaling:
                rep.failures.append("transfer: A_F does not scale by lambda under f*")
            ss, st = basic_signature(s.basic).sigma, basic_signature(t.basic).sigma
            rep.sigma = (ss, st)
            if ss != lam.sign * st:
                rep.failures.append(f"signature: sigma(source)={ss}, sigma(target)={st}, orientation {lam.sign}")
    return rep


def pairing_scales(f: FoliatedModelMap, lam: TransferConstant) -> bool:
    """A_F(f*a, f*b) = lambda * A_F'(a, b) on the middle twisted group (unit-normalized)."""
    bs, bt = f.source.basic, f.target.basic
    ell = bt.q // 2
    half = TwistingForm.kappa_b(bt, Fraction(1, 2))
    H = cohomology(bt, half, -1).harmonic[ell]
    if H.ncols == 0:
        return True
    A_t = pairing_matrix(bt, None, H, ell)
    A_s = pairing_matrix(bs, None, f.basic_pullback(ell) @ H, ell)
    return A_s == A_t.scale(f.target.root_sq * lam.unit)


# ---------------------------------------------------------------------------
# unit-twist statements on models with nonconstant degree-0 elements


def unit_twist_intertwines(m: FoliatedModel, mu: Sequence, alpha: TwistingForm, beta: TwistingForm) -> bool:
    """Multiplication by mu carries d + alpha to d + beta and is invertible."""
    b = m.basic
    da = twisted_differential(b, alpha, 1)
    db = twisted_differential(b, beta, 1)
    for k in range(b.q + 1):
        M = multiplication_operator(m, mu, k)
        if M.nrows and M.rank() != M.nrows:
            return False
        if k < b.q and db[k] @ M != multiplication_operator(m, mu, k + 1) @ da[k]:
            return False
    return True


def maps_differ_by_unit(phi: FoliatedModelMap, psi: FoliatedModelMap, mu: Sequence,
                        theta: TwistingForm) -> bool:
    """phi* = mu psi* on H_{d+theta}(target), as classes in H_{d+phi*theta}(source)."""
    bs, bt = phi.source.basic, phi.target.basic
    h = cohomology(bt, theta, 1)
    ptheta = phi.pull_theta(theta)
    up = twisted_differential(bs, ptheta, 1)
    for k in range(min(bs.q, bt.q) + 1):
        a = phi.basic_pullback(k) @ h.harmonic[k]
        bm = multiplication_operator(phi.source, mu, k) @ psi.basic_pullback(k) @ h.harmonic[k]
        diff = a - bm
        if k == 0:
            if not diff.is_zero():
                return False
        elif diff.ncols and up[k - 1].hstack(diff).rank() != up[k - 1].rank():
            return False
    return True


def functoriality_holds(f: FoliatedModelMap, g: FoliatedModelMap, theta: TwistingForm) -> bool:
    """(g f)* = f* g* on cohomology for a twisting form on the final target."""
    gf = compose(f, g)
    lhs = induced_cohomology_map(gf, theta, 1)
    mid = induced_cohomology_map(g, theta, 1)
    rhs = induced_cohomology_map(f, g.pull_theta(theta), 1)
    return all(l == r @ m for l, r, m in zip(lhs, rhs, mid))


def random_closed_target_thetas(f: FoliatedModelMap, count: int, seed: int = 0) -> list[TwistingForm]:
    return random_closed_thetas(f.target.basic, count, seed)


__all__ = [
    "EquivalenceCertificate", "EquivalenceReport", "FoliatedModelMap", "TransferConstant",
    "alvarez_pullback_check", "certificate_inverts", "compose", "distinguished_thetas",
    "equivalence_report", "functoriality_holds", "identity_map", "induced_cohomology_map",
    "is_isomorphism", "map_from_degree1", "map_from_images", "maps_differ_by_unit",
    "orientation_effect", "pairing_scales", "require_valid", "top_twisted_degree",
    "transfer_constant", "unit_twist_intertwines", "validate_map",
]
