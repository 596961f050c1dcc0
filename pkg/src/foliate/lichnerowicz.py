"""Twisted (Lichnerowicz) cohomology of the basic complex.

Everything here acts on basic coordinates. Operators are lists of matrices
indexed by the source degree k = 0..q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, ModelValidationError
from .exterior import MultiIndexForm, format_form, format_terms
from .linalg import Matrix, format_scalar, kernel, rank_and_kernel
from .model import BasicComplex, MeanCurvatureData


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class TwistingForm:
    """A closed basic 1-form, stored in basic coordinates."""

    coords: tuple
    label: str = ""

    @classmethod
    def from_basic(cls, b: BasicComplex, coords: Sequence, label: str = "") -> TwistingForm:
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != b.dim(1):
            raise ValueError(f"twisting form needs {b.dim(1)} basic coordinates, got {len(coords)}")
        if any(b.d_map(1).apply(coords)):
            raise ModelValidationError("twisting form is not closed")
        return cls(coords, label)

    @classmethod
    def from_ambient(cls, b: BasicComplex, vec: Sequence, label: str = "") -> TwistingForm:
        try:
            coords = b.to_basic(1, tuple(Fraction(x) for x in vec))
        except ValueError as exc:
            raise ModelValidationError("twisting form is not basic") from exc
        return cls.from_basic(b, coords, label)

    @classmethod
    def zero(cls, b: BasicComplex) -> TwistingForm:
        return cls((Fraction(0),) * b.dim(1), "0")

    @classmethod
    def kappa_b(cls, b: BasicComplex, factor=1, label: str | None = None) -> TwistingForm:
        kb = b.model.mean_curvature.kappa_b_coords
        factor = Fraction(factor)
        return cls.from_basic(b, tuple(factor * c for c in kb),
                              label if label is not None else f"{format_scalar(factor)}*kappa_b")

    def scaled(self, c) -> TwistingForm:
        c = Fraction(c)
        return TwistingForm(tuple(c * x for x in self.coords), f"{format_scalar(c)}*({self.label})")

    def __add__(self, other: TwistingForm) -> TwistingForm:
        return TwistingForm(tuple(a + b for a, b in zip(self.coords, other.coords)),
                            f"{self.label}+{other.label}")

    def __sub__(self, other: TwistingForm) -> TwistingForm:
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def ambient(self, b: BasicComplex) -> tuple:
        return b.to_ambient(1, self.coords)


def wedge_theta(b: BasicComplex, theta: TwistingForm) -> list[Matrix]:
    return [b.wedge_op(1, theta.coords, k) for k in range(b.q + 1)]


def contract_theta(b: BasicComplex, theta: TwistingForm) -> list[Matrix]:
    """theta-contraction per source degree k (k -> k-1), as the Gram adjoint of theta-wedge."""
    return [b.contract_op(theta.coords, k) if k else b.zero_map(0, -1) for k in range(b.q + 1)]


def twisted_differential(b: BasicComplex, theta: TwistingForm, sign: int = 1) -> list[Matrix]:
    """d + sign * theta^ on basic k-forms, k = 0..q."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if any(b.d_map(1).apply(theta.coords)):
        raise ModelValidationError("twisting form is not closed")
    w = wedge_theta(b, theta)
    return [b.d_map(k) + w[k].scale(sign) for k in range(b.q + 1)]


def adjoint_family(b: BasicComplex, up: list[Matrix]) -> list[Matrix]:
    """Gram adjoints of a degree +1 family, indexed by their source degree (k -> k-1)."""
    out = [b.zero_map(0, -1)]
    for k in range(1, b.q + 1):
        out.append(b.adjoint(up[k - 1], k - 1, k))
    return out


def laplacian(b: BasicComplex, theta: TwistingForm, sign: int = 1) -> list[Matrix]:
    up = twisted_differential(b, theta, sign)
    down = adjoint_family(b, up)
    out = []
    for k in range(b.q + 1):
        lap = Matrix.zeros(b.dim(k), b.dim(k))
        if k < b.q:
            lap = lap + down[k + 1] @ up[k]
        if k > 0:
            lap = lap + up[k - 1] @ down[k]
        out.append(lap)
    return out


def minus_kappa_d(b: BasicComplex) -> list[Matrix]:
    """d - kappa_b^ per source degree."""
    return twisted_differential(b, TwistingForm.kappa_b(b), -1)


def delta_b_adjoint(b: BasicComplex) -> list[Matrix]:
    return [b.delta(k) if k else b.zero_map(0, -1) for k in range(b.q + 1)]


def delta_b_star(b: BasicComplex) -> list[Matrix]:
    """(-1)^{q(k+1)+1} * star (d - kappa_b^) star, with the star scale folded in."""
    U, rs = b.star.unit, b.star.root_sq
    q = b.q
    dk = minus_kappa_d(b)
    out = [b.zero_map(0, -1)]
    for k in range(1, q + 1):
        out.append((U[q - k + 1] @ dk[q - k] @ U[k]).scale(rs * _sgn(q * (k + 1) + 1)))
    return out


def delta_b(b: BasicComplex, mc: MeanCurvatureData | None = None) -> list[Matrix]:
    """Basic codifferential, computed as a Gram adjoint and via the transversal star."""
    adj = delta_b_adjoint(b)
    if b.model.oriented:
        star = delta_b_star(b)
        for k in range(1, b.q + 1):
            if adj[k] != star[k]:
                raise ConsistencyError(f"codifferential routes disagree in degree {k} on {b.model.name!r}")
    return adj


@dataclass(frozen=True)
class CohomologyReport:
    theta: TwistingForm
    sign: int
    dims: tuple[int, ...]
    ranks: tuple[int, ...]  # rank of the twisted differential leaving degree k
    harmonic: tuple[Matrix, ...]  # columns in basic coordinates
    harmonic_ambient: tuple[Matrix, ...] = field(repr=False, default=())

    @property
    def total(self) -> int:
        return sum(self.dims)


def cohomology(b: BasicComplex, theta: TwistingForm | None = None, sign: int = 1,
               mc: MeanCurvatureData | None = None) -> CohomologyReport:
    """H_{d + sign*theta} with dimensions from rank-nullity, cross-checked against ker Laplacian."""
    theta = theta or TwistingForm.zero(b)
    up = twisted_differential(b, theta, sign)
    for k in range(b.q):
        if not (up[k + 1] @ up[k]).is_zero():
            raise ConsistencyError(f"twisted differential does not square to zero in degree {k}")
    ranks, nullities = [], []
    for k in range(b.q + 1):
        r, ker = rank_and_kernel(up[k])
        ranks.append(r)
        nullities.append(ker.ncols)
    dims = [nullities[k] - (ranks[k - 1] if k else 0) for k in range(b.q + 1)]
    lap = laplacian(b, theta, sign)
    harmonic = [kernel(lap[k]) for k in range(b.q + 1)]
    for k in range(b.q + 1):
        if harmonic[k].ncols != dims[k]:
            raise ConsistencyError(f"Hodge cross-check failed in degree {k}: rank-nullity {dims[k]}, "
                                   f"harmonic {harmonic[k].ncols}")
    amb = tuple(b.bases[k] @ harmonic[k] for k in range(b.q + 1))
    return CohomologyReport(theta, sign, tuple(dims), tuple(ranks), tuple(harmonic), amb)


def betti(b: BasicComplex) -> tuple[int, ...]:
    return cohomology(b).dims


def twisted_betti(b: BasicComplex) -> tuple[int, ...]:
    """Dimensions of the cohomology of d - kappa_b/2."""
    return cohomology(b, TwistingForm.kappa_b(b, Fraction(1, 2)), -1).dims


def is_exact_class(b: BasicComplex, theta: TwistingForm, sign: int, k: int, coords: Sequence) -> bool:
    """Whether a degree-k element lies in the image of d + sign*theta from degree k-1."""
    if k == 0:
        return not any(coords)
    up = twisted_differential(b, theta, sign)[k - 1]
    return up.solve(Matrix.column(coords)) is not None


@dataclass(frozen=True)
class DualityReport:
    theta: TwistingForm
    rows: tuple[tuple[int, int, int], ...]  # (k, dim H_{d-theta}^k, dim H_{d-(kappa_b-theta)}^{q-k})
    dims_match: bool
    intertwining: bool  # star Delta_theta == Delta_{kappa_b - theta} star on every degree
    harmonic_bijection: bool

    @property
    def holds(self) -> bool:
        return self.dims_match and self.intertwining and self.harmonic_bijection


def duality_check(b: BasicComplex, theta: TwistingForm | None = None,
                  mc: MeanCurvatureData | None = None) -> DualityReport:
    """Twisted duality H_{d-theta}^k vs H_{d-(kappa_b-theta)}^{q-k}."""
    if not b.model.oriented:
        raise ModelValidationError(f"model {b.model.name!r} is not transversely oriented")
    theta = theta or TwistingForm.zero(b)
    dual = TwistingForm.kappa_b(b) - theta
    left = cohomology(b, theta, -1)
    right = cohomology(b, dual, -1)
    q = b.q
    rows = tuple((k, left.dims[k], right.dims[q - k]) for k in range(q + 1))
    U = b.star.unit
    lap_l = laplacian(b, theta, -1)
    lap_r = laplacian(b, dual, -1)
    inter = all(U[k] @ lap_l[k] == lap_r[q - k] @ U[k] for k in range(q + 1))
    bij = True
    for k in range(q + 1):
        img = U[k] @ left.harmonic[k]
        if img.rank() != left.dims[k] or not (lap_r[q - k] @ img).is_zero():
            bij = False
    return DualityReport(theta, rows, all(r[1] == r[2] for r in rows), inter, bij)


def classical_duality_holds(b: BasicComplex) -> bool:
    d = betti(b)
    return all(d[k] == d[b.q - k] for k in range(b.q + 1))


def zero_degree_classification(b: BasicComplex, theta: TwistingForm) -> tuple[int, bool]:
    """(dim H^0_{d-theta}, theta exact). The two must agree: dim 1 iff theta exact."""
    dim0 = cohomology(b, theta, -1).dims[0]
    exact = b.d_map(0).solve(Matrix.column(theta.coords)) is not None
    return dim0, exact


# ---------------------------------------------------------------------------
# operator identities relating the transversal star to wedge/contraction


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    degree: int
    holds: bool


IDENTITY_NAMES = (
    "star_squared",
    "contraction_as_conjugated_wedge",
    "codifferential_as_conjugated_d",
    "contraction_after_star",
    "star_after_contraction",
    "codifferential_after_star",
    "star_after_codifferential",
)


def operator_identities(b: BasicComplex, theta: TwistingForm) -> list[IdentityCheck]:
    """Seven star identities on basic k-forms, each as an exact matrix equation.

    Products with two stars pick up root_sq; products with one star on each
    side compare unit matrices directly.
    """
    if not b.model.oriented:
        raise ModelValidationError(f"model {b.model.name!r} is not transversely oriented")
    q = b.q
    U, rs = b.star.unit, b.star.root_sq
    W = wedge_theta(b, theta)
    C = contract_theta(b, theta)
    D = minus_kappa_d(b)
    delta = delta_b_adjoint(b)

    out = []
    for k in range(q + 1):
        checks = []
        checks.append(((U[q - k] @ U[k]).scale(rs) == Matrix.identity(b.dim(k)).scale(_sgn(k * (q - k)))))
        if k >= 1:
            checks.append(C[k] == (U[q - k + 1] @ W[q - k] @ U[k]).scale(rs * _sgn(q * (k + 1))))
            checks.append(delta[k] == (U[q - k + 1] @ D[q - k] @ U[k]).scale(rs * _sgn(q * (k + 1) + 1)))
        else:
            checks.append(True)
            checks.append(True)
        # (theta_|) star = (-1)^k star (theta^): k -> q-k-1
        if k < q:
            checks.append(C[q - k] @ U[k] == (U[k + 1] @ W[k]).scale(_sgn(k)))
        else:
            checks.append(True)
        # star (theta_|) = (-1)^{k+1} (theta^) star: k -> q-k+1
        if k >= 1:
            checks.append(U[k - 1] @ C[k] == (W[q - k] @ U[k]).scale(_sgn(k + 1)))
        else:
            checks.append(True)
        # delta_b star = (-1)^{k+1} star (d - kappa_b^): k -> q-k-1
        if k < q:
            checks.append(delta[q - k] @ U[k] == (U[k + 1] @ D[k]).scale(_sgn(k + 1)))
        else:
            checks.append(True)
        # star delta_b = (-1)^k (d - kappa_b^) star: k -> q-k+1
        if k >= 1:
            checks.append(U[k - 1] @ delta[k] == (D[q - k] @ U[k]).scale(_sgn(k)))
        else:
            checks.append(True)
        out.extend(IdentityCheck(n, k, bool(h)) for n, h in zip(IDENTITY_NAMES, checks))
    return out


def closed_one_forms(b: BasicComplex) -> Matrix:
    """Basis (columns, basic coordinates) of closed basic 1-forms."""
    if b.q < 1:
        return Matrix.zeros(0, 0)
    return kernel(b.d_map(1)) if b.q >= 2 else Matrix.identity(b.dim(1))


def random_closed_thetas(b: BasicComplex, count: int, seed: int = 0, span: int = 3) -> list[TwistingForm]:
    """Seeded rational combinations of a basis of closed basic 1-forms."""
    rng = random.Random(seed)
    basis = closed_one_forms(b)
    out = []
    for i in range(count):
        coefs = [Fraction(rng.randint(-span, span), rng.randint(1, span)) for _ in range(basis.ncols)]
        v = tuple(sum((c * x for c, x in zip(coefs, row)), Fraction(0)) for row in basis.rows) \
            if basis.ncols else (Fraction(0),) * b.dim(1)
        out.append(TwistingForm.from_basic(b, v, f"random[{seed}:{i}]"))
    return out


def format_basic(b: BasicComplex, k: int, coords: Sequence) -> str:
    """Render a basic element in ambient labels."""
    m = b.model
    amb = b.to_ambient(k, coords)
    if m.lie is not None:
        return format_form(MultiIndexForm.from_vector(m.lie.n, k, amb))
    return format_terms(zip(amb, m.labels[k]))
