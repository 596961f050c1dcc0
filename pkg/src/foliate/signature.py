"""The star involution, the basic signature and the middle-degree pairing.

Scale convention: the transversal star is ``sqrt(root_sq) * U``. Signatures
are insensitive to that positive factor, so everything below is computed on
the unit matrices; identities with two stars pick up ``root_sq``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, ModelValidationError
from .lichnerowicz import TwistingForm, adjoint_family, cohomology, twisted_differential
from .linalg import (GaussianRational, Matrix, as_gaussian, i_power, is_hermitian,
                     orthogonal_projection, sylvester_signature)
from .model import BasicComplex, MeanCurvatureData


def _half_kappa(b: BasicComplex) -> TwistingForm:
    return TwistingForm.kappa_b(b, Fraction(1, 2), "1/2*kappa_b")


def _require_even(b: BasicComplex):
    if not b.model.oriented:
        raise ModelValidationError(f"model {b.model.name!r} is not transversely oriented")
    if b.q % 2:
        raise ModelValidationError(f"codimension {b.q} is odd; the signature is undefined")


@dataclass(frozen=True)
class StarInvolution:
    """Unit matrices of i^{k(k-1)+q/2} * star per source degree (true operator: sqrt(root_sq) times)."""

    unit: tuple[Matrix, ...]
    root_sq: Fraction

    def squares_to_identity(self) -> bool:
        q = len(self.unit) - 1
        return all((self.unit[q - k] @ self.unit[k]).scale(self.root_sq) == as_gaussian(Matrix.identity(self.unit[k].ncols))
                   for k in range(q + 1))


def star_involution(b: BasicComplex, mc: MeanCurvatureData | None = None) -> StarInvolution:
    _require_even(b)
    q = b.q
    mats = []
    for k in range(q + 1):
        c = i_power(k * (k - 1) + q // 2)
        mats.append(as_gaussian(b.star.unit[k]).scale(c))
    return StarInvolution(tuple(mats), b.star.root_sq)


@dataclass(frozen=True)
class InvolutionChecks:
    squares_to_identity: bool
    gram_symmetric: bool
    anticommutes_with_d: bool  # star d~ = - delta~ star
    anticommutes_with_delta: bool  # star delta~ = - d~ star

    @property
    def all(self) -> bool:
        return self.squares_to_identity and self.gram_symmetric and self.anticommutes_with_d \
            and self.anticommutes_with_delta


def involution_checks(b: BasicComplex) -> InvolutionChecks:
    S = star_involution(b)
    q = b.q
    G = [as_gaussian(b.gram_of(k)) for k in range(q + 1)]
    up = [as_gaussian(m) for m in twisted_differential(b, _half_kappa(b), -1)]
    down = [as_gaussian(m) for m in adjoint_family(b, twisted_differential(b, _half_kappa(b), -1))]
    U = S.unit
    sym = all(U[k].H @ G[q - k] == G[k] @ U[q - k] for k in range(q + 1))
    ad = all(U[k + 1] @ up[k] == -(down[q - k] @ U[k]) for k in range(q))
    add = all(U[k - 1] @ down[k] == -(up[q - k] @ U[k]) for k in range(1, q + 1))
    return InvolutionChecks(S.squares_to_identity(), sym, ad, add)


@dataclass(frozen=True)
class SignatureReport:
    q: int
    ell: int
    dim_plus: int
    dim_minus: int
    sigma: int
    pairing: Matrix  # unit-normalized A_F on a harmonic basis of the middle twisted group
    pairing_scale_sq: Fraction  # true A_F = sqrt(pairing_scale_sq) * pairing
    pairing_signature: tuple[int, int, int]
    pairing_rank: int
    harmonic_basis: Matrix  # basic coordinates

    @property
    def nondegenerate(self) -> bool:
        return self.pairing_rank == self.pairing.nrows


def _total_layout(b: BasicComplex) -> list[int]:
    off, acc = [], 0
    for k in range(b.q + 1):
        off.append(acc)
        acc += b.dim(k)
    return off + [acc]


def kernel_split(b: BasicComplex) -> tuple[int, int]:
    """(dim ker Delta~ on the +1 space, on the -1 space) of the star involution.

    The Hermitian form <x, star y> on ker Delta~ has the same inertia as the
    involution restricted there, and the positive star scale does not change it.
    """
    S = star_involution(b)
    q = b.q
    harm = cohomology(b, _half_kappa(b), -1).harmonic
    off = _total_layout(b)
    N = off[-1]
    G = Matrix.block_diag([b.gram_of(k) for k in range(q + 1)])
    star = [[GaussianRational(0)] * N for _ in range(N)]
    for k in range(q + 1):
        u = S.unit[k]
        for i in range(u.nrows):
            for j in range(u.ncols):
                star[off[q - k] + i][off[k] + j] = u[i, j]
    star = Matrix(star, N)
    cols = []
    for k in range(q + 1):
        for c in harm[k].columns():
            v = [Fraction(0)] * N
            v[off[k]:off[k] + len(c)] = c
            cols.append(v)
    K = as_gaussian(Matrix.from_columns(cols, N))
    if K.ncols and not (K.rank() == (K.hstack(star @ K)).rank()):
        raise ConsistencyError("star does not preserve the twisted harmonic space")
    form = K.H @ as_gaussian(G) @ star @ K
    if not is_hermitian(form):
        raise ConsistencyError("star involution is not Gram-symmetric on harmonic elements")
    pos, neg, zero = sylvester_signature(form)
    if zero:
        raise ConsistencyError("star involution is singular on harmonic elements")
    return pos, neg


def pairing_matrix(b: BasicComplex, mc: MeanCurvatureData | None, harmonic_basis: Matrix,
                   k: int | None = None) -> Matrix:
    """Unit-normalized integral(a_i ^ a_j ^ chi) on the given basic k-elements (columns)."""
    k = b.q // 2 if k is None else k
    cols = harmonic_basis.columns()
    rows = []
    for a in cols:
        pa = b.pairing_op(k, a)
        rows.append([sum((x * y for x, y in zip(pa, c)), Fraction(0)) for c in cols])
    return Matrix(rows, len(cols))


def basic_signature(b: BasicComplex, mc: MeanCurvatureData | None = None) -> SignatureReport:
    """Signature from the star split of ker Delta~ and from the pairing; both must agree."""
    _require_even(b)
    q, ell = b.q, b.q // 2
    plus, minus = kernel_split(b)
    H = cohomology(b, _half_kappa(b), -1).harmonic[ell]
    A = pairing_matrix(b, mc, H, ell)
    rank = A.rank() if A.nrows else 0
    if ell % 2:
        if A != -A.T:
            raise ConsistencyError("odd middle-degree pairing is not antisymmetric")
        sym = Matrix.zeros(A.nrows, A.nrows)
        psig = sylvester_signature(sym)
        if plus != minus:
            raise ConsistencyError(f"odd middle degree but star split is ({plus}, {minus})")
    else:
        if A != A.T:
            raise ConsistencyError("even middle-degree pairing is not symmetric")
        psig = sylvester_signature(A)
    sigma = plus - minus
    if sigma != psig[0] - psig[1]:
        raise ConsistencyError(f"signature routes disagree: star split {sigma}, pairing {psig}")
    return SignatureReport(q, ell, plus, minus, sigma, A, b.model.root_sq, psig, rank, H)


# ---------------------------------------------------------------------------
# the general pairing of twisted classes into basic cohomology


@dataclass(frozen=True)
class ClassPairing:
    degree: int  # q - r - s
    unit_coords: tuple  # star of the harmonic representative, unit-normalized (basic coordinates)
    root_sq: Fraction

    @property
    def is_zero(self) -> bool:
        return not any(self.unit_coords)


def harmonic_projection(b: BasicComplex, k: int, theta: TwistingForm, sign: int, coords: Sequence) -> tuple:
    """Gram-orthogonal projection of a degree-k element onto ker Laplacian of d + sign*theta."""
    H = cohomology(b, theta, sign).harmonic[k]
    if H.ncols == 0:
        return (Fraction(0),) * b.dim(k)
    return orthogonal_projection(H, b.gram_of(k)).apply(coords)


def class_pairing(b: BasicComplex, mc: MeanCurvatureData | None, alpha: Sequence, r: int,
                  beta: Sequence, s: int) -> ClassPairing:
    """[alpha] x [beta] -> star of the harmonic part of alpha ^ beta, a d-closed class."""
    q = b.q
    if r + s > q:
        raise ValueError("degrees exceed the codimension")
    up = twisted_differential(b, _half_kappa(b), -1)
    for deg, x in ((r, alpha), (s, beta)):
        if any(up[deg].apply(x)):
            raise ModelValidationError(f"degree-{deg} input is not closed for the twisted differential")
    amb = b.model.product(r, b.to_ambient(r, alpha), s, b.to_ambient(s, beta))
    ab = b.to_basic(r + s, amb)
    kd = twisted_differential(b, TwistingForm.kappa_b(b), -1)
    if any(kd[r + s].apply(ab)):
        raise ConsistencyError("product of twisted-closed elements is not closed for d - kappa_b")
    h = harmonic_projection(b, r + s, TwistingForm.kappa_b(b), -1, ab)
    out = b.star.unit[r + s].apply(h)
    if any(b.d_map(q - r - s).apply(out)):
        raise ConsistencyError("paired class is not d-closed")
    return ClassPairing(q - r - s, out, b.model.root_sq)


def exact_perturbations(b: BasicComplex, k: int, count: int, seed: int = 0, span: int = 3) -> list[tuple]:
    """Seeded images d~(gamma) of random basic (k-1)-elements."""
    rng = random.Random(seed)
    if k == 0:
        return [(Fraction(0),) * b.dim(0)] * count
    up = twisted_differential(b, _half_kappa(b), -1)[k - 1]
    out = []
    for _ in range(count):
        g = tuple(Fraction(rng.randint(-span, span), rng.randint(1, span)) for _ in range(b.dim(k - 1)))
        out.append(up.apply(g))
    return out


def pairing_well_defined(b: BasicComplex, count: int = 20, seed: int = 0) -> bool:
    """A_F on harmonic representatives equals A_F on randomly perturbed representatives."""
    ell = b.q // 2
    H = cohomology(b, _half_kappa(b), -1).harmonic[ell]
    if H.ncols == 0:
        return True
    base = pairing_matrix(b, None, H, ell)
    rng = random.Random(seed)
    for t in range(count):
        perts = exact_perturbations(b, ell, H.ncols, seed=rng.randrange(1 << 30))
        cols = [tuple(x + y for x, y in zip(c, p)) for c, p in zip(H.columns(), perts)]
        if pairing_matrix(b, None, Matrix.from_columns(cols, b.dim(ell)), ell) != base:
            return False
    return True


__all__ = [
    "ClassPairing", "InvolutionChecks", "SignatureReport", "StarInvolution", "basic_signature",
    "class_pairing", "exact_perturbations", "harmonic_projection", "involution_checks",
    "kernel_split", "pairing_matrix", "pairing_well_defined", "star_involution",
]
