"""Built-in example models, alternate bundle-like metrics and equivalence certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import ModelValidationError
from .exterior import FramedMetric
from .linalg import Matrix
from .model import FoliatedModel, from_cdga, from_lie_algebra, lie_product, with_metric
from .morphisms import (EquivalenceCertificate, FoliatedModelMap, identity_map, map_from_degree1,
                        map_from_images, require_valid)

F = Fraction


@dataclass(frozen=True)
class ZooEntry:
    name: str
    model: FoliatedModel
    expected: dict  # basic_betti, twisted_betti, taut, sigma (None when undefined)
    note: str
    alt_metric: FramedMetric | None = None

    @property
    def is_frame(self) -> bool:
        return self.model.lie is not None


def abelian(n: int, leaf=(), metric: FramedMetric | None = None, name: str = "abelian") -> FoliatedModel:
    return from_lie_algebra([], leaf, metric or FramedMetric.orthonormal(n), name=name)


SOL = [(3, 1, 1, 1), (3, 2, 2, -1)]
SU2 = [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)]
HEIS = [(1, 2, 3, 1)]


def carriere(metric: FramedMetric | None = None) -> FoliatedModel:
    return from_lie_algebra(SOL, [1], metric or FramedMetric.orthonormal(3), name="carriere_sol3")


def hopf(metric: FramedMetric | None = None) -> FoliatedModel:
    return from_lie_algebra(SU2, [3], metric or FramedMetric.orthonormal(3), name="hopf_su2")


def heisenberg(metric: FramedMetric | None = None) -> FoliatedModel:
    return from_lie_algebra(HEIS, [3], metric or FramedMetric.orthonormal(3), name="heisenberg_flow")


def intersection_cdga(form: Matrix, name: str = "intersection_cdga") -> FoliatedModel:
    """Point foliation of codimension 4 with H^2 spanned by x1..xm and x_i x_j = form_ij * v.

    The form must be symmetric with form @ form = I so that the unit Gram is
    compatible with a star squaring to the identity.
    """
    m = form.nrows
    if form != form.T or form @ form != Matrix.identity(m):
        raise ModelValidationError("intersection form must be symmetric and square to the identity")
    xs = [f"x{i + 1}" for i in range(m)] if m > 1 else ["x"]
    top = "v" if m > 1 else "x2"
    mul = {}
    for i in range(m):
        for j in range(i, m):
            if form[i, j]:
                mul[(xs[i], xs[j])] = {top: form[i, j]}
    return from_cdga(name=name, labels=[["1"], [], xs, [], [top]], p=0, q=4, mul=mul, diff={},
                     integral={top: 1}, chi={"1": 1})


def cp2() -> FoliatedModel:
    return intersection_cdga(Matrix([[1]]), name="cp2_cdga")


def unit_function() -> FoliatedModel:
    """Degree 0 spanned by 1 and f with f^2 = 0; u = df, e closed, g = f e, w = u e."""
    mul = {("f", "e"): {"g": 1}, ("u", "e"): {"w": 1}}
    diff = {"f": {"u": 1}, "g": {"w": 1}}
    return from_cdga(name="unit_function_cdga", labels=[["1", "f"], ["u", "e", "g"], ["w"]], p=0, q=2,
                     mul=mul, diff=diff)


def _metric(rows, orientation=()) -> FramedMetric:
    return FramedMetric(Matrix([[F(x) for x in r] for r in rows]), tuple(orientation))


# alternate bundle-like metrics: each tilts the leaf/normal splitting or rescales
ALT_METRICS = {
    "torus2_point": _metric([[2, 1], [1, 1]]),
    "torus3_flow": _metric([[2, 1, 0], [1, 2, 1], [0, 1, 2]]),
    "torus4_point": _metric([[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 3, 1], [0, 0, 1, 1]]),
    "heisenberg_flow": _metric([[2, 0, 1], [0, 1, 0], [1, 0, 3]]),
    "carriere_sol3": _metric([[2, 1, 1], [1, 3, 1], [1, 1, 2]]),
    # inverse of the cometric [[1/2,0,1/4],[0,1/2,0],[1/4,0,1]]: transverse cometric stays scalar
    "hopf_su2": FramedMetric(Matrix([[F(1, 2), 0, F(1, 4)], [0, F(1, 2), 0], [F(1, 4), 0, 1]]).inverse()),
    "carriere_x_torus2": _metric([[2, 1, 1, 0, 0], [1, 3, 1, 0, 0], [1, 1, 2, 0, 0], [0, 0, 0, 2, 1], [0, 0, 0, 1, 1]]),
    "hopf_x_torus2": None,
}


def _builders() -> dict[str, Callable[[], tuple[FoliatedModel, dict, str]]]:
    return {
        "torus2_point": lambda: (abelian(2, name="torus2_point"),
                                 dict(basic_betti=(1, 2, 1), twisted_betti=(1, 2, 1), taut=True, sigma=0),
                                 "abelian Lie algebra of dimension 2, point foliation"),
        "torus3_flow": lambda: (abelian(3, [1], name="torus3_flow"),
                                dict(basic_betti=(1, 2, 1), twisted_betti=(1, 2, 1), taut=True, sigma=0),
                                "linear flow on the 3-torus; leaf e1"),
        "torus4_point": lambda: (abelian(4, name="torus4_point"),
                                 dict(basic_betti=(1, 4, 6, 4, 1), twisted_betti=(1, 4, 6, 4, 1), taut=True,
                                      sigma=0),
                                 "abelian Lie algebra of dimension 4, point foliation"),
        "heisenberg_flow": lambda: (heisenberg(),
                                    dict(basic_betti=(1, 2, 1), twisted_betti=(1, 2, 1), taut=True, sigma=0),
                                    "Heisenberg nilmanifold foliated by the central direction"),
        "carriere_sol3": lambda: (carriere(),
                                  dict(basic_betti=(1, 1, 0), twisted_betti=(0, 0, 0), taut=False, sigma=0),
                                  "Sol torus bundle foliated by the expanding direction; invariant forms only, "
                                  "the lattice and monodromy are not modelled"),
        "hopf_su2": lambda: (hopf(),
                             dict(basic_betti=(1, 0, 1), twisted_betti=(1, 0, 1), taut=True, sigma=0),
                             "su(2) foliated by one Hopf direction"),
        "cp2_cdga": lambda: (cp2(),
                             dict(basic_betti=(1, 0, 1, 0, 1), twisted_betti=(1, 0, 1, 0, 1), taut=True,
                                  sigma=1),
                             "truncated polynomial algebra on a degree-2 class with x^2 integrating to 1"),
        "intersection_cdga_s2": lambda: (intersection_cdga(Matrix.diag([F(1), F(1), F(1), F(-1)]),
                                                           "intersection_cdga_s2"),
                                         dict(basic_betti=(1, 0, 4, 0, 1), twisted_betti=(1, 0, 4, 0, 1),
                                              taut=True, sigma=2),
                                         "codimension-4 cdga with intersection form diag(1,1,1,-1)"),
        "unit_function_cdga": lambda: (unit_function(),
                                       dict(basic_betti=(1, 1, 0), twisted_betti=(1, 1, 0), taut=True,
                                            sigma=None),
                                       "degree-0 part {1, f} with f^2 = 0; not transversely oriented"),
        "carriere_x_torus2": lambda: (lie_product(carriere(), abelian(2), "carriere_x_torus2"),
                                      dict(basic_betti=(1, 3, 3, 1, 0), twisted_betti=(0, 0, 0, 0, 0),
                                           taut=False, sigma=0),
                                      "product of the Sol flow with a point-foliated 2-torus"),
        "hopf_x_torus2": lambda: (lie_product(hopf(), abelian(2), "hopf_x_torus2"),
                                  dict(basic_betti=(1, 2, 2, 2, 1), twisted_betti=(1, 2, 2, 2, 1),
                                       taut=True, sigma=0),
                                  "product of the Hopf model with a point-foliated 2-torus"),
    }


NAMES = tuple(_builders())


@lru_cache(maxsize=None)
def builtin(name: str) -> ZooEntry:
    b = _builders()
    if name not in b:
        raise KeyError(f"unknown zoo model {name!r}; available: {', '.join(NAMES)}")
    model, expected, note = b[name]()
    return ZooEntry(name, model, expected, note, ALT_METRICS.get(name))


def all_entries() -> list[ZooEntry]:
    return [builtin(n) for n in NAMES]


def product(a: FoliatedModel, b: FoliatedModel, name: str | None = None) -> FoliatedModel:
    return lie_product(a, b, name)


# ---------------------------------------------------------------------------
# equivalence certificates


def _cert(name: str, f: FoliatedModelMap, g: FoliatedModelMap, mu=None) -> EquivalenceCertificate:
    return EquivalenceCertificate(require_valid(f), require_valid(g), mu, name)


def _perm(n: int, images: dict[int, dict[int, int]]) -> Matrix:
    """Degree-1 matrix from {target generator: {source generator: coefficient}} (identity elsewhere)."""
    rows = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    for j, img in images.items():
        for i in range(n):
            rows[i][j - 1] = F(0)
        for i, c in img.items():
            rows[i - 1][j - 1] = F(c)
    return Matrix(rows, n)


@lru_cache(maxsize=None)
def certificates() -> tuple[EquivalenceCertificate, ...]:
    out = []
    for e in all_entries():
        if e.model.oriented:
            i = identity_map(e.model)
            out.append(_cert(f"identity:{e.name}", i, i))
    car = builtin("carriere_sol3").model
    car_alt = with_metric(car, ALT_METRICS["carriere_sol3"], "carriere_sol3_alt")
    out.append(_cert("carriere:metric_change", identity_map(car, car_alt), identity_map(car_alt, car)))
    car4 = with_metric(car, FramedMetric.diagonal(4, 1, 1), "carriere_sol3_leaf4")
    out.append(_cert("carriere:leaf_rescale", identity_map(car, car4), identity_map(car4, car)))
    flip = map_from_degree1(car, car, _perm(3, {2: {2: -1}}), "flip_e2")
    out.append(_cert("carriere:flip_e2", flip, flip))
    t4 = builtin("torus4_point").model
    shear = map_from_degree1(t4, t4, _perm(4, {1: {1: 1, 2: 1}}), "shear")
    unshear = map_from_degree1(t4, t4, _perm(4, {1: {1: 1, 2: -1}}), "unshear")
    out.append(_cert("torus4:shear", shear, unshear))
    swap = map_from_degree1(t4, t4, _perm(4, {1: {2: 1}, 2: {1: 1}}), "swap12")
    out.append(_cert("torus4:swap", swap, swap))
    c = builtin("cp2_cdga").model
    neg = map_from_images(c, c, {"x": {"x": -1}, "x2": {"x2": 1}}, "x_to_minus_x")
    out.append(_cert("cp2:negate_x", neg, neg))
    h = builtin("hopf_x_torus2").model
    h_alt = with_metric(h, FramedMetric(Matrix.block_diag([ALT_METRICS["hopf_su2"].gram,
                                                           Matrix.diag([F(3), F(1)])])), "hopf_x_torus2_alt")
    out.append(_cert("hopf_x_torus2:metric_change", identity_map(h, h_alt), identity_map(h_alt, h)))
    return tuple(out)


def alvarez_counterexample() -> FoliatedModelMap:
    """Valid map from the taut linear 3-torus flow to the Sol flow that is not an equivalence."""
    src = builtin("torus3_flow").model
    tgt = builtin("carriere_sol3").model
    m = Matrix([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
    return require_valid(map_from_degree1(src, tgt, m, "collapse_to_e3"))


def unit_function_maps() -> tuple[FoliatedModelMap, FoliatedModelMap, tuple]:
    """phi (f, u, g, w -> 0; e -> e) and psi = id on the {1, f} model, with mu = 1 + f.

    For theta = u + a*e one has phi*theta = psi*theta - u and u = d log(mu), so
    phi* = mu psi* from H_{d+theta} to H_{d+phi*theta}. For theta = u the groups
    are nonzero: (1 - f) spans H^0_{d+u} and maps to 1 under both sides.
    """
    m = builtin("unit_function_cdga").model
    phi = map_from_images(m, m, {"e": {"e": 1}}, "phi")
    psi = identity_map(m)
    mu = m.basic.to_basic(0, (F(1), F(1)))
    return require_valid(phi), require_valid(psi), mu
