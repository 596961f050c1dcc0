"""Model and map files (YAML) and structured report documents (JSON).

Scalars are always written as exact text ("p/q", "p/q+r/s*i"); forms as sums
of "c * e{i,j}" terms for frame models or "c * label" terms for cdga models.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ModelValidationError
from .exterior import FramedMetric, MultiIndexForm, format_form, format_terms, parse_form, split_terms
from .linalg import Matrix, format_scalar, parse_scalar
from .model import FoliatedModel, from_cdga, from_lie_algebra

LIE_FIELDS = {"name", "kind", "dim", "leaf", "structure_constants", "metric", "orientation"}
CDGA_FIELDS = {"name", "kind", "dim", "leaf", "basis", "mul", "diff", "contractions", "kappa", "chi",
               "metric", "orientation", "integral", "codim", "leaf_rank"}
MAP_FIELDS = {"source", "target", "matrix_deg1", "backward_deg1", "images", "backward_images", "mu", "name"}


class ParseError(ValueError):
    """Malformed file or command-line text."""


def _scalar(x) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"not a scalar: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_scalar(x)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"scalars must be exact text, got {x!r}")


def _rows(rows, what: str) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a list of rows")
    if not rows:
        return Matrix.zeros(0, 0)
    try:
        return Matrix([[_scalar(x) for x in r] for r in rows])
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def _label_expr(text, labels: set[str], what: str) -> dict[str, Fraction]:
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ParseError(f"{what} must be an expression string")
    try:
        terms = split_terms(text)
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from exc
    out: dict[str, Fraction] = {}
    for c, name in terms:
        if name not in labels:
            raise ParseError(f"{what}: unknown basis label {name!r}")
        out[name] = out.get(name, Fraction(0)) + c
    return out


def _known(label, labels: set[str], what: str) -> str:
    label = str(label)
    if label not in labels:
        raise ParseError(f"{what}: unknown basis label {label!r}")
    return label


def _load_yaml(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be a mapping")
    return doc


def model_from_dict(doc: Mapping[str, Any]) -> FoliatedModel:
    kind = doc.get("kind")
    if kind not in ("lie", "cdga"):
        raise ParseError("field 'kind' must be 'lie' or 'cdga'")
    allowed = LIE_FIELDS if kind == "lie" else CDGA_FIELDS
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ParseError(f"unknown fields {unknown}")
    name = str(doc.get("name", "model"))
    if kind == "lie":
        n = doc.get("dim")
        if not isinstance(n, int) or n < 0:
            raise ParseError("field 'dim' must be a nonnegative integer")
        consts = []
        for e in doc.get("structure_constants", []) or []:
            if not isinstance(e, list) or len(e) != 4 or not all(isinstance(x, int) for x in e[:3]):
                raise ParseError(f"structure constant entries are [i, j, k, value], got {e!r}")
            consts.append((e[0], e[1], e[2], _scalar(e[3])))
        leaf = doc.get("leaf", []) or []
        if not isinstance(leaf, list) or not all(isinstance(x, int) for x in leaf):
            raise ParseError("field 'leaf' must be a list of indices")
        G = _rows(doc["metric"], "metric") if "metric" in doc else Matrix.identity(n)
        if G.shape != (n, n):
            raise ParseError(f"metric must be {n}x{n}")
        orient = tuple(doc.get("orientation", []) or [])
        try:
            metric = FramedMetric(G, orient)
        except ValueError as exc:
            raise ModelValidationError(str(exc)) from exc
        return from_lie_algebra(consts, leaf, metric, name=name)

    basis = doc.get("basis")
    if not isinstance(basis, list) or not all(isinstance(b, list) for b in basis):
        raise ParseError("field 'basis' must be a list of per-degree label lists")
    basis = [[str(x) for x in b] for b in basis]
    labels = {x for b in basis for x in b}
    q = doc.get("codim", len(basis) - 1)
    p = doc.get("leaf_rank", 0)
    mul = {}
    for e in doc.get("mul", []) or []:
        if not isinstance(e, list) or len(e) != 3:
            raise ParseError(f"mul entries are [a, b, expression], got {e!r}")
        a, b = str(e[0]), str(e[1])
        for x in (a, b):
            if x not in labels:
                raise ParseError(f"mul: unknown basis label {x!r}")
        mul[(a, b)] = _label_expr(e[2], labels, f"mul {a}*{b}")
    diff = {_known(k, labels, "diff"): _label_expr(v, labels, f"diff {k}")
            for k, v in (doc.get("diff") or {}).items()}
    ctr = [{_known(k, labels, "contraction"): _label_expr(v, labels, "contraction") for k, v in (c or {}).items()}
           for c in (doc.get("contractions") or [])]
    gram = None
    if "metric" in doc:
        m = doc["metric"]
        if not isinstance(m, list) or len(m) != len(basis):
            raise ParseError("cdga metric must list one Gram matrix per degree")
        gram = [_rows(g, f"metric degree {k}") if g else Matrix.zeros(0, 0) for k, g in enumerate(m)]
    opt = {}
    for key in ("integral", "chi", "kappa"):
        if key in doc and doc[key] is not None:
            opt[key] = _label_expr(doc[key], labels, key)
    try:
        return from_cdga(name=name, labels=basis, p=p, q=q, mul=mul, diff=diff, contractions=ctr,
                         gram=gram, **opt)
    except KeyError as exc:
        raise ModelValidationError(str(exc)) from exc


def load_model(path: str | Path) -> FoliatedModel:
    return model_from_dict(_load_yaml(Path(path).read_text()))


def format_element(m: FoliatedModel, k: int, vec) -> str:
    """Render an ambient degree-k vector in the model's own notation."""
    if m.lie is not None:
        return format_form(MultiIndexForm.from_vector(m.lie.n, k, vec))
    return format_terms(zip(vec, m.labels[k]))


def model_to_dict(m: FoliatedModel) -> dict:
    """Inverse of :func:`model_from_dict` up to the validated structure."""
    if m.lie is not None:
        lie = m.lie
        consts = [[i, j, k, format_scalar(c)] for (i, j, k), c in sorted(lie.constants.items()) if i < j]
        return {
            "name": m.name, "kind": "lie", "dim": lie.n, "leaf": list(lie.leaf),
            "structure_constants": consts,
            "metric": [[format_scalar(x) for x in r] for r in lie.metric.gram.rows],
            "orientation": list(lie.metric.orientation),
        }
    unit = m.labels[0][0]
    mul = []
    for (da, db), table in sorted(m.mul.items()):
        for i, a in enumerate(m.labels[da]):
            for j, b in enumerate(m.labels[db]):
                if a == unit or b == unit or (da, i) > (db, j):
                    continue
                v = table[i][j]
                if any(v):
                    mul.append([a, b, format_element(m, da + db, v)])
    diff = {}
    for k in range(m.top + 1):
        for j, lab in enumerate(m.labels[k]):
            col = m.d_map(k).col(j)
            if any(col):
                diff[lab] = format_element(m, k + 1, col)
    ctr = []
    for c in m.contractions:
        entry = {}
        for k in range(1, m.top + 1):
            for j, lab in enumerate(m.labels[k]):
                col = c[k].col(j)
                if any(col):
                    entry[lab] = format_element(m, k - 1, col)
        ctr.append(entry)
    doc = {"name": m.name, "kind": "cdga", "basis": m.labels, "codim": m.q, "leaf_rank": m.p,
           "mul": mul, "diff": diff, "contractions": ctr,
           "metric": [[[format_scalar(x) for x in r] for r in g.rows] for g in m.gram]}
    if m.integral is not None:
        doc["integral"] = format_element(m, m.top, m.integral)
    if m.chi is not None:
        doc["chi"] = format_element(m, m.p, m.chi)
    kap = m.mean_curvature.kappa
    if any(kap):
        doc["kappa"] = format_element(m, 1, kap)
    return doc


def dump_model(m: FoliatedModel) -> str:
    return yaml.safe_dump(model_to_dict(m), sort_keys=False, default_flow_style=None, width=100)


def parse_element(m: FoliatedModel, k: int, text: str) -> tuple:
    """Ambient degree-k vector from an expression in the model's notation."""
    if m.lie is not None:
        try:
            f = parse_form(str(text), m.lie.n)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        if f.is_zero():
            return m.zero(k)
        if f.degrees() != {k}:
            raise ParseError(f"expression {text!r} is not of degree {k}")
        return f.to_vector(k)
    coeffs = _label_expr(text, {x for ls in m.labels for x in ls}, "element")
    v = [Fraction(0)] * m.dim(k)
    for lab, c in coeffs.items():
        if lab not in m.labels[k]:
            raise ParseError(f"label {lab!r} is not in degree {k}")
        v[m.labels[k].index(lab)] += c
    return tuple(v)


# ---------------------------------------------------------------------------
# map files


def load_map_doc(path: str | Path) -> dict:
    doc = _load_yaml(Path(path).read_text())
    unknown = sorted(set(doc) - MAP_FIELDS)
    if unknown:
        raise ParseError(f"unknown fields {unknown}")
    for key in ("source", "target"):
        if key not in doc:
            raise ParseError(f"map file needs field {key!r}")
    if "matrix_deg1" not in doc and "images" not in doc:
        raise ParseError("map file needs 'matrix_deg1' (frame models) or 'images' (cdga models)")
    return doc


def map_matrix(rows) -> Matrix:
    return _rows(rows, "matrix_deg1")


def images_from_doc(src: FoliatedModel, tgt: FoliatedModel, images: Mapping) -> dict:
    slabels = {x for ls in src.labels for x in ls}
    if not isinstance(images, Mapping):
        raise ParseError("images must map target labels to expressions")
    tlabels = {x for ls in tgt.labels for x in ls}
    return {_known(k, tlabels, "images"): _label_expr(v, slabels, f"image of {k}") for k, v in images.items()}


# ---------------------------------------------------------------------------
# report documents


def to_jsonable(x):
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, Matrix):
        return [[format_scalar(v) for v in r] for r in x.rows]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return format_scalar(x)


def dump_doc(doc: Mapping) -> str:
    return json.dumps(to_jsonable(doc), indent=2, ensure_ascii=False) + "\n"
