"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 model validation error, 4 failed assertion.
Errors print a single line ``error[<kind>]: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import ConsistencyError, ModelValidationError
from .io import (ParseError, dump_doc, dump_model, format_element, images_from_doc, load_map_doc, load_model, map_matrix,
                 parse_element)
from .lichnerowicz import (TwistingForm, classical_duality_holds, cohomology, duality_check,
                           format_basic)
from .linalg import format_scalar, parse_scalar
from .model import FoliatedModel, is_riemannian, metric_homotopy, with_metric
from .morphisms import (EquivalenceCertificate, alvarez_pullback_check, equivalence_report,
                        induced_cohomology_map, map_from_degree1, map_from_images, validate_map)
from .exterior import FramedMetric
from .signature import basic_signature
from . import zoo

VERBS = ("inspect", "betti", "twisted-betti", "signature", "duality", "sweep-metric", "map-check", "zoo")
EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_ASSERTION = 0, 2, 3, 4


class AssertionFailure(Exception):
    """A checked mathematical statement did not hold."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foliate", description="Basic and twisted basic cohomology of foliated models.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--model", help="model file path or zoo:<name>")
    p.add_argument("--theta", default=None,
                   help="closed basic 1-form for betti and duality (default 0): expression, kappa_b, "
                        "half_kappa_b or minus_half_kappa_b")
    p.add_argument("--format", choices=("table", "doc"), default="table")
    p.add_argument("--samples", default="0,1/4,1/2,3/4,1", help="comma-separated rational times")
    p.add_argument("--map", help="map file path")
    return p


# ---------------------------------------------------------------------------
# resolution helpers


def resolve_model(ref: str | None, base: Path | None = None) -> FoliatedModel:
    if not ref:
        raise ParseError("--model is required for this verb")
    if ref.startswith("zoo:"):
        try:
            return zoo.builtin(ref[4:]).model
        except KeyError as exc:
            raise ParseError(exc.args[0]) from exc
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if not path.exists():
        if ref in zoo.NAMES:
            return zoo.builtin(ref).model
        raise ParseError(f"no such model file: {ref}")
    return load_model(path)


def resolve_theta(m: FoliatedModel, text: str) -> TwistingForm:
    b = m.basic
    text = text.strip()
    named = {"kappa_b": 1, "half_kappa_b": Fraction(1, 2), "minus_half_kappa_b": Fraction(-1, 2)}
    if text in named:
        return TwistingForm.kappa_b(b, named[text], text)
    if text in ("", "0"):
        return TwistingForm.zero(b)
    vec = parse_element(m, 1, text)
    return TwistingForm.from_ambient(b, vec, text)


def parse_samples(text: str) -> list[Fraction]:
    try:
        return [parse_scalar(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"--samples: {exc}") from exc


def _dims(x) -> str:
    return ",".join(str(v) for v in x)


# ---------------------------------------------------------------------------
# report builders (plain dicts; rendered as table or JSON)


def inspect_doc(m: FoliatedModel) -> dict:
    mc = m.mean_curvature
    ok, diag = is_riemannian(m)
    doc = {"name": m.name, "kind": m.kind, "leaf_rank": m.p, "codim": m.q,
           "ambient_dims": m.dims, "basic_dims": m.basic.dims, "riemannian": ok,
           "riemannian_diagnostics": diag, "oriented": m.oriented,
           "kappa": format_element(m, 1, mc.kappa), "kappa_b": format_element(m, 1, mc.kappa_b),
           "taut": not any(mc.kappa_b_coords)}
    if m.chi is not None:
        doc["chi"] = format_element(m, m.p, m.chi)
        doc["chi_scale_sq"] = mc.chi_scale_sq
    if mc.rummler_residual is not None:
        doc["rummler_residual"] = format_element(m, m.p + 1, mc.rummler_residual)
    return doc


def cohomology_doc(m: FoliatedModel, theta: TwistingForm, sign: int = -1) -> dict:
    b = m.basic
    rep = cohomology(b, theta, sign)
    degrees = []
    for k in range(b.q + 1):
        degrees.append({"degree": k, "dim": rep.dims[k], "rank_d": rep.ranks[k],
                        "harmonic_basis": [format_basic(b, k, c) for c in rep.harmonic[k].columns()]})
    return {"model": m.name, "theta": theta.label or "0",
            "differential": f"d {'+' if sign > 0 else '-'} theta",
            "theta_form": format_basic(b, 1, theta.coords), "dims": list(rep.dims), "degrees": degrees}


def signature_doc(m: FoliatedModel) -> dict:
    r = basic_signature(m.basic)
    return {"model": m.name, "q": r.q, "ell": r.ell, "sigma": r.sigma, "dim_plus": r.dim_plus,
            "dim_minus": r.dim_minus, "pairing": r.pairing, "pairing_scale_sq": r.pairing_scale_sq,
            "pairing_signature": list(r.pairing_signature), "pairing_rank": r.pairing_rank}


def duality_doc(m: FoliatedModel, theta: TwistingForm) -> dict:
    r = duality_check(m.basic, theta)
    return {"model": m.name, "theta": theta.label or "0",
            "rows": [{"k": k, "dim_twisted": a, "dim_dual": c} for k, a, c in r.rows],
            "dims_match": r.dims_match, "star_intertwines_laplacians": r.intertwining,
            "star_maps_harmonic_bijectively": r.harmonic_bijection,
            "classical_duality": classical_duality_holds(m.basic)}


def default_target_metric(m: FoliatedModel) -> FramedMetric:
    """Zoo alternate metric if one is registered, else the leafwise rescaling by 4."""
    alt = zoo.ALT_METRICS.get(m.name)
    if alt is not None:
        return alt
    from .model import _leaf_projector
    g = m.lie.metric
    P = _leaf_projector(m.lie, g)
    return FramedMetric(g.gram + (P.T @ g.gram @ P).scale(3), g.orientation)


def sweep_doc(m: FoliatedModel, samples: Sequence[Fraction]) -> dict:
    if m.lie is None:
        raise ModelValidationError("metric sweeps need a frame (Lie) model; cdga models carry a fixed Gram")
    g1 = default_target_metric(m)
    metrics = metric_homotopy(m.lie.metric, g1, m, samples)
    rows = []
    for t, g in zip(samples, metrics):
        mt = with_metric(m, g, m.name)
        b = mt.basic
        row = {"t": t, "basic_betti": list(cohomology(b).dims),
               "twisted_betti": list(cohomology(b, TwistingForm.kappa_b(b, Fraction(1, 2)), -1).dims),
               "kappa_b": format_element(mt, 1, mt.mean_curvature.kappa_b)}
        if mt.oriented and b.q % 2 == 0:
            row["sigma"] = basic_signature(b).sigma
        rows.append(row)
    keys = ("basic_betti", "twisted_betti", "sigma")
    constant = all(r.get(k) == rows[0].get(k) for r in rows for k in keys)
    return {"model": m.name, "target_metric": g1.gram, "rows": rows, "constant": constant}


def map_check_doc(path: str) -> dict:
    doc = load_map_doc(path)
    base = Path(path).parent
    src = resolve_model(str(doc["source"]), base)
    tgt = resolve_model(str(doc["target"]), base)

    def build(s, t, mat_key, img_key, name):
        if mat_key in doc:
            return map_from_degree1(s, t, map_matrix(doc[mat_key]), name)
        return map_from_images(s, t, images_from_doc(s, t, doc[img_key]), name)

    name = str(doc.get("name", "f"))
    f = build(src, tgt, "matrix_deg1", "images", name)
    diag = validate_map(f)
    out = {"map": name, "source": src.name, "target": tgt.name, "valid": not diag, "diagnostics": diag}
    if diag:
        return out
    out["alvarez_pullback"] = alvarez_pullback_check(f)
    out["induced_on_basic_cohomology"] = induced_cohomology_map(f)
    if "backward_deg1" in doc or "backward_images" in doc:
        g = build(tgt, src, "backward_deg1", "backward_images", name + "_back")
        mu = None
        if doc.get("mu") is not None:
            mu = tgt.basic.to_basic(0, parse_element(tgt, 0, str(doc["mu"])))
        rep = equivalence_report(EquivalenceCertificate(f, g, mu, name))
        out["equivalence"] = {
            "ok": rep.ok, "failures": rep.failures, "isomorphism": rep.isomorphism,
            "alvarez": rep.alvarez, "codimensions": list(rep.codimensions),
            "transfer_constant": str(rep.transfer) if rep.transfer else None,
            "orientation_effect": rep.orientation_effect,
            "pairing_scaling": rep.pairing_scaling, "sigma": list(rep.sigma)}
    return out


def zoo_doc() -> dict:
    entries = []
    for e in zoo.all_entries():
        entries.append({"name": e.name, "kind": e.model.kind, "leaf_rank": e.model.p, "codim": e.model.q,
                        **{k: (list(v) if isinstance(v, tuple) else v) for k, v in e.expected.items()},
                        "note": e.note})
    return {"entries": entries}


# ---------------------------------------------------------------------------
# table rendering


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in header]] + [[_cell(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, (list, tuple)):
        return "(" + ",".join(_cell(v) for v in x) + ")"
    if isinstance(x, dict):
        return " ".join(f"{k}={_cell(v)}" for k, v in x.items())
    if x is None:
        return "-"
    return str(x)


def render_table(verb: str, doc: dict) -> str:
    if verb == "inspect":
        return _table(["field", "value"], [(k, v) for k, v in doc.items()])
    if verb in ("betti", "twisted-betti"):
        head = f"model {doc['model']}, {doc['differential']}, theta = {doc['theta_form']}\n"
        return head + _table(["k", "dim", "rank_d", "harmonic_basis"],
                             [(d["degree"], d["dim"], d["rank_d"], "; ".join(d["harmonic_basis"]) or "-")
                              for d in doc["degrees"]])
    if verb == "signature":
        return _table(["q", "sigma", "dim_plus", "dim_minus", "pairing_signature"],
                      [(doc["q"], doc["sigma"], doc["dim_plus"], doc["dim_minus"], doc["pairing_signature"])])
    if verb == "duality":
        return _table(["k", "dim H_{d-theta}^k", "dim H_{d-(kappa_b-theta)}^{q-k}"],
                      [(r["k"], r["dim_twisted"], r["dim_dual"]) for r in doc["rows"]])
    if verb == "sweep-metric":
        return _table(["t", "basic_betti", "twisted_betti", "sigma", "kappa_b"],
                      [(r["t"], r["basic_betti"], r["twisted_betti"], r.get("sigma"), r["kappa_b"])
                       for r in doc["rows"]])
    if verb == "map-check":
        rows = [(k, v) for k, v in doc.items() if k not in ("induced_on_basic_cohomology", "equivalence")]
        for k, v in (doc.get("equivalence") or {}).items():
            rows.append((f"equivalence.{k}", v))
        return _table(["field", "value"], rows)
    if verb == "zoo":
        return _table(["name", "kind", "p", "q", "basic_betti", "twisted_betti", "taut", "sigma"],
                      [(e["name"], e["kind"], e["leaf_rank"], e["codim"], e["basic_betti"], e["twisted_betti"],
                        e["taut"], e["sigma"]) for e in doc["entries"]])
    raise ParseError(f"no table layout for {verb}")


# ---------------------------------------------------------------------------


def execute(args: argparse.Namespace) -> tuple[str, str]:
    """Run a parsed command; return (rendered output, failed-assertion message or '')."""
    verb = args.verb
    failure = ""
    if verb == "zoo":
        if args.model:
            return dump_model(resolve_model(args.model)), ""
        doc = zoo_doc()
    elif verb == "map-check":
        if not args.map:
            raise ParseError("map-check needs --map")
        doc = map_check_doc(args.map)
        if not doc["valid"]:
            raise ModelValidationError("invalid map: " + "; ".join(doc["diagnostics"][:3]))
        eq = doc.get("equivalence")
        if eq and not eq["ok"]:
            failure = "; ".join(eq["failures"])
    else:
        m = resolve_model(args.model)
        if verb == "inspect":
            doc = inspect_doc(m)
        elif verb == "betti":
            doc = cohomology_doc(m, resolve_theta(m, args.theta or "0"), -1)
        elif verb == "twisted-betti":
            if args.theta is not None:
                raise ParseError("twisted-betti is fixed at half_kappa_b; use betti --theta for other twists")
            doc = cohomology_doc(m, resolve_theta(m, "half_kappa_b"), -1)
        elif verb == "signature":
            doc = signature_doc(m)
        elif verb == "duality":
            doc = duality_doc(m, resolve_theta(m, args.theta or "0"))
            if not (doc["dims_match"] and doc["star_intertwines_laplacians"]
                    and doc["star_maps_harmonic_bijectively"]):
                failure = "twisted duality does not hold"
        else:
            doc = sweep_doc(m, parse_samples(args.samples))
            if not doc["constant"]:
                failure = "invariants vary along the metric family"
    text = dump_doc(doc) if args.format == "doc" else render_table(verb, doc)
    return text, failure


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, failure = execute(args)
    except ParseError as exc:
        print(f"error[parse]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ModelValidationError as exc:
        print(f"error[validation]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConsistencyError, AssertionFailure) as exc:
        print(f"error[assertion]: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    sys.stdout.write(text)
    if failure:
        print(f"error[assertion]: {failure}", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
