"""Command-line front end: classification, diagram evaluation, Gram and
braid-relation reports, all as deterministic JSON.

Exit codes: 0 PASS, 1 FAIL or error, 2 REJECTED, 64 usage.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys

import numpy as np

from . import classify as classify_mod
from .classify import RESIDUAL_TOLERANCES, classify, delta_for_l
from .errors import ShadingInconsistent, SkeinlabError, TriangleTableRequired
from .scalar import Tolerance
from .skein import Diagram, Vertex, evaluate_detailed
from .threebox import enumerate_basis, gram, reidemeister_residuals, solve_triangle, ybe_residual
from .twobox import (
    DEPTH3_DELTA,
    BoxVec,
    BraidPair,
    PLUS,
    TwoBoxModel,
    braid_pair,
    from_classification_data,
)
from .classify import recover_qr

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_REJECTED = 2
EXIT_USAGE = 64


# -- number formatting ---------------------------------------------------


def _num(x) -> float:
    return float(f"{float(x):.17g}")


def _cnum(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _dump(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- argument plumbing ---------------------------------------------------


def _add_locus_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", type=float, help="loop value")
    g.add_argument("--l", type=int, help="even root-of-unity index, l >= 12")
    g.add_argument("--depth3", action="store_true", help="the cubic depth-3 point")
    sp.add_argument("--sigma", type=int, choices=(1, -1), default=None,
                    help="chirality override (defaults from the case)")
    sp.add_argument("--tol", type=float, default=None, help="equality tolerance")


def _resolve_locus(args) -> tuple[float, int]:
    if args.depth3:
        delta = DEPTH3_DELTA
        sigma = 1 if args.sigma is None else args.sigma
    elif args.l is not None:
        if args.l < 12 or args.l % 2:
            raise SkeinlabError(f"l must be even and >= 12, got {args.l}")
        delta = delta_for_l(args.l)
        sigma = -1 if args.sigma is None else args.sigma
    else:
        delta = args.delta
        sigma = -1 if args.sigma is None else args.sigma
    return delta, sigma


def _tolerance(args) -> Tolerance:
    if getattr(args, "tol", None) is not None:
        return Tolerance(eq_tol=args.tol)
    return Tolerance.from_env()


# -- diagram file I/O ----------------------------------------------------


def load_diagram(path: str, model: TwoBoxModel) -> Diagram:
    """Parse a DiagramFile: {"free_loops", "vertices", "edges"}; the label
    "G" stands for the uncappable generator b*P1 - a*P2."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SkeinlabError(f"{path}: cannot read diagram file: {exc}") from exc

    def coeff(c):
        if isinstance(c, list):
            return complex(c[0], c[1])
        return complex(c)

    vertices = {}
    for entry in doc.get("vertices", []):
        label = entry["label"]
        if label == "G":
            coeffs = model.uncappable().coeffs
        else:
            coeffs = tuple(coeff(c) for c in label)
        vertices[int(entry["id"])] = Vertex(coeffs, int(entry.get("shading0", 0)))
    d = Diagram(vertices, {}, int(doc.get("free_loops", 0)))
    for (a, sa), (b, sb) in doc.get("edges", []):
        d.add_edge((int(a), int(sa)), (int(b), int(sb)))
    try:
        d.validate(check_shading=True)
    except ShadingInconsistent:
        # Shading bits are optional in the file; re-derive them if absent
        # or inconsistent, then validate for real.
        d = d.infer_shading()
        d.validate(check_shading=True)
    return d


# -- commands ------------------------------------------------------------


def cmd_classify(args) -> int:
    tol = _tolerance(args)
    delta, _ = _resolve_locus(args)
    res = classify(delta, tol)
    report = {
        "command": "classify",
        "inputs": {"delta": _num(delta), "tol": _num(tol.eq_tol)},
        "outputs": {
            "case": res.case,
            "l": res.l,
            "sigma": res.sigma,
            "delta": _num(res.delta),
            "y": None if res.y is None else _num(res.y),
            "a": None if res.a is None else _num(res.a),
            "b": None if res.b is None else _num(res.b),
            "q": None if res.q is None else _cnum(res.q),
            "r": None if res.r is None else _cnum(res.r),
            "notes": res.notes,
        },
        "residuals": {k: _num(v) for k, v in sorted(res.residuals.items())},
        "tolerances": {k: _num(v) for k, v in sorted(RESIDUAL_TOLERANCES.items())},
        "verdict": res.verdict,
    }
    if res.graph is not None:
        report["outputs"]["principal_graph_prefix"] = {
            "depth2_weights": {k: _num(v) for k, v in sorted(res.graph.depth2_weights.items())},
            "depth3_neighbors": {k: list(v) for k, v in sorted(res.graph.depth3_neighbors.items())},
        }
    _dump(report, args.json)
    if args.json:
        print(f"{res.verdict}: case={res.case} delta={res.delta:.12g}")
    return {"PASS": EXIT_PASS, "REJECTED": EXIT_REJECTED}.get(res.verdict, EXIT_FAIL)


def cmd_evaluate(args) -> int:
    tol = _tolerance(args)
    delta, sigma = _resolve_locus(args)
    model = from_classification_data(delta, sigma, tol)
    diagram = load_diagram(args.diagram, model)
    try:
        value, steps = evaluate_detailed(diagram, model, None, tol)
    except TriangleTableRequired:
        table = solve_triangle(model, tol=tol)
        value, steps = evaluate_detailed(diagram, model, table, tol)
    report = {
        "command": "evaluate",
        "inputs": {
            "diagram": args.diagram,
            "delta": _num(delta),
            "sigma": sigma,
            "tol": _num(tol.eq_tol),
        },
        "outputs": {"value": _cnum(value), "reduction_steps": steps},
        "residuals": {},
        "tolerances": {},
        "verdict": "PASS",
    }
    _dump(report, args.json)
    if args.json:
        print(f"value = {value:.12g} ({steps} reduction steps)")
    return EXIT_PASS


def cmd_gram(args) -> int:
    tol = _tolerance(args)
    delta, sigma = _resolve_locus(args)
    model = from_classification_data(delta, sigma, tol)
    basis = enumerate_basis(model)
    gm = gram(model, basis, tol)
    evals = gm.eigenvalues()
    rank = gm.rank(tol)
    lam_max = float(evals[-1])
    psd_ok = float(evals[0]) >= -1e-8 * max(lam_max, 1e-300)
    verdict = "PASS" if (rank == 14 and psd_ok) else "FAIL"
    report = {
        "command": "gram",
        "inputs": {"delta": _num(delta), "sigma": sigma, "tol": _num(tol.eq_tol)},
        "outputs": {
            "matrix": [[_cnum(z) for z in row] for row in gm.entries],
            "eigenvalues": [_num(v) for v in evals],
            "min_eigenvalue": _num(evals[0]),
            "max_eigenvalue": _num(lam_max),
            "rank": rank,
        },
        "residuals": {"hermiticity": _num(gm.hermiticity_defect())},
        "tolerances": {"rank_tol": _num(tol.rank_tol)},
        "verdict": verdict,
    }
    _dump(report, args.out)
    if args.out:
        print(f"{verdict}: rank={rank} min_eig={evals[0]:.6g} max_eig={lam_max:.6g}")
    return EXIT_PASS if verdict == "PASS" else EXIT_FAIL


def cmd_ybe(args) -> int:
    tol = _tolerance(args)
    delta, sigma = _resolve_locus(args)
    model = from_classification_data(delta, sigma, tol)
    y, a, b = model.delta, model.a, model.b
    q, r = recover_qr(delta, model.a, model.b, sigma, tol)
    braid = braid_pair(model, q, r, tol)
    if args.perturb_q and args.perturb_q != 1.0:
        qp = braid.q * args.perturb_q
        braid = BraidPair(
            U=BoxVec(PLUS, (braid.z1, qp, -1.0 / qp)),
            V=BoxVec(PLUS, (1.0 / braid.z1, 1.0 / qp, -qp)),
            q=qp, r=braid.r, z1=braid.z1, z2=braid.z2,
        )
    table = solve_triangle(model, tol=tol)
    ybe = ybe_residual(model, braid, table, tol)
    r1, r2, quad = reidemeister_residuals(model, braid, table)
    residuals = {"ybe": ybe, "r1": r1, "r2": r2, "quad": quad}
    verdict = "PASS" if all(v < 1e-8 for v in residuals.values()) else "FAIL"
    report = {
        "command": "ybe",
        "inputs": {
            "delta": _num(delta),
            "sigma": sigma,
            "tol": _num(tol.eq_tol),
            "perturb_q": _num(args.perturb_q or 1.0),
        },
        "outputs": {"q": _cnum(braid.q), "r": _cnum(braid.r)},
        "residuals": {k: _num(v) for k, v in sorted(residuals.items())},
        "tolerances": {k: _num(1e-8) for k in sorted(residuals)},
        "verdict": verdict,
    }
    _dump(report, args.out)
    if args.out:
        print(f"{verdict}: " + " ".join(f"{k}={v:.3e}" for k, v in sorted(residuals.items())))
    return EXIT_PASS if verdict == "PASS" else EXIT_FAIL


# -- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="skeinlab",
        description="Verification calculator for the dim(3-box)=14 planar algebras.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="run the full classification pipeline")
    _add_locus_args(sp)
    sp.add_argument("--json", default=None, help="write the JSON report here")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("evaluate", help="evaluate a closed diagram file")
    sp.add_argument("--diagram", required=True, help="DiagramFile JSON path")
    _add_locus_args(sp)
    sp.add_argument("--json", default=None, help="write the JSON report here")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("gram", help="14x14 Gram matrix report")
    _add_locus_args(sp)
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.set_defaults(func=cmd_gram)

    sp = sub.add_parser("ybe", help="braid relation residuals")
    _add_locus_args(sp)
    sp.add_argument("--perturb-q", type=float, default=None,
                    help="multiply q by this factor (negative control)")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.set_defaults(func=cmd_ybe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SkeinlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
