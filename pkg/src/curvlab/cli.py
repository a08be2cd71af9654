"""Command-line entry point: ``curvlab {curvature,equivalence,transform,verify}``.

Exit codes: 0 success, 1 verification failure, 2 bad input (parse errors,
case mismatches, unsupported inputs), 3 invalid section or inverse witness,
4 metric degenerate at the requested point.
"""
import argparse
import dataclasses
import math
import sys
import time

import numpy as np

from . import actions, formats
from .curvature import (
    exterior_derivative,
    metric_curvature,
    nijenhuis,
    weyl,
    yang_mills_curvature,
)
from .errors import (
    ArgumentError,
    CurvlabError,
    DegenerateMetricError,
    InvalidSectionError,
    ParseError,
    UnsupportedInputError,
)
from .jets import prolong_acs, prolong_connection, prolong_super
from .orbits import decide_equivalence
from .parsing import parse_point
from .polyfield import evaluate_array
from .supergeometry import obstruction_supercurvature, quillen_supercurvature, super_gauge_transform
from .verify import SUITE_NAMES, run_suite

KINDS = ("dform", "yangmills", "riemann", "weyl", "nijenhuis", "superq", "superobstruction")
_KIND_CASE = {
    "dform": "form",
    "yangmills": "connection",
    "riemann": "metric",
    "weyl": "metric",
    "nijenhuis": "acs",
    "superq": "superconnection",
    "superobstruction": "superconnection",
}
_EQUIVALENCE_CASES = ("connection", "acs", "superconnection")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INVALID_SECTION = 3
EXIT_DEGENERATE = 4


def _point(text, m, required=False):
    if text is None:
        if required:
            raise ArgumentError("--point is required for this command")
        return None
    return parse_point(text, m)


def _at(arr, point):
    arr = np.asarray(arr, dtype=object)
    if point is None:
        return arr
    return evaluate_array(arr, point)


def _scalar(v):
    out = np.empty((), dtype=object)
    out[()] = v
    return out


def _inputs(*paths):
    return [{"path": p, "sha256": formats.digest(p)} for p in paths]


# -- curvature ------------------------------------------------------------------------


def _curvature_blocks(kind, spec, point):
    value = spec.value()
    if kind == "dform":
        return {"d_omega": _at(exterior_derivative(value).components, point)}, {
            "d_omega": "i1,...,ik+1"}
    if kind == "yangmills":
        return {"F": _at(yang_mills_curvature(value).components, point)}, {"F": "mu,nu,a,b"}
    if kind == "riemann":
        pack = metric_curvature(value, point)
        return {"riemann": pack.riemann, "riemann_lowered": pack.riemann_lowered,
                "ricci": pack.ricci, "scalar": _scalar(pack.scalar)}, {
            "riemann": "rho,sigma,mu,nu (R^rho_{sigma mu nu})",
            "riemann_lowered": "rho,sigma,mu,nu", "ricci": "sigma,nu"}
    if kind == "weyl":
        w = weyl(value, point)
        return {"weyl": w.covariant, "weyl_mixed": w.mixed}, {
            "weyl": "rho,sigma,mu,nu", "weyl_mixed": "rho,sigma,mu,nu (W^rho_{sigma mu nu})"}
    if kind == "nijenhuis":
        return {"N": _at(nijenhuis(value).components, point)}, {"N": "rho,mu,nu (N^rho_{mu nu})"}
    curv = (quillen_supercurvature if kind == "superq" else obstruction_supercurvature)(value)
    blocks = curv.blocks() if point is None else curv.evaluate(point)
    layout = {name: ("mu,a,b" if name.startswith("nabla") else
                     "mu,nu,a,b" if name.startswith("F") else "a,b") for name in blocks}
    return blocks, layout


def cmd_curvature(args):
    spec = formats.read_spec(args.file)
    want = _KIND_CASE[args.kind]
    if spec.case != want:
        raise ArgumentError(f"--kind {args.kind} needs a {want} spec, got {spec.case}")
    point = _point(args.point, spec.base_dim)
    blocks, layout = _curvature_blocks(args.kind, spec, point)
    return formats.make_report(f"curvature:{args.kind}", _inputs(args.file), blocks, point,
                               details={"layout": layout})


# -- equivalence ----------------------------------------------------------------------


def _prolong(spec, point):
    value = spec.value()
    if spec.case == "connection":
        return prolong_connection(value, point)
    if spec.case == "acs":
        return prolong_acs(value, point)
    return prolong_super(value, point)


def _witness_blocks(w):
    if w is None:
        return {}
    if isinstance(w, tuple):
        out = {}
        for sign, part in zip(("plus", "minus"), w):
            out.update({f"witness.{sign}.{k}": v for k, v in _jet_fields(part).items()})
        return out
    return {f"witness.{k}": v for k, v in _jet_fields(w).items()}


def _jet_fields(jet):
    return {f.name: getattr(jet, f.name) for f in dataclasses.fields(jet)}


def cmd_equivalence(args):
    a, b = formats.read_spec(args.a), formats.read_spec(args.b)
    if a.case != b.case:
        raise ArgumentError(f"case mismatch: {a.case} vs {b.case}")
    if a.case not in _EQUIVALENCE_CASES:
        raise ArgumentError(f"equivalence is defined for {', '.join(_EQUIVALENCE_CASES)}")
    if a.base_dim != b.base_dim:
        raise ArgumentError("specs live on bases of different dimension")
    point = _point(args.point, a.base_dim, required=True)
    rep = decide_equivalence(_prolong(a, point), _prolong(b, point))
    blocks = {}
    for name in rep.invariant_blocks:
        blocks[f"a.{name}"] = rep.invariant_blocks[name]
        blocks[f"b.{name}"] = rep.other_blocks[name]
    blocks.update(_witness_blocks(rep.witness))
    details = {"case": rep.case_tag, "differing": list(rep.differing),
               "sup_norm_difference": rep.sup_norm, "note": rep.note}
    return formats.make_report("equivalence", _inputs(args.a, args.b), blocks, point,
                               verdict=rep.verdict, details=details)


# -- transform ------------------------------------------------------------------------


def _inverse(phi, witness):
    try:
        return actions.checked_inverse(phi, witness)
    except UnsupportedInputError as exc:
        raise InvalidSectionError(f"{exc}; supply an exact inverse witness") from None


def cmd_transform(args):
    spec = formats.read_spec(args.file)
    g = formats.read_spec(args.by)
    if g.base_dim != spec.base_dim:
        raise ArgumentError("group element and field live on bases of different dimension")
    if spec.case == "connection" and g.case == "gauge" and not g.grading:
        phi = g.value()
        inv = _inverse(phi, g.inverse_value())
        out = actions.gauge_transform(spec.value(), phi, inv)
        return formats.FieldSpec.from_value("connection", out)
    if spec.case == "superconnection" and g.case == "gauge" and g.grading:
        phi_p, phi_m = g.value()
        wit_p, wit_m = g.inverse_value() or (None, None)
        inv_p, inv_m = _inverse(phi_p, wit_p), _inverse(phi_m, wit_m)
        out = super_gauge_transform(spec.value(), phi_p, phi_m, inv_p, inv_m)
        return formats.FieldSpec.from_value("superconnection", out)
    if g.case == "diffeo" and spec.case in ("form", "metric", "acs"):
        phi = g.value()
        if spec.case == "form":
            out = actions.pullback_form(spec.value(), phi)
        elif spec.case == "metric":
            out = actions.pullback_metric(spec.value(), phi)
        else:
            out = actions.pullback_acs(spec.value(), phi)
        return formats.FieldSpec.from_value(spec.case, out)
    raise ArgumentError(f"cannot transform a {spec.case} spec by a {g.case} element"
                        + (" (graded)" if g.grading else ""))


# -- verify ---------------------------------------------------------------------------


def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _finite(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_finite(x) for x in v]
    return v


def cmd_verify(args):
    if args.count < 1:
        raise ArgumentError("--count must be positive")
    results = run_suite(args.suite, seed=args.seed, count=args.count, dim=args.dim)
    ok = all(r.passed for r in results)
    details = {"properties": [_finite(r.as_dict()) for r in results]}
    inputs = {"suite": args.suite, "seed": args.seed, "count": args.count, "dim": args.dim}
    report = formats.make_report("verify", inputs, {}, verdict="pass" if ok else "fail",
                                 details=details)
    return report, ok


# -- driver ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write here instead of stdout")
    common.add_argument("--timing", action="store_true",
                        help="record wall-clock seconds (makes reports non-reproducible)")

    ap = argparse.ArgumentParser(prog="curvlab", description="Exact curvature and jet-orbit tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", parents=[common], help="curvature of a field spec")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--point", help="comma-separated rationals, e.g. 0,1/2")
    p.add_argument("file")

    p = sub.add_parser("equivalence", parents=[common], help="order-1 equivalence at a point")
    p.add_argument("--point", required=True)
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("transform", parents=[common], help="act on a spec by a group element")
    p.add_argument("--by", required=True, help="gauge or diffeo spec")
    p.add_argument("file")

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--dim", type=int, choices=(2, 4), help="dimension for the splitting suite")
    return ap


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    print(f"curvlab: error: {exc}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    ok = True
    try:
        if args.command == "transform":
            _emit(cmd_transform(args).dumps(), args.output)
            return EXIT_OK
        if args.command == "verify":
            report, ok = cmd_verify(args)
        elif args.command == "curvature":
            report = cmd_curvature(args)
        else:
            report = cmd_equivalence(args)
    except InvalidSectionError as exc:
        return _error(exc, EXIT_INVALID_SECTION)
    except DegenerateMetricError as exc:
        return _error(exc, EXIT_DEGENERATE)
    except (ParseError, ArgumentError, UnsupportedInputError, CurvlabError) as exc:
        return _error(exc, EXIT_BAD_INPUT)
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    _emit(formats.dump_report(report), args.output)
    if not ok:
        for prop in report["details"]["properties"]:
            if not prop["passed"]:
                print(f"curvlab: FAILED {prop['property']}: replay seed "
                      f"{prop.get('failure', {}).get('instance_seed')}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
