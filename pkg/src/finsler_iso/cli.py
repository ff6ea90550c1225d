"""Command-line front end.

Subcommands: eval, decompose, check, probe-main, distance.  Output is
machine-readable: JSON objects with sorted keys and 17-significant-digit
floats (byte-identical across runs for identical flags and seed), or
RFC-4180 CSV with a header row.

Exit codes: 0 success/pass, 1 property violated, 2 usage or parse error,
3 numeric/domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import decompose as dc
from . import geometry as ge
from . import invariance as iv
from . import metrics as mm
from .errors import MismatchError, NonPositiveMetricError, OutOfDomainError, ZeroVectorError
from .expressions import EvalError, ParseError
from .linalg import Field, Vector


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Deterministic JSON rendering

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def render_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{render_json(v)}" for k, v in sorted(obj.items()))
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(render_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def _emit(obj, out=None) -> None:
    (out or sys.stdout).write(render_json(obj) + "\n")


# ---------------------------------------------------------------------------
# Argument parsing helpers

def _parse_field(text: str) -> Field:
    try:
        return Field(text)
    except ValueError:
        raise UsageError(f"field must be 'real' or 'complex', got {text!r}") from None


def parse_vector(text: str, dim: int, field: Field) -> Vector:
    """Comma-separated entries; complex entries as re:im pairs."""
    parts = text.split(",")
    if len(parts) != dim:
        raise UsageError(f"expected {dim} vector entries, got {len(parts)}")
    entries = []
    for part in parts:
        part = part.strip()
        try:
            if ":" in part:
                if field is Field.REAL:
                    raise UsageError(f"complex entry {part!r} in a real vector")
                re_s, im_s = part.split(":", 1)
                entries.append(complex(float(re_s), float(im_s)))
            else:
                entries.append(complex(float(part), 0.0) if field is Field.COMPLEX else float(part))
        except ValueError:
            raise UsageError(f"cannot parse vector entry {part!r}") from None
    return Vector(np.array(entries, dtype=field.dtype), field)


def metric_from_args(args) -> mm.MetricSpec:
    """Build the MetricSpec from --metric / --config, reporting parse errors."""
    raw = args.metric
    if getattr(args, "config", None):
        if raw is not None:
            raise UsageError("give either --metric or --config, not both")
        raw = "@" + args.config
    if raw is None:
        raise UsageError("a metric is required (--metric or --config)")
    try:
        if raw.startswith("@"):
            with open(raw[1:], encoding="utf-8") as fh:
                obj = json.load(fh)
            spec = mm.spec_from_json(obj)
            if args.dim is not None and args.dim != spec.dim:
                raise UsageError(f"--dim {args.dim} conflicts with spec dim {spec.dim}")
            if args.field is not None and _parse_field(args.field) is not spec.field:
                raise UsageError(f"--field {args.field} conflicts with the spec's field")
            return spec
        return _named_metric(raw, args)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read metric spec: {exc}") from None
    except (ParseError, ValueError) as exc:
        raise UsageError(f"bad metric spec: {exc}") from None


def _named_metric(raw: str, args) -> mm.MetricSpec:
    field = _parse_field(args.field) if args.field is not None else Field.REAL
    if args.dim is None:
        raise UsageError("--dim is required with a named metric")
    dim = args.dim
    name, _, payload = raw.partition(":")
    if name == "euclidean":
        return mm.euclidean(dim, field)
    if name == "fubini-study":
        return mm.fubini_study(dim, field)
    if name == "norm-quotient":
        return mm.norm_quotient(dim, field)
    if name == "area":
        b = float(payload) if payload else 1.0
        return mm.area_dim2(b, field)
    if name == "lambda":
        alpha = args.alpha if getattr(args, "alpha", None) is not None else 1.0
        return mm.FromLambda(dim, field, mm.RadiusDomain.positive(),
                             mm.lambda_profile(payload, alpha))
    if name == "theta":
        return mm.FromTheta(dim, field, mm.RadiusDomain.positive(), mm.theta_profile(payload))
    if name == "vartheta":
        spec_json = {"family": "congruence-invariant", "dim": dim, "field": field.value,
                     "domain": mm.domain_to_json(mm.RadiusDomain.positive()),
                     "params": {"vartheta": payload}}
        return mm.spec_from_json(spec_json)
    if name == "nonsym-lambda":
        return mm.FromNonSymLambda(dim, field, mm.RadiusDomain.positive(),
                                   mm.nonsym_lambda_profile(payload, field))
    if name == "riemann":
        try:
            phi_text, psi_text = payload.split(";", 1)
        except ValueError:
            raise UsageError("riemann metric needs 'riemann:PHI;PSI'") from None
        return mm.induced_finsler(mm.riemann_profile(phi_text, psi_text), dim, field)
    raise UsageError(f"unknown metric {raw!r}")


def _open_output(args):
    if getattr(args, "output", None):
        return open(args.output, "w", encoding="utf-8", newline="")
    return None


def _write_csv(rows, header, args) -> None:
    out = _open_output(args)
    try:
        target = out or sys.stdout
        writer = csv.writer(target)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format(x, ".17g") if isinstance(x, float) else x for x in row])
    finally:
        if out is not None:
            out.close()


# ---------------------------------------------------------------------------
# Commands

def cmd_eval(args) -> int:
    spec = metric_from_args(args)
    g = parse_vector(args.g, spec.dim, spec.field)
    h = parse_vector(args.h, spec.dim, spec.field)
    if args.f is not None:
        profile = mm.sesquilinear_profile(spec)
        if profile is None:
            raise UsageError("--f needs a Riemann-backed metric")
        f = parse_vector(args.f, spec.dim, spec.field)
        value = mm.eval_sesquilinear(profile, g, f, h)
        if spec.field is Field.COMPLEX:
            _emit({"value": [value.real, value.imag]})
        else:
            _emit({"value": float(value)})
    else:
        _emit({"value": mm.eval_finsler(spec, g, h)})
    return 0


def cmd_decompose(args) -> int:
    spec = metric_from_args(args)
    if spec.dim < 2:
        sys.stderr.write("decomposition requires dim >= 2\n")
        return 3
    if isinstance(spec, mm.FromNonSymLambda):
        raise UsageError("the theta form loses the sign of the inner product; "
                         "non-symmetric metrics have no symmetric decomposition")
    r_values = [float(r) for r in np.linspace(args.r_min, args.r_max, args.r_steps)]
    profile = mm.sesquilinear_profile(spec)
    as_riemann = (args.form == "riemann") or (args.form == "auto" and profile is not None)
    if as_riemann:
        if profile is None:
            raise UsageError("this metric has no sesquilinear form; use --as finsler")
        extracted = dc.extract_phi_psi(dc.sesqui_oracle_from_spec(spec))
        _write_csv(dc.tabulate_phi_psi(extracted, r_values), ["r", "phi", "psi"], args)
    else:
        theta = dc.extract_theta(dc.oracle_from_spec(spec))
        tau_values = [float(t) for t in np.linspace(0.0, 0.5 * math.pi, args.tau_steps)]
        _write_csv(dc.tabulate_theta(theta, r_values, tau_values),
                   ["r", "tau", "theta_value"], args)
    return 0


def cmd_check(args) -> int:
    spec = metric_from_args(args)
    spec_obj = _spec_json_or_family(spec)
    if args.which == "invariance":
        verdict = iv.invariance_suite(spec, args.samples, args.seed, args.tol)
        report = iv.verdict_to_json(verdict, spec_obj, None)
        report.pop("map")
        report.update({"check": "invariance", "samples": verdict.samples_used,
                       "passed": verdict.is_symmetry})
        _emit(report)
        return 0 if verdict.is_symmetry else 1
    if args.which == "homothety":
        if args.alpha is None:
            raise UsageError("check homothety needs --alpha")
        verdict = mm.check_homothety_invariance(spec, args.alpha, args.samples,
                                                args.seed, args.tol)
        _emit({"check": "homothety", "alpha": args.alpha, "spec": spec_obj,
               "max_deviation": verdict.max_deviation, "passed": verdict.invariant,
               "skipped": verdict.skipped,
               "witness": None if verdict.witness is None else {
                   "g": iv.vector_json(verdict.witness[0]),
                   "h": iv.vector_json(verdict.witness[1])}})
        return 0 if verdict.invariant else 1
    profile = mm.sesquilinear_profile(spec)
    if profile is None:
        raise UsageError(f"check {args.which} needs a Riemann-backed metric")
    r_values = [float(r) for r in np.linspace(args.r_min, args.r_max, args.samples)] \
        if args.samples > 1 else [args.r_min]
    if args.which == "pd":
        verdicts = mm.check_positive_definite(profile, [r * r for r in r_values])
        passed = all(v is mm.PDVerdict.POSITIVE_DEFINITE for v in verdicts)
        _emit({"check": "pd", "spec": spec_obj, "r_squared": [r * r for r in r_values],
               "verdicts": [v.value for v in verdicts], "passed": passed})
        return 0 if passed else 1
    # kaehler
    results = mm.check_kaehler(profile, [r * r for r in r_values])
    passed = all(results)
    report = {"check": "kaehler", "spec": spec_obj, "r_squared": [r * r for r in r_values],
              "results": results, "passed": passed}
    if spec.family == "fubini-study":
        report["potential"] = "2*log(norm(g))"  # informational; not verified
    _emit(report)
    return 0 if passed else 1


def _spec_json_or_family(spec: mm.MetricSpec):
    try:
        return mm.spec_to_json(spec)
    except ValueError:
        return {"family": spec.family, "dim": spec.dim, "field": spec.field.value}


def cmd_probe_main(args) -> int:
    spec = metric_from_args(args)
    spec_obj = _spec_json_or_family(spec)
    if spec.dim < 3:
        if args.sl2 is None:
            raise UsageError("the theorem probe requires dim >= 3 "
                             "(use --sl2 N for the dim-2 area exception)")
        if not isinstance(spec, mm.AreaDim2):
            raise UsageError("--sl2 applies to the dim-2 area metric")
        maps = [iv.random_unimodular(args.seed + k) for k in range(args.sl2)]
        report = iv.dim2_exception_check(spec.b, maps, args.samples, args.seed, args.tol)
        _emit({"probe": "dim2-exception", "spec": spec_obj, "maps_tested": report.maps_tested,
               "max_deviation": report.max_deviation, "passed": report.all_passed})
        return 0 if report.all_passed else 1
    report = iv.congruence_theorem_probe(spec, n_maps=args.maps, n_samples=args.samples,
                                   seed=args.seed, min_sv_ratio=args.min_sv_ratio)
    ok = report.vacuous or (report.all_failed and report.controls_passed)
    _emit({"probe": "theorem-main", "spec": spec_obj, "maps_tested": report.maps_tested,
           "all_non_congruences_failed": report.all_failed,
           "weakest_deviation": report.weakest_deviation,
           "controls_tested": report.controls_tested,
           "controls_passed": report.controls_passed,
           "control_worst_deviation": report.control_worst_deviation,
           "vacuous": report.vacuous, "passed": ok})
    return 0 if ok else 1


def cmd_distance(args) -> int:
    spec = metric_from_args(args)
    g = parse_vector(args.g, spec.dim, spec.field)
    h = parse_vector(args.h, spec.dim, spec.field)
    result = ge.geodesic_distance(spec, g, h, n_vertices=args.vertices,
                                  n_iterations=args.iterations, seed=args.seed,
                                  n_starts=args.starts)
    if args.path_out:
        n = spec.dim
        header = ["t"] + [f"x{i + 1}" for i in range(n)]
        if spec.field is Field.COMPLEX:
            header += [f"y{i + 1}" for i in range(n)]
        with open(args.path_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in ge.path_rows(result.path):
                writer.writerow([format(x, ".17g") for x in row])
    _emit({"value": result.distance, "iterations": result.iterations,
           "initial_length": result.initial_length})
    return 0


# ---------------------------------------------------------------------------
# Parser assembly

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric", help="named metric, family:expr constructor, or @file.json")
    p.add_argument("--config", help="JSON metric spec file (same object as --metric @file)")
    p.add_argument("--dim", type=int)
    p.add_argument("--field", choices=["real", "complex"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finsler-iso",
        description="Isometry-invariant metrics: evaluation, decomposition, "
                    "invariance checks, theorem probes and geodesic distances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate rho_g(h), or sigma_g(f,h) with --f")
    _add_common(p)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--f", default=None)
    p.add_argument("--alpha", type=float, default=None, help="homogeneity degree for lambda: metrics")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("decompose", help="extract theta(r,tau) or (phi,psi) as CSV")
    _add_common(p)
    p.add_argument("--as", dest="form", choices=["auto", "finsler", "riemann"], default="auto")
    p.add_argument("--r-min", type=float, default=0.5)
    p.add_argument("--r-max", type=float, default=2.0)
    p.add_argument("--r-steps", type=int, default=5)
    p.add_argument("--tau-steps", type=int, default=5)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--output", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="invariance / pd / kaehler / homothety checks")
    p.add_argument("which", choices=["invariance", "pd", "kaehler", "homothety"])
    _add_common(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--alpha", type=float, default=None, help="homothety coefficient")
    p.add_argument("--r-min", type=float, default=0.5)
    p.add_argument("--r-max", type=float, default=2.0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("probe-main", help="falsification probe: symmetries are congruences")
    _add_common(p)
    p.add_argument("--maps", type=int, default=100)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--min-sv-ratio", type=float, default=1.1)
    p.add_argument("--sl2", type=int, default=None,
                   help="dim-2 exception: number of random unimodular maps")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_probe_main)

    p = sub.add_parser("distance", help="geodesic distance by polyline descent")
    _add_common(p)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--vertices", type=int, default=13)
    p.add_argument("--iterations", type=int, default=150)
    p.add_argument("--starts", type=int, default=1)
    p.add_argument("--path-out", help="write the optimized path as CSV")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_distance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ParseError, MismatchError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (OutOfDomainError, NonPositiveMetricError, ZeroVectorError, EvalError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
