"""Command-line interface: ``obtusity <command> ...``.

Commands
--------
estimate     Monte Carlo estimate for a body, cube configuration or
             auxiliary-variable event
quadrature   numerical value of a sub-configuration or configuration
exact        closed form and decimal expansion
verify       run the cross-check suite (exit status 1 if any check fails)
bodies       obtusity of the five standard bodies: exact, decimal, MC
             (also available as ``table1``)

Reports go to stdout as JSON with sorted keys (or CSV with ``--format
csv``).  Wall time is only included with ``--timing`` so that identical
invocations give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import crt, montecarlo, quadrature, verify
from .exact import PUBLISHED_VALUES, ClosedFormValue, cf_eval, config_closed_form, published_value
from .geometry import CONFIG_PARTS, CONFIGURATIONS, Body, parse_subconfig

BODY_TARGETS = {
    "cube": (Body.UNIT_CUBE, "eta_C3"),
    "square": (Body.UNIT_SQUARE, "eta_square"),
    "disk": (Body.DISK, "eta_disk"),
    "ball": (Body.BALL3, "eta_ball"),
    "triangle": (Body.EQUILATERAL_TRIANGLE, "eta_triangle"),
}
RESULT_FIELDS = ("target", "method", "value", "stderr_or_bound", "reference", "z_or_dev")
REF_DIGITS = 30


class TargetError(ValueError):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _reference(value: ClosedFormValue | None) -> float | None:
    return None if value is None else float(cf_eval(value, REF_DIGITS, rounding="nearest"))


def _aux_key(terms) -> tuple:
    return tuple(sorted((s, d.value) for s, d in terms))


def _aux_references() -> dict[tuple, str]:
    # event strings look like "L + L' - O < 0"
    out = {}
    for id, entry in quadrature.SUBCONFIGS.items():
        expr = entry.event.split("<")[0].replace("'", "").replace(" ", "")
        out.setdefault(_aux_key(montecarlo.parse_aux_terms(expr)), id)
    return out


def _closed_form_for(id: str) -> ClosedFormValue | None:
    if id in CONFIG_PARTS:
        return config_closed_form(id)
    try:
        return published_value(id)
    except KeyError:
        return None


def _mc_row(result: montecarlo.EstimateResult, reference: ClosedFormValue | None) -> dict:
    ref = _reference(reference)
    return {
        "target": result.target,
        "method": "mc",
        "value": result.estimate,
        "stderr_or_bound": result.stderr,
        "reference": ref,
        "z_or_dev": None if ref is None else result.z_score(ref),
    }


def run_estimate(target: str, n: int, seed: int, workers: int = 1, vertex: int | None = None) -> list[dict]:
    if target in BODY_TARGETS:
        if vertex is not None:
            raise TargetError("--vertex applies to configuration targets only")
        body, ref = BODY_TARGETS[target]
        return [_mc_row(montecarlo.estimate_body(body, n, seed, workers), published_value(ref))]
    if target.startswith("config:"):
        label = target[len("config:"):]
        if "*" in label:
            if vertex is not None:
                raise TargetError("give either a starred id or --vertex, not both")
            try:
                label, index = parse_subconfig(label)
            except (KeyError, ValueError) as exc:
                raise TargetError(str(exc)) from None
            vertex = index + 1
        if label not in CONFIGURATIONS:
            raise TargetError(f"unknown configuration {label!r}; known: {', '.join(CONFIGURATIONS)}")
        r = montecarlo.estimate_configuration(label, vertex, n, seed, workers)
        return [_mc_row(r, _closed_form_for(r.target))]
    if target.startswith("aux:"):
        try:
            terms = montecarlo.parse_aux_terms(target[len("aux:"):])
        except ValueError as exc:
            raise TargetError(str(exc)) from None
        r = montecarlo.estimate_auxiliary_event(terms, n, seed, workers)
        id = _aux_references().get(_aux_key(terms))
        return [_mc_row(r, None if id is None else published_value(id))]
    raise TargetError(f"unknown target {target!r}")


def run_quadrature(target: str, tol: float) -> list[dict]:
    spec = quadrature.QuadratureSpec(tol=tol)
    if target == "cube":
        r, ref = quadrature.eta_cube_direct(spec), published_value("eta_C3")
    elif target in CONFIG_PARTS:
        r, ref = quadrature.eta_configuration(target, spec), config_closed_form(target)
    else:
        try:
            r = quadrature.subconfig_integral(target, spec)
        except KeyError:
            raise TargetError(f"unknown quadrature target {target!r}") from None
        ref = published_value(target)
    refv = _reference(ref)
    return [{"target": target, "method": "quad", "value": r.value, "stderr_or_bound": r.error,
             "reference": refv, "z_or_dev": r.value - refv}]


def _exact_value(target: str) -> ClosedFormValue:
    if target == "cube":
        return crt.assemble_eta_cube()
    if target in BODY_TARGETS:
        return published_value(BODY_TARGETS[target][1])
    if target in CONFIG_PARTS:
        return config_closed_form(target)
    if target in PUBLISHED_VALUES:
        return PUBLISHED_VALUES[target]
    raise TargetError(f"unknown exact target {target!r}")


def run_exact(target: str, digits: int) -> list[dict]:
    v = _exact_value(target)
    return [{"target": target, "method": "exact", "value": str(cf_eval(v, digits)),
             "stderr_or_bound": f"1e-{digits}", "reference": None, "z_or_dev": None,
             "closed_form": str(v), "coefficients": v.to_json()}]


def run_bodies(n: int, digits: int, seed: int, workers: int = 1) -> list[dict]:
    rows = []
    for name in ("disk", "square", "triangle", "ball", "cube"):
        body, ref = BODY_TARGETS[name]
        exact = crt.assemble_eta_cube() if name == "cube" else published_value(ref)
        mc = montecarlo.estimate_body(body, n, seed, workers)
        refv = _reference(exact)
        rows.append({"target": name, "method": "mc", "value": mc.estimate,
                     "stderr_or_bound": mc.stderr, "reference": refv, "z_or_dev": mc.z_score(refv),
                     "closed_form": str(exact), "decimal": str(cf_eval(exact, digits))})
    return rows


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    rows = report["results"]
    extra = sorted({k for r in rows for k in r} - set(RESULT_FIELDS))
    writer = csv.DictWriter(buf, fieldnames=[*RESULT_FIELDS, *extra], lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: "" if r.get(k) is None else
                         (json.dumps(r[k], sort_keys=True) if isinstance(r[k], dict) else r[k])
                         for k in writer.fieldnames})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obtusity",
                                description="Obtuse random triangles: Monte Carlo, quadrature and exact values.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mc=False):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")
        if mc:
            sp.add_argument("--seed", type=_seed, default=None,
                            help="64-bit seed (drawn from OS entropy and echoed if omitted)")
            sp.add_argument("--workers", type=_positive_int, default=1)

    sp = sub.add_parser("estimate", help="Monte Carlo estimate")
    sp.add_argument("--target", required=True,
                    help="cube|square|disk|ball|triangle, config:LABEL (e.g. config:321r or "
                         "config:32*1r) or aux:EXPR (e.g. aux:L+L-O)")
    sp.add_argument("--vertex", type=int, choices=(1, 2, 3), default=None,
                    help="pin the obtuse angle to this vertex of a configuration")
    sp.add_argument("--n", type=_positive_int, default=1_000_000)
    common(sp, mc=True)

    sp = sub.add_parser("quadrature", help="numerical integration")
    sp.add_argument("target", help="sub-configuration id (3*22r, ...), configuration label, or cube")
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)

    sp = sub.add_parser("exact", help="closed form and decimal expansion")
    sp.add_argument("target", help="cube|square|disk|ball|triangle, configuration label or sub-configuration id")
    sp.add_argument("--digits", type=_positive_int, default=50)
    common(sp)

    sp = sub.add_parser("verify", help="run the cross-check suite")
    sp.add_argument("level", choices=tuple(verify.LEVELS), nargs="?", default="quick")
    common(sp, mc=True)

    sp = sub.add_parser("bodies", aliases=["table1"], help="obtusity of the standard bodies")
    sp.add_argument("--n", type=_positive_int, default=1_000_000)
    sp.add_argument("--digits", type=_positive_int, default=15)
    common(sp, mc=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "timing")}
    if "seed" in params and params["seed"] is None:
        params["seed"] = montecarlo.fresh_seed()
    report = {"command": args.command, "params": params}
    status = 0
    try:
        if args.command == "estimate":
            report["results"] = run_estimate(args.target, args.n, params["seed"], args.workers, args.vertex)
        elif args.command == "quadrature":
            report["results"] = run_quadrature(args.target, args.tol)
        elif args.command == "exact":
            report["results"] = run_exact(args.target, args.digits)
        elif args.command in ("bodies", "table1"):
            report["results"] = run_bodies(args.n, args.digits, params["seed"], args.workers)
        else:
            checks = verify.run_checks(args.level, params["seed"], args.workers)
            report["results"] = [{"target": c.name, "method": "check", "passed": c.passed,
                                  "detail": c.detail} for c in checks]
            report["passed"] = all(c.passed for c in checks)
            for c in checks:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}", file=sys.stderr)
            status = 0 if report["passed"] else 1
    except TargetError as exc:
        parser.error(str(exc))
    except quadrature.QuadratureError as exc:
        print(f"obtusity: {exc}", file=sys.stderr)
        return 3
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    sys.stdout.write(_render(report, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
