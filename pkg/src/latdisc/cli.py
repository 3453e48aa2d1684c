"""Command-line front end: ``latdisc {optimal,sweep,verify,simulate}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .discrimination import (
    analytic_subspace_optimum,
    optimal_average_probability,
    pure_state_coefficient,
)
from .simulator import SimConfig, SimulationError, run_simulation
from .states import Priors
from .verify import run_all

def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def _json_value(x):
    if isinstance(x, float) and math.isfinite(x):
        return float(f"{x:.9g}")
    return x


def manifest(command: str, params: dict, seed: int | None = None) -> dict:
    # SOURCE_DATE_EPOCH pins the timestamp so repeated runs are byte-identical
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    out = {
        "command": command,
        "parameters": params,
        "artifact_version": __version__,
        "timestamp": when.strftime("%Y-%m-%dT%H:%M:%SZ"),
    }
    if seed is not None:
        out["seed"] = seed
    return out


def render(rows: list[dict], fmt_name: str, man: dict, single: bool = False) -> str:
    if fmt_name == "json":
        objs = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        doc = dict(objs[0]) if single else {"rows": objs}
        doc["manifest"] = man
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(fmt(v) for v in row.values())
    return buf.getvalue()


def emit(text: str, args, man: dict) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(args.output)
    path.write_text(text, encoding="utf-8")
    if args.format == "csv":
        Path(f"{path}.manifest.json").write_text(json.dumps(man, indent=2) + "\n", encoding="utf-8")


def optimum_row(theta: float, eta1: float) -> dict:
    priors = Priors(eta1)
    opt = analytic_subspace_optimum(priors)
    return {
        "theta": theta,
        "eta1": eta1,
        "regime": opt.regime,
        "c1": opt.c1,
        "c2": opt.c2,
        "p_opt": optimal_average_probability(theta, priors),
    }


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _check_theta(parser, flag: str, theta: float) -> None:
    if not (0.0 <= theta <= math.pi):
        parser.error(f"argument {flag}: theta must lie in [0, pi] radians, got {theta!r}")


def _check_eta(parser, flag: str, eta1: float) -> None:
    if not (0.0 <= eta1 <= 1.0):
        parser.error(f"argument {flag}: must lie in [0, 1], got {eta1!r}")


def cmd_optimal(args, parser) -> int:
    theta = _angle(args, args.theta)
    _check_theta(parser, "--theta", theta)
    _check_eta(parser, "--eta1", args.eta1)
    row = optimum_row(theta, args.eta1)
    row["pure_success_coefficient"] = pure_state_coefficient(Priors(args.eta1))
    man = manifest("optimal", {"theta": theta, "eta1": args.eta1})
    emit(render([row], args.format, man, single=True), args, man)
    return 0


def cmd_sweep(args, parser) -> int:
    if args.points < 2:
        parser.error(f"argument --points: must be >= 2, got {args.points}")
    if args.variable == "theta":
        lo = 0.0 if args.start is None else _angle(args, args.start)
        hi = math.pi if args.stop is None else _angle(args, args.stop)
        _check_theta(parser, "--start", lo)
        _check_theta(parser, "--stop", hi)
        _check_eta(parser, "--fixed", args.fixed)
    else:
        lo = 0.0 if args.start is None else args.start
        hi = 1.0 if args.stop is None else args.stop
        _check_eta(parser, "--start", lo)
        _check_eta(parser, "--stop", hi)
        _check_theta(parser, "--fixed", _angle(args, args.fixed))
    if hi < lo:
        parser.error(f"argument --stop: must not be below --start ({hi!r} < {lo!r})")

    rows = []
    for x in np.linspace(lo, hi, args.points):
        x = float(x)
        if args.variable == "theta":
            rows.append(optimum_row(x, args.fixed))
        else:
            rows.append(optimum_row(_angle(args, args.fixed), x))
    params = {"variable": args.variable, "fixed": args.fixed, "points": args.points,
              "start": lo, "stop": hi, "degrees": args.degrees}
    man = manifest("sweep", params)
    emit(render(rows, args.format, man), args, man)
    return 0


def cmd_verify(args, parser) -> int:
    if args.resolution < 2:
        parser.error(f"argument --resolution: must be >= 2, got {args.resolution}")
    if args.eta_samples < 1:
        parser.error(f"argument --eta-samples: must be >= 1, got {args.eta_samples}")
    if args.quadrature_nodes < 4:
        parser.error(f"argument --quadrature-nodes: must be >= 4, got {args.quadrature_nodes}")
    results = run_all(
        resolution=args.resolution,
        eta_samples=args.eta_samples,
        quadrature_nodes=args.quadrature_nodes,
        inject_fault=args.inject_fault,
    )
    rows = [
        {
            "check": r.name,
            "max_deviation": float(r.deviation),
            "tolerance": float(r.tolerance),
            "status": "PASS" if r.passed else "FAIL",
        }
        for r in results
    ]
    params = {"resolution": args.resolution, "eta_samples": args.eta_samples,
              "quadrature_nodes": args.quadrature_nodes}
    man = manifest("verify", params)
    emit(render(rows, args.format, man), args, man)
    return 0 if all(r.passed for r in results) else 1


def cmd_simulate(args, parser) -> int:
    theta = _angle(args, args.theta)
    _check_theta(parser, "--theta", theta)
    _check_eta(parser, "--eta1", args.eta1)
    if args.trials < 1:
        parser.error(f"argument --trials: must be >= 1, got {args.trials}")
    if not (0 <= args.seed < 2**64):
        parser.error(f"argument --seed: must be an unsigned 64-bit integer, got {args.seed}")
    fixed = args.phase_mode == "fixed"
    cfg = SimConfig(
        theta=theta,
        eta1=args.eta1,
        trials=args.trials,
        seed=args.seed,
        phase_mode=args.phase_mode,
        phi1=_angle(args, args.phi1) if fixed else 0.0,
        phi2=_angle(args, args.phi2) if fixed else 0.0,
    )
    try:
        report = run_simulation(cfg, workers=args.threads)
    except SimulationError as exc:
        print(f"latdisc: simulation failed: {exc}", file=sys.stderr)
        return 1
    params = {"theta": theta, "eta1": args.eta1, "trials": args.trials,
              "phase_mode": args.phase_mode}
    if fixed:
        params.update(phi1=cfg.phi1, phi2=cfg.phi2)
    man = manifest("simulate", params, seed=args.seed)
    emit(render([report.to_dict()], args.format, man, single=True), args, man)
    if report.n_wrong > 0:
        print(f"latdisc: {report.n_wrong} misidentified trials", file=sys.stderr)
        return 1
    return 0


def _add_global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--format", choices=("csv", "json"), default=default("csv"))
    p.add_argument("--output", default=default(None), help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=default(os.cpu_count() or 1))
    p.add_argument("--seed", type=int, default=default(0), help="unsigned 64-bit RNG seed")
    p.add_argument("--degrees", action="store_true", default=default(False),
                   help="read angle arguments in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latdisc",
        description="Optimal programmable unambiguous discrimination of latitudinal qubit states.",
    )
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimal", help="optimal measurement and success probability")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--eta1", type=float, required=True)
    p.set_defaults(func=cmd_optimal, parser=p)

    p = sub.add_parser("sweep", help="tabulate the optimum over theta or eta1")
    p.add_argument("--variable", choices=("theta", "eta1"), required=True)
    p.add_argument("--fixed", type=float, required=True, help="value of the other parameter")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.set_defaults(func=cmd_sweep, parser=p)

    p = sub.add_parser("verify", help="run the oracle checks")
    p.add_argument("--resolution", type=int, default=10_000)
    p.add_argument("--eta-samples", type=int, default=101)
    p.add_argument("--quadrature-nodes", type=int, default=64)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("simulate", help="Monte Carlo of the optimal measurement")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--eta1", type=float, required=True)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--phase-mode", choices=("uniform", "fixed"), default="uniform")
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.set_defaults(func=cmd_simulate, parser=p)

    for name in ("optimal", "sweep", "verify", "simulate"):
        _add_global_flags(sub.choices[name], suppress=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error(f"argument --threads: must be >= 1, got {args.threads}")
    return args.func(args, args.parser)


if __name__ == "__main__":
    sys.exit(main())
