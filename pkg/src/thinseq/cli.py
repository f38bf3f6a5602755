"""Command line front end.

JSON is the canonical report format: keys sorted, two-space indent, one
trailing newline, floats through repr, so identical invocations produce
byte-identical files.  With --out a derived two-column CSV (index,value)
holding the report's main vector is written next to the report, and
--plot adds a PNG figure.  Failures print one JSON line with an "error"
field to stderr; exit code 2 marks bad input, 3 a numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import families
from .carleson import carleson_report
from .disc import disc_grid, separation_constants, thinness_trend
from .eig import ConvergenceError, hermitian_spectrum
from .gram import (
    ClusteringError,
    evaluate_synthesis,
    gram_matrix,
    matrix_dump,
    min_norm_interpolant,
)
from .jones import (
    ContractionError,
    iterative_eis_solve,
    jones_interpolate,
    load_targets,
    splitting_pair,
)
from .pick import interpolation_constant_probe, max_feasible_scale

PROBE_TRIALS = 16


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors are single JSON lines."""

    def error(self, message: str):
        print(json.dumps({"error": message}), file=sys.stderr)
        raise SystemExit(2)


@dataclass
class CommandOutput:
    report: dict | None
    rows: list[tuple[int, float]] | None
    plot: Callable | None


def _plots():
    from . import plots  # deferred; pulls in matplotlib

    return plots


def _canonical(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _derived(out: str, ext: str) -> str:
    p = Path(out)
    if p.suffix == ".json":
        return str(p.with_suffix(ext))
    return str(p) + ext


def _write_csv(path: str, rows) -> None:
    lines = ["index,value"]
    lines.extend(f"{i},{v!r}" for i, v in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _p_json(p: float) -> object:
    return 2 if p == 2.0 else "inf"


def cmd_generate(args) -> CommandOutput:
    spec = families.FamilySpec(
        kind=args.family, c=args.c, q=args.q, a=args.a, count=args.count
    )
    Z = families.generate(spec)
    families.save_sequence(args.out, Z, header=spec.describe())
    return CommandOutput(None, None, lambda path: _plots().plot_sequence(Z, path))


def cmd_analyze(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    rep = separation_constants(Z)
    trend = thinness_trend(Z.points, len(Z))
    report = {
        "delta": rep.delta,
        "deltaJ": list(rep.delta_j),
        "tailDelta": list(rep.tail_delta),
        "thinGaps": list(trend.gaps),
        "thinTrend": trend.thin_consistent,
    }
    rows = list(enumerate(rep.delta_j, 1))
    return CommandOutput(report, rows, lambda path: _plots().plot_analyze(report, path))


def cmd_gram(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    g = gram_matrix(Z, args.tail)
    vals, _ = hermitian_spectrum(g.entries)
    report = {
        "CN": float(vals[-1]),
        "N": args.tail,
        "cN": float(vals[0]),
        "count": g.size,
        "eigenvalues": [float(v) for v in vals],
        "matrix": matrix_dump(g.entries),
    }
    rows = list(enumerate(report["eigenvalues"], 1))
    return CommandOutput(report, rows, lambda path: _plots().plot_gram(report, path))


def cmd_carleson(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    rep = carleson_report(Z, args.tail, args.amp, args.grid)
    report = {
        "A": rep.amplification,
        "C": rep.C_constant,
        "N": rep.tail_offset,
        "R": rep.R_constant,
        "boxSums": list(rep.box_sums),
        "gridDensity": rep.grid_density,
    }
    rows = list(enumerate(rep.box_sums, rep.tail_offset))
    return CommandOutput(
        report, rows, lambda path: _plots().plot_carleson(report, path)
    )


def _interpolate_jones(Z, prob, args) -> dict:
    evaluator, rep = jones_interpolate(Z, prob, args.grid)
    N = prob.tail_offset
    errors = [
        float(abs(evaluator(Z.point(j)) - a))
        for j, a in zip(range(N, len(Z) + 1), prob.targets)
    ]
    return {
        "gridSup": rep.grid_sup,
        "method": "jones",
        "nodeErrors": errors,
        "offsetN": N,
        "p": _p_json(prob.p),
        "residual": rep.residual,
        "sumBound": rep.basis_sum_bound,
        "supBound": rep.sup_bound,
        "targetSup": rep.target_sup,
    }


def _interpolate_kernel(Z, prob, args) -> dict:
    N = prob.tail_offset
    pts = Z.points[N - 1:]
    if len(prob.targets) != len(pts):
        raise ValueError(
            f"expected {len(pts)} targets for the tail, got {len(prob.targets)}"
        )
    if prob.p == 2.0:
        plain = [a / np.sqrt(p.one_minus_sq) for a, p in zip(prob.targets, pts)]
    else:
        plain = list(prob.targets)
    kc, norm = min_norm_interpolant(Z, plain, N)
    errors = []
    for p, w in zip(pts, plain):
        err = abs(evaluate_synthesis(kc, p) - w)
        if prob.p == 2.0:
            err *= np.sqrt(p.one_minus_sq)  # report in the weighted metric
        errors.append(float(err))
    return {
        "method": "kernel",
        "nodeErrors": errors,
        "norm": norm,
        "offsetN": N,
        "p": _p_json(prob.p),
    }


def _interpolate_iterative(Z, prob, args) -> dict:
    kc, trace = iterative_eis_solve(Z, prob, tol=args.tol)
    return {
        "eps": trace.eps,
        "finalNorm": trace.final_norm,
        "finalResidual": trace.final_residual,
        "method": "iterative",
        "offsetN": prob.tail_offset,
        "p": _p_json(prob.p),
        "residualTrace": list(trace.residual_norms),
        "rounds": trace.rounds,
    }


def cmd_interpolate(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    prob = load_targets(args.targets)
    method = args.method or ("iterative" if prob.p == 2.0 else "jones")
    if method == "jones":
        report = _interpolate_jones(Z, prob, args)
        rows = list(enumerate(report["nodeErrors"], prob.tail_offset))
    elif method == "kernel":
        report = _interpolate_kernel(Z, prob, args)
        rows = list(enumerate(report["nodeErrors"], prob.tail_offset))
    else:
        report = _interpolate_iterative(Z, prob, args)
        rows = list(enumerate(report["residualTrace"]))
    return CommandOutput(
        report, rows, lambda path: _plots().plot_interpolate(report, path)
    )


def cmd_pick(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    sub = Z.tail(args.tail)
    if args.targets is None:
        targets = [1.0] * len(sub)
    else:
        prob = load_targets(args.targets)
        if len(prob.targets) != len(sub):
            raise ValueError(
                f"expected {len(sub)} targets for the tail, got {len(prob.targets)}"
            )
        targets = list(prob.targets)
    trace: list[tuple[float, bool]] = []
    s_star = max_feasible_scale(sub, targets, tol=args.tol, trace=trace)
    if args.bisect:
        report = {
            "MHat": None,
            "N": args.tail,
            "sStar": s_star,
            "sValues": [],
            "seed": args.seed,
            "trials": 0,
        }
        rows = [(i, s) for i, (s, _) in enumerate(trace, 1)]
    else:
        probe = interpolation_constant_probe(sub, trials=PROBE_TRIALS, seed=args.seed)
        report = {
            "MHat": probe.M_hat,
            "N": args.tail,
            "sStar": s_star,
            "sValues": list(probe.s_values),
            "seed": probe.seed,
            "trials": probe.trials,
        }
        rows = list(enumerate(probe.s_values, 1))
    return CommandOutput(report, rows, lambda path: _plots().plot_pick(report, path))


def cmd_split(args) -> CommandOutput:
    Z = families.load_sequence(args.infile)
    sp = splitting_pair(Z, args.tail, args.grid)
    grid = disc_grid(args.grid, args.grid)
    grid_max = float(np.max(np.abs(sp.F(grid)) + np.abs(sp.G(grid))))
    f_nodes = [float(abs(sp.F(p))) for p in Z.points]
    g_nodes = [float(abs(sp.G(p))) for p in Z.points]
    report = {
        "FAtNodes": f_nodes,
        "GAtNodes": g_nodes,
        "cut": sp.cut,
        "deltaPrime": sp.delta_prime,
        "deltaT": sp.delta_t,
        "epsRecorded": sp.eps_recorded,
        "gamma": sp.gamma,
        "gridMax": grid_max,
        "probeSup": sp.probe_sup,
        "t": sp.t,
    }
    rows = list(enumerate(f_nodes, 1))
    return CommandOutput(report, rows, lambda path: _plots().plot_split(report, path))


_HANDLERS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "gram": cmd_gram,
    "carleson": cmd_carleson,
    "interpolate": cmd_interpolate,
    "pick": cmd_pick,
    "split": cmd_split,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thinseq", description="sequence laboratory for the unit disc")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a parametric sequence file")
    p.add_argument(
        "--family",
        required=True,
        choices=("geometric", "supergeometric", "power_tower"),
        help="gap law for 1 - |z_n|",
    )
    p.add_argument("--q", type=float, default=0.5, help="gap ratio")
    p.add_argument("--c", type=float, default=1.0, help="gap scale")
    p.add_argument("--a", type=float, default=2.0, help="tower base")
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--out", required=True, help="sequence file (.csv or JSON)")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("analyze", help="separation constants and thinness trend")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("gram", help="tail Gram matrix and its spectrum")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tail", type=int, default=1, help="tail offset N")
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("carleson", help="box sums and embedding constants")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tail", type=int, default=1, help="tail offset N")
    p.add_argument("--amp", type=float, default=2.0, help="box amplification A")
    p.add_argument("--grid", type=int, default=64, help="probe grid density")
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("interpolate", help="solve a tail interpolation problem")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--targets", required=True, help="targets file (JSON)")
    p.add_argument(
        "--method",
        choices=("jones", "kernel", "iterative"),
        help="default: iterative for p 2, jones for p inf",
    )
    p.add_argument("--grid", type=int, default=100, help="basis grid density")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("pick", help="feasible scales for boundary targets")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tail", type=int, default=1, help="restrict to this tail")
    p.add_argument("--targets", help="targets file; default all ones")
    p.add_argument("--tol", type=float, default=1e-6, help="bisection tolerance")
    p.add_argument("--seed", type=int, default=0, help="probe seed")
    p.add_argument(
        "--bisect",
        action="store_true",
        help="bisection only; skip the random probe",
    )
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("split", help="head/tail splitting pair at a cut")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tail", type=int, required=True, help="cut index")
    p.add_argument("--grid", type=int, default=100, help="probe grid density")
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")

    return parser


def _fail(code: int, message: str) -> int:
    print(json.dumps({"error": message}), file=sys.stderr)
    return code


def _emit(out: CommandOutput, args) -> None:
    dest = getattr(args, "out", None)
    if out.report is not None:
        text = _canonical(out.report)
        if dest is None:
            sys.stdout.write(text)
        else:
            Path(dest).write_text(text, encoding="utf-8")
    if dest is not None and out.rows is not None:
        _write_csv(_derived(dest, ".csv"), out.rows)
    if args.plot and out.plot is not None:
        out.plot(_derived(dest, ".png"))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.plot and getattr(args, "out", None) is None:
        return _fail(2, "--plot requires --out")
    try:
        out = _HANDLERS[args.command](args)
        _emit(out, args)
    except (ClusteringError, ContractionError, ConvergenceError) as exc:
        return _fail(3, str(exc))
    except (OSError, ValueError, IndexError, KeyError) as exc:
        return _fail(2, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
