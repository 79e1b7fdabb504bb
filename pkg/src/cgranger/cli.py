"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 simulation failure, 4 data failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .cgc import InferenceConfig, cgc_infer
from .evaluate import confusion, format_table, sweep
from .exceptions import (
    DataError,
    DivergenceDetected,
    EdgeTestError,
    InvalidLag,
)
from .simulate import FAMILIES, MODES, MOTIFS, NoiseConfig, motif, random_ground_truth, simulate_ar

EXIT_OK, EXIT_USAGE, EXIT_SIMULATION, EXIT_DATA = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tau: int = 1
    alpha: float = 0.05
    condition_lag0: bool = False
    bonferroni: bool = False
    standardize: bool = False
    extra_past: int = 0
    seed: int = 0
    mode: str = "stationary"

    def inference(self) -> InferenceConfig:
        return InferenceConfig(tau=self.tau, alpha=self.alpha, condition_lag0=self.condition_lag0,
                               bonferroni=self.bonferroni, standardize=self.standardize,
                               extra_past=self.extra_past)


def _seeds(seed):
    graph, noise = np.random.SeedSequence(seed).generate_state(2)
    return int(graph), int(noise)


def _noise(args, seed):
    try:
        return NoiseConfig(args.noise_family, args.noise_scale, args.noise_ar, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_noise_flags(p):
    p.add_argument("--noise-family", choices=FAMILIES, default="laplace")
    p.add_argument("--noise-ar", type=float, default=0.5,
                   help="first-order autocorrelation of the noise (default 0.5)")
    p.add_argument("--noise-scale", type=float, default=1.0)


def _add_inference_flags(p):
    p.add_argument("--tau", type=int, default=1, help="lag order (default 1)")
    p.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    p.add_argument("--condition-lag0", action="store_true",
                   help="condition MVGC on contemporaneous third-variable values")
    p.add_argument("--bonferroni", action="store_true")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--extra-past", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None, help="worker threads for edge tests")


def _run_config(args) -> RunConfig:
    if args.tau < 1:
        raise UsageError(f"--tau must be >= 1, got {args.tau}")
    if not 0.0 < args.alpha < 1.0:
        raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.extra_past < 0:
        raise UsageError("--extra-past must be >= 0")
    return RunConfig(tau=args.tau, alpha=args.alpha, condition_lag0=args.condition_lag0,
                     bonferroni=args.bonferroni, standardize=args.standardize,
                     extra_past=args.extra_past)


def cmd_simulate(args):
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.timesteps < 2:
        raise UsageError("--timesteps must be at least 2")
    if not 0.0 < args.density <= 1.0:
        raise UsageError("--density must lie in (0, 1]")
    if args.max_lag < 1:
        raise UsageError("--max-lag must be >= 1")
    graph_seed, noise_seed = _seeds(args.seed)
    noise = _noise(args, noise_seed)
    truth = random_ground_truth(args.n, args.density, args.max_lag, graph_seed,
                                stabilize_for=args.mode)
    series = simulate_ar(truth, args.timesteps, noise, mode=args.mode)
    out = Path(args.out_dir)
    io.write_series_csv(series, out / "series.csv")
    io.write_truth_json(truth, out / "truth.json", mode=args.mode, noise=noise, seed=args.seed)
    print(f"n={series.n} T={series.T} edges={int(truth.aggregate.sum())} "
          f"mode={args.mode} seed={args.seed} -> {out}")
    return EXIT_OK


def cmd_motif(args):
    if args.timesteps < 2:
        raise UsageError("--timesteps must be at least 2")
    if not 0.2 <= abs(args.coefficient) <= 0.95:
        raise UsageError("--coefficient magnitude must lie in [0.2, 0.95]")
    noise = _noise(args, args.seed)
    series, truth = motif(args.kind, args.coefficient, args.timesteps, noise)
    out = Path(args.out_dir)
    io.write_series_csv(series, out / "series.csv")
    io.write_truth_json(truth, out / "truth.json", mode="stationary", noise=noise, seed=args.seed)
    edges = ", ".join(f"{truth.names[s]}->{truth.names[t]}" for s, t, _, _ in truth.edge_list())
    print(f"{args.kind}: {edges} (T={series.T}) -> {out}")
    return EXIT_OK


def cmd_infer(args):
    run = _run_config(args)
    series = io.read_series_csv(args.input)
    report = cgc_infer(series, config=run.inference(), n_jobs=args.jobs)
    out = Path(args.out_dir)
    io.write_report_json(report, out / "report.json")
    for name, m in (("bvgc", report.a_bvgc), ("mvgc", report.a_mvgc),
                    ("combined", report.a_combined)):
        io.write_adjacency_csv(m, out / f"{name}.csv")
        io.write_adjacency_csv(m, out / f"{name}_geweke.csv", values="geweke")
        io.write_adjacency_csv(m, out / f"{name}_pvalues.csv", values="p_values")
    names = report.names
    edges = ", ".join(f"{names[i]}->{names[j]}" for i, j in report.a_combined.edges())
    print(f"n={series.n} T={series.T} tau={run.tau} alpha={run.alpha}")
    print(f"bvgc edges={len(report.a_bvgc.edges())} mvgc edges={len(report.a_mvgc.edges())} "
          f"combined edges={len(report.a_combined.edges())}")
    print(f"combined: {edges or '(none)'}")
    return EXIT_OK


def _load_inferred(path, which):
    path = Path(path)
    if path.suffix == ".csv":
        return io.read_adjacency_csv(path)
    return io.adjacency_from_report(io.read_report_json(path), which)


def cmd_eval(args):
    truth = io.read_truth_json(args.truth).adjacency()
    inferred = _load_inferred(args.inferred, args.matrix)
    rep = confusion(truth, inferred)
    if args.json:
        sys.stdout.write(io.dumps_canonical(rep.to_dict()))
    else:
        for k, v in rep.to_dict().items():
            print(f"{k:<10}{v:.4f}" if isinstance(v, float) else f"{k:<10}{v}")
    return EXIT_OK


def _float_list(text):
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals or not all(0.0 < v < 1.0 for v in vals):
        raise argparse.ArgumentTypeError("alphas must be in (0, 1)")
    return vals


def _kind_list(text):
    kinds = [s.strip() for s in text.split(",") if s.strip()]
    bad = [k for k in kinds if k not in MOTIFS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"unknown motif kinds {bad}; choose from {MOTIFS}")
    return kinds


def cmd_sweep(args):
    run = _run_config(args)
    datasets = []
    for k, kind in enumerate(args.kinds):
        noise = _noise(args, args.seed + k)
        series, truth = motif(kind, args.coefficient, args.timesteps, noise)
        datasets.append((kind, series, truth.adjacency()))
    rows = sweep(args.alphas, datasets, run.inference(), n_jobs=args.jobs)
    if args.format == "json":
        text = io.dumps_canonical([r.to_dict() for r in rows])
    else:
        text = format_table(rows) + "\n"
    if args.output:
        io._write_text(args.output, text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cgranger",
                                     description="Causal Granger structure learning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a random ground-truth process")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--timesteps", type=int, default=5000)
    p.add_argument("--density", type=float, default=0.1)
    p.add_argument("--max-lag", type=int, default=3)
    p.add_argument("--mode", choices=MODES, default="stationary")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    _add_noise_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("motif", help="simulate a chain, fork or collider")
    p.add_argument("--kind", choices=MOTIFS, required=True)
    p.add_argument("--coefficient", type=float, default=0.6)
    p.add_argument("--timesteps", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    _add_noise_flags(p)
    p.set_defaults(func=cmd_motif)

    p = sub.add_parser("infer", help="run c-GC on a series CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", default=".")
    _add_inference_flags(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("eval", help="score an inferred graph against a truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--inferred", required=True, help="report.json or adjacency CSV")
    p.add_argument("--matrix", choices=("combined", "bvgc", "mvgc"), default="combined")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="score all methods over alphas and motifs")
    p.add_argument("--alphas", type=_float_list, default=[0.01, 0.05])
    p.add_argument("--kinds", type=_kind_list, default=list(MOTIFS))
    p.add_argument("--coefficient", type=float, default=0.6)
    p.add_argument("--timesteps", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    _add_inference_flags(p)
    _add_noise_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidLag) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceDetected as exc:
        print(f"{parser.prog} {args.command}: simulation failed: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (DataError, EdgeTestError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"{parser.prog} {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
