"""Experiment harness: run solvers on datasets, repeat with randomized
initialization, and emit metric reports, convergence curves, and
parameter-sweep tables (CSV plus rendered figures).

Per-run seed = base seed + run index; it reseeds both the coefficient
initialization and the k-means restarts, so the reported std covers every
stochastic stage.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import plots
from .data import load_dataset, normalize_view, synth_multiview, MultiViewDataset, SynthParams
from .metrics import METRIC_NAMES, aggregate, score_labels
from .solver import SolverConfig, lrr_solve, solve
from .spectral import build_affinity, spectral_cluster

_SOLVER_DEFAULTS = {
    "lam": 100.0,
    "k": None,  # defaults to 2c once the dataset is known
    "rho": 1.9,
    "mu0": 1e-4,
    "mu_max": 1e6,
    "eps": 1e-6,
    "max_iter": 300,
    "seed": 0,
    "runs": 30,
    "normalize": "unit-column",
    "method": "cbf-msc",
}


def _fmt(x):
    return format(float(x), ".12g")


def _load_views(path, normalize):
    dataset = load_dataset(path)
    if normalize != "none":
        dataset = MultiViewDataset(
            views=[normalize_view(X, normalize) for X in dataset.views],
            labels=dataset.labels,
            name=dataset.name,
            c=dataset.c,
        )
    return dataset


def _merged_options(args):
    """Config-file values override defaults; explicit flags override both."""
    merged = dict(_SOLVER_DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            merged.update(json.load(fh))
    for key in _SOLVER_DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _solver_config(opts, dataset, seed):
    k = opts["k"]
    if k is None:
        if dataset.c is None:
            raise ValueError("--k is required when the dataset declares no cluster count")
        k = 2 * dataset.c
    if dataset.c is not None and k < dataset.c:
        raise ValueError(f"k={k} must be at least the cluster count c={dataset.c}")
    if k >= dataset.n:
        raise ValueError(f"k={k} must be below the sample count n={dataset.n}")
    return SolverConfig(
        lam=opts["lam"],
        k=int(k),
        rho=opts["rho"],
        mu0=opts["mu0"],
        mu_max=opts["mu_max"],
        eps=opts["eps"],
        max_iter=int(opts["max_iter"]),
        seed=int(seed),
    )


def _run_once(dataset, opts, seed):
    """One scored run; returns (scores dict, converged, iterations)."""
    c = dataset.c
    cfg = _solver_config(opts, dataset, seed)
    if opts["method"] == "cbf-msc":
        result = solve(dataset, cfg)
        pred = spectral_cluster(build_affinity(result.Z), c, seed=seed)
        return score_labels(pred, dataset.labels), result.converged, result.iterations
    if opts["method"] == "lrr-bsv":
        # LRR per view; the best view is taken per metric.
        per_view = []
        converged = True
        iterations = 0
        for X in dataset.views:
            res = lrr_solve(X, cfg.lam, cfg)
            pred = spectral_cluster(build_affinity(res.Z), c, seed=seed)
            per_view.append(score_labels(pred, dataset.labels))
            converged = converged and res.converged
            iterations = max(iterations, res.iterations)
        best = {}
        for name in METRIC_NAMES:
            vals = [s[name] for s in per_view]
            best[name] = min(vals) if name == "AVG" else max(vals)
        return best, converged, iterations
    raise ValueError(f"unknown method {opts['method']!r}")


def _execute_runs(dataset, opts, runs, base_seed):
    raw = []
    for r in range(runs):
        seed = base_seed + r
        scores, converged, iterations = _run_once(dataset, opts, seed)
        raw.append((r, seed, converged, iterations, scores))
    report = aggregate([row[4] for row in raw])
    return raw, report


def _write_report_csv(report, path):
    with open(path, "w", newline="") as fh:
        fh.write("metric,mean,std\n")
        for name in METRIC_NAMES:
            fh.write(f"{name},{_fmt(report.means[name])},{_fmt(report.stds[name])}\n")


def _write_raw_csv(raw, path):
    with open(path, "w", newline="") as fh:
        fh.write("run,seed,converged,iterations," + ",".join(METRIC_NAMES) + "\n")
        for r, seed, converged, iterations, scores in raw:
            vals = ",".join(_fmt(scores[m]) for m in METRIC_NAMES)
            fh.write(f"{r},{seed},{int(converged)},{iterations},{vals}\n")


def cmd_run(args):
    opts = _merged_options(args)
    dataset = _load_views(args.dataset, opts["normalize"])
    if dataset.labels is None:
        raise ValueError("dataset has no ground-truth labels; metrics need them")
    os.makedirs(args.out, exist_ok=True)
    raw, report = _execute_runs(dataset, opts, int(opts["runs"]), int(opts["seed"]))
    _write_report_csv(report, os.path.join(args.out, "report.csv"))
    _write_raw_csv(raw, os.path.join(args.out, "runs.csv"))
    plots.render_report(
        report,
        os.path.join(args.out, "report.png"),
        title=f"{dataset.name}: {opts['method']} ({report.runs} runs)",
    )
    return 0


def cmd_synth(args):
    params = SynthParams(
        c=args.c,
        s=args.s,
        m=args.m,
        dims=tuple(int(d) for d in args.dims.split(",")),
        sigma=args.sigma,
        seed=args.seed,
        name=args.name,
    )
    dataset = synth_multiview(params)
    from .data import write_dataset

    manifest = write_dataset(dataset, args.out)
    print(manifest)
    return 0


def cmd_convergence(args):
    opts = _merged_options(args)
    dataset = _load_views(args.dataset, opts["normalize"])
    os.makedirs(args.out, exist_ok=True)
    cfg = _solver_config(opts, dataset, int(opts["seed"]))
    result = solve(dataset, cfg)
    csv_path = os.path.join(args.out, "convergence.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("iteration,X_conv,Z_conv,V_conv\n")
        for t, (x, z, v) in enumerate(result.residual_history, start=1):
            fh.write(f"{t},{_fmt(x)},{_fmt(z)},{_fmt(v)}\n")
    plots.render_convergence(
        result.residual_history,
        os.path.join(args.out, "convergence.png"),
        title=f"{dataset.name}: residuals",
    )
    return 0


def _parse_grid(text, cast=float):
    return [cast(tok) for tok in text.split(",") if tok.strip()]


def cmd_sweep(args):
    opts = _merged_options(args)
    dataset = _load_views(args.dataset, opts["normalize"])
    if dataset.labels is None:
        raise ValueError("dataset has no ground-truth labels; metrics need them")
    c, n = dataset.c, dataset.n
    lam_grid = _parse_grid(args.lambda_grid) if args.lambda_grid else [opts["lam"]]
    if args.k_grid:
        k_grid = _parse_grid(args.k_grid, cast=int)
    else:
        k_grid = list(range(c, n, c))
    if not lam_grid or not k_grid:
        raise ValueError("sweep grids must be non-empty")
    for k in k_grid:
        if k < c or k >= n:
            raise ValueError(f"grid value k={k} outside [c={c}, n={n})")
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for lam in lam_grid:
        for k in k_grid:
            cell = dict(opts, lam=lam, k=k)
            _, report = _execute_runs(dataset, cell, int(opts["runs"]), int(opts["seed"]))
            for name in METRIC_NAMES:
                rows.append((lam, k, name, report.means[name], report.stds[name]))
    with open(os.path.join(args.out, "sweep.csv"), "w", newline="") as fh:
        fh.write("lambda,k,metric,mean,std\n")
        for lam, k, name, mean, std in rows:
            fh.write(f"{_fmt(lam)},{k},{name},{_fmt(mean)},{_fmt(std)}\n")
    plots.render_sweep(
        rows, os.path.join(args.out, "sweep.png"), title=f"{dataset.name}: sweep"
    )
    return 0


def _add_solver_flags(p):
    p.add_argument("--dataset", required=True, help="path to a dataset manifest")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--method", choices=["cbf-msc", "lrr-bsv"], default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="trade-off between fit error and low rank")
    p.add_argument("--k", type=int, default=None, help="factor dimension (default 2c)")
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--mu-max", dest="mu_max", type=float, default=None)
    p.add_argument("--normalize", choices=["none", "unit-column"], default=None)
    p.add_argument("--out", required=True, help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cbfmsc", description="Multi-view subspace clustering benchmark harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="repeated scored runs on one dataset")
    _add_solver_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--c", type=int, default=4)
    p_synth.add_argument("--s", type=int, default=4)
    p_synth.add_argument("--m", type=int, default=30)
    p_synth.add_argument("--dims", default="60,80", help="comma-separated view dimensions")
    p_synth.add_argument("--sigma", type=float, default=0.01)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--name", default="synthetic")
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    p_conv = sub.add_parser("convergence", help="single solve, residual curves")
    _add_solver_flags(p_conv)
    p_conv.set_defaults(func=cmd_convergence)

    p_sweep = sub.add_parser("sweep", help="cross-product lambda/k sweep")
    _add_solver_flags(p_sweep)
    p_sweep.add_argument("--lambda-grid", dest="lambda_grid", default=None,
                         help="comma-separated lambda values")
    p_sweep.add_argument("--k-grid", dest="k_grid", default=None,
                         help="comma-separated k values (default c,2c,... below n)")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
