"""Command-line interface.

Subcommands: indices, wb, smap, threshold, separations, example.  Exit
codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bootstrap import bootstrap_indices
from .data import GroundCost, SolverConfig
from .errors import DataError, NumericalError
from .estimators import estimate, irrelevance_threshold, ot_indices_smap
from .io import (read_columns_csv, read_dataset_csv, write_dataset_csv,
                 write_results, write_smap_results)
from .models import gen_budworm, gen_climate, gen_linear_gaussian
from .svgplot import render_indices_svg, render_separations_svg

log = logging.getLogger("otsense")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we map usage -> 1
        raise UsageError(message)


def _cols(text: str) -> list[str]:
    cols = [c.strip() for c in text.split(",") if c.strip()]
    if not cols:
        raise UsageError(f"empty column list: {text!r}")
    return cols


def _add_data_args(p: _Parser, outputs_only: bool = False) -> None:
    p.add_argument("--data", required=True, help="input CSV with a header row")
    if not outputs_only:
        p.add_argument("--inputs", required=True,
                       help="comma-separated input column names")
    p.add_argument("--outputs", required=True,
                   help="comma-separated output column names")
    p.add_argument("--classes", type=int, default=20,
                   help="partition classes per input (default 20)")
    p.add_argument("--out", default=".", help="output directory (default .)")


def _add_solver_args(p: _Parser, default_solver: str = "exact") -> None:
    p.add_argument("--solver", default=default_solver,
                   choices=["exact", "sinkhorn", "sinkhorn-stable", "1d",
                            "wass-bures"])
    p.add_argument("--epsilon", type=float, default=None,
                   help="entropic regularization relative to the max cost "
                        "entry (default: 0.01 of the mean cost)")
    p.add_argument("--iterations", type=int, default=1000,
                   help="entropic sweep budget (default 1000)")
    p.add_argument("--max-err", type=float, default=1e-9,
                   help="entropic marginal tolerance (default 1e-9)")
    p.add_argument("--p", type=float, default=2.0,
                   help="exponent of the 1-D solver cost (default 2)")
    p.add_argument("--cost", default="sq-euclidean",
                   choices=["sq-euclidean", "minkowski"],
                   help="ground cost on outputs")
    p.add_argument("--cost-p", type=float, default=2.0,
                   help="minkowski exponent p (default 2)")
    p.add_argument("--cost-q", type=float, default=2.0,
                   help="minkowski power q (default 2)")
    p.add_argument("--weighting", default="uniform", choices=["uniform", "size"],
                   help="class weighting in the index average")


def _add_bootstrap_args(p: _Parser) -> None:
    p.add_argument("--bootstrap", type=int, default=0, metavar="R",
                   help="bootstrap replicates (0 disables)")
    p.add_argument("--conf", type=float, default=0.95,
                   help="CI confidence level (default 0.95)")
    p.add_argument("--ci-type", default="normal",
                   choices=["normal", "basic", "percentile"])
    p.add_argument("--seed", type=int, default=0,
                   help="bootstrap / dummy seed (default 0)")


def _build_parser() -> _Parser:
    top = _Parser(prog="otsense",
                  description="Optimal-transport sensitivity indices from "
                              "a given input/output sample")
    top.add_argument("--version", action="version", version=f"otsense {__version__}")
    top.add_argument("--threads", type=int, default=None,
                     help="worker thread cap (default: OTSENSE_THREADS or all cores)")
    top.add_argument("-v", "--verbose", action="store_true",
                     help="log progress to stderr")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indices", help="estimate indices for every input")
    _add_data_args(p)
    _add_solver_args(p)
    _add_bootstrap_args(p)
    p.add_argument("--plot", action="store_true", help="also write indices.svg")

    p = sub.add_parser("wb", help="moment-decomposition indices "
                                  "(advective + diffusive)")
    _add_data_args(p)
    _add_bootstrap_args(p)
    p.add_argument("--weighting", default="uniform", choices=["uniform", "size"])
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("smap", help="per-output 1-D sensitivity map")
    _add_data_args(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--weighting", default="uniform", choices=["uniform", "size"])

    p = sub.add_parser("threshold", help="irrelevance threshold from a dummy input")
    _add_data_args(p, outputs_only=True)
    _add_solver_args(p)
    p.add_argument("--dummy", default="normal", choices=["normal", "uniform"],
                   help="dummy input distribution")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("separations", help="indices plus a separations plot")
    _add_data_args(p)
    _add_solver_args(p)
    _add_bootstrap_args(p)

    p = sub.add_parser("example", help="generate a benchmark dataset CSV")
    p.add_argument("--model", required=True,
                   choices=["linear-gaussian", "budworm", "climate"])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="B",
                   help="budworm state to export: B, S or E (default B)")
    p.add_argument("--out", required=True, help="destination CSV path")
    return top


def _resolve_threads(arg: int | None) -> int:
    if arg is None:
        env = os.environ.get("OTSENSE_THREADS", "").strip()
        if env:
            try:
                arg = int(env)
            except ValueError:
                raise UsageError(f"OTSENSE_THREADS must be an integer, "
                                 f"got {env!r}") from None
    if arg is None:
        arg = os.cpu_count() or 1
    if arg < 1:
        raise UsageError(f"thread count must be >= 1, got {arg}")
    return arg


def _apply_threads(threads: int) -> None:
    import numba

    numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))


def _ground_cost(args) -> GroundCost:
    if getattr(args, "cost", "sq-euclidean") == "minkowski":
        return GroundCost.minkowski_power(args.cost_p, args.cost_q)
    return GroundCost.sq_euclidean()


def _solver_config(args, solver: str | None = None) -> SolverConfig:
    return SolverConfig(solver=solver or args.solver, epsilon=args.epsilon,
                        num_iterations=args.iterations, max_err=args.max_err,
                        p=args.p)


def _run_estimate(args, solver: str | None = None):
    ds = read_dataset_csv(args.data, _cols(args.inputs), _cols(args.outputs))
    cfg = (_solver_config(args, solver) if solver != "wass-bures"
           else SolverConfig("wass-bures"))
    cost = _ground_cost(args) if solver != "wass-bures" else None
    log.info("estimating: solver=%s classes=%d n=%d d=%d k=%d",
             cfg.solver, args.classes, ds.n, ds.d, ds.k)
    est = estimate(ds, args.classes, cost, cfg, args.weighting)
    r = getattr(args, "bootstrap", 0)
    if r:
        boot = bootstrap_indices(ds, args.classes, cfg, cost, replicates=r,
                                 confidence=args.conf, ci_type=args.ci_type,
                                 seed=args.seed, class_weighting=args.weighting)
        est = replace(est, bootstrap=boot)
    return ds, est


def run_cli(argv: list[str]) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"otsense: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        _apply_threads(_resolve_threads(args.threads))
        out_dir = Path(getattr(args, "out", "."))

        if args.command == "example":
            if args.model == "linear-gaussian":
                ds = gen_linear_gaussian(args.n, args.seed)
            elif args.model == "climate":
                ds = gen_climate(args.n, args.seed)
            else:
                ds = gen_budworm(args.n, args.seed).dataset(args.output)
            out_dir.parent.mkdir(parents=True, exist_ok=True)
            write_dataset_csv(out_dir, ds)
            print(out_dir)
            return 0

        if args.command == "smap":
            ds = read_dataset_csv(args.data, _cols(args.inputs),
                                  _cols(args.outputs))
            matrix = ot_indices_smap(ds, args.classes, p=args.p,
                                     class_weighting=args.weighting)
            paths = write_smap_results(matrix, ds.x.names, ds.y.names, out_dir)
            print(paths["json"])
            return 0

        if args.command == "threshold":
            y = read_columns_csv(args.data, _cols(args.outputs))
            dummy = "standard-normal" if args.dummy == "normal" else "uniform"
            cfg = _solver_config(args)
            est = irrelevance_threshold(y, args.classes, dummy=dummy,
                                        cost=_ground_cost(args), config=cfg,
                                        seed=args.seed,
                                        class_weighting=args.weighting)
            paths = write_results(est, out_dir, threshold=float(est.indices[0]))
            print(paths["json"])
            return 0

        if args.command in ("indices", "separations"):
            ds, est = _run_estimate(args)
            paths = write_results(est, out_dir)
            if args.command == "separations" or getattr(args, "plot", False):
                (out_dir / "indices.svg").write_text(render_indices_svg(est))
            if args.command == "separations":
                (out_dir / "separations.svg").write_text(render_separations_svg(est))
            print(paths["json"])
            return 0

        if args.command == "wb":
            ds, est = _run_estimate(args, solver="wass-bures")
            paths = write_results(est, out_dir)
            if getattr(args, "plot", False):
                (out_dir / "indices.svg").write_text(render_indices_svg(est))
            print(paths["json"])
            return 0

        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"otsense: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"otsense: data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"otsense: numerical error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
