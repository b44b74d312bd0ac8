"""Command-line entry point: ``paretodescent <command> [options]``.

Exit codes: 0 on success, 2 for configuration errors, 3 when a run fails
(a single solve that ends in a line-search or domain failure, a violated
diagnostic, a front check with off-front points, or an I/O error).
"""

import argparse
import logging
import os
import sys

from . import harness
from .harness import ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN = 3


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI experiment file")
    common.add_argument("--seed", type=int, help="override the experiment seed")
    common.add_argument("--out-dir", default=None, help="directory for CSV and text outputs")
    common.add_argument("--strategy", choices=harness.STRATEGIES, help="override the stepsize strategy")
    common.add_argument("--starts", type=int, help="override the number of multi-start runs")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="paretodescent",
                                description="Multiobjective steepest descent on Riemannian manifolds.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="one run from x0 (or the first sampled start)")
    sub.add_parser("multistart", parents=[common], help="runs from random starts, with statistics")
    sub.add_parser("compare", parents=[common], help="Riemannian versus Euclidean multi-start")
    front = sub.add_parser("check-front", parents=[common],
                           help="check a Rosenbrock front CSV against the Pareto set")
    front.add_argument("front", nargs="?", help="front CSV (default: <out-dir>/front.csv)")
    front.add_argument("--tol", type=float, default=1e-5)
    sub.add_parser("diagnose", parents=[common], help="one run plus descent and complexity checks")
    return p


def _config(args):
    cfg = harness.load_config(args.config) if args.config else ExperimentConfig()
    over = {"seed": args.seed, "starts": args.starts}
    if args.strategy is not None and args.strategy != cfg.strategy:
        over.update(strategy=args.strategy, strategy_params={})
    return cfg.with_overrides(**over)


def _run(args):
    if args.command == "check-front":
        path = args.front or os.path.join(args.out_dir or ".", "front.csv")
        try:
            report = harness.check_front_file(path, args.tol)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RUN
        print(f"front points: {report.n_points}, on Pareto set: {report.n_pass}")
        for i, p in report.failures[:10]:
            print(f"  off front: row {i}: x = ({p[0]:.10g}, {p[1]:.10g})")
        return EXIT_OK if report.ok else EXIT_RUN

    cfg = _config(args)
    if args.command == "solve":
        trace, summary = harness.run_single(cfg, args.out_dir)
        print(summary)
        return EXIT_RUN if trace.termination in ("line_search_failure", "domain_error") else EXIT_OK
    if args.command == "multistart":
        result = harness.run_multistart(cfg, args.out_dir)
        print(result.stats)
        return EXIT_OK
    if args.command == "compare":
        for geometry, result in harness.compare(cfg, args.out_dir).items():
            print(f"{geometry:>10}: {result.stats}")
        return EXIT_OK
    report = harness.diagnose(cfg, args.out_dir)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_RUN


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
