"""
cli.py - forestlab command line

    forestlab sample --d 5 --radius 3 --replicas 100 --seed 7
    forestlab resample-test --d 5 --radius 4 --ball 1 --replicas 100000 --seed 7 --threads 8
    forestlab kac --chain cycle:3 --event 0 --samples 1000000

Values come from an optional JSON --config file; flags given on the command
line override it. Exit codes: 0 success, 2 invalid configuration, 3 budget
exceeded, 1 any other forestlab failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config
from .errors import ConfigError, ForestLabError, ResourceError
from .experiments import EXPERIMENTS, ExperimentConfig, run

log = logging.getLogger("forestlab")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

_HELP = {
    "sample": "sample wired spanning forests of a box (or of --graph FILE)",
    "resistance": "wired effective resistance by radius and the Kirchhoff edge-probability check",
    "resample-test": "compare WSF restricted to a ball with its resampling through K",
    "cuttime": "cut-time counts T_n and LERW length counters L_n against Z_1 n + Z_2",
    "njl": "tail sums of edges joining bushes and their n/m and log envelopes",
    "growth": "resistance along the ray against the cut-set lower bound",
    "recurrence": "resistance from the origin to the end of its ray, by box radius",
    "counterexample": "induced-graph resistance on two wired copies joined by a bridge",
    "kac": "mean return time against 1/P[E] on a small Markov chain",
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run options")
    g.add_argument("--seed", type=int, help="master seed; replica i uses stream (seed, i)")
    g.add_argument("--threads", type=int, help="worker processes for replicas (results do not depend on it)")
    g.add_argument("--budget-vertices", dest="budget_vertices", type=int, help="largest graph the run may build")
    g.add_argument("--out", help="output directory (default: results)")
    g.add_argument("--config", help="JSON config file; flags override its values")
    g.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    g.add_argument("--log-file", help="also write the log to this file")

    p = common.add_argument_group("experiment parameters")
    p.add_argument("--d", "--dimension", dest="dimension", type=int, help="lattice dimension")
    p.add_argument("--radius", type=int, help="box radius")
    p.add_argument("--radii", type=_int_list, help="comma-separated box radii")
    p.add_argument("--replicas", type=int)
    p.add_argument("--horizon", type=int, help="walk window in each direction")
    p.add_argument("--ball", type=int, help="ball radius for resample-test")
    p.add_argument("--n-values", dest="n_values", type=_int_list)
    p.add_argument("--m-values", dest="m_values", type=_int_list)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--graph", dest="graph_path", help="edge-list file for sample")
    p.add_argument("--trunk", choices=["none", "lattice", "box"], help="two-sided trunk for sample")
    p.add_argument("--edges", type=int, help="number of edges in the Kirchhoff check")
    p.add_argument("--chain", help="kac chain: cycle:N or two-state:p")
    p.add_argument("--event", type=_int_list, help="kac event states")
    p.add_argument("--samples", type=int, help="kac return-time samples")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="forestlab", description="Spanning-forest experiments.")
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
    return parser


_NOT_CONFIG = {"config", "log_level", "log_file"}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data = load_config(args.config) if args.config else {}
    data = {k.replace("-", "_"): v for k, v in data.items()}
    for key, value in vars(args).items():
        if key not in _NOT_CONFIG and value is not None:
            data[key] = value
    return ExperimentConfig.from_mapping(data)


def configure_logging(level: str, log_file: str | None = None) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level), format="%(asctime)s %(levelname)s %(name)s: %(message)s", handlers=handlers, force=True)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_file)
    try:
        config = config_from_args(args)
        result = run(config)
    except ConfigError as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except ResourceError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except ForestLabError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILURE
    print(f"{config.experiment}: wrote {', '.join(result.artifacts)} and manifest.json to {result.out_dir}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
