"""Command line front end.

    reldiff list
    reldiff validate --config run.yaml
    reldiff run --experiment NAME [--config run.yaml] [--seed N]
                [--paths N] [--dt X] [--workers N] [--out DIR] [--smoke]
                [--csv-trajectories] [--csv-hits] [--csv-series]

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration
or usage error, 3 runtime failure.
"""

import argparse
import os
import sys
import traceback

from .config import ConfigError, default_config, load_config
from .experiments import list_experiments, run_experiment
from .report import (format_check_line, write_hits_csv, write_report,
                     write_series_csv, write_trajectory_csv)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="reldiff",
        description="pathwise relativistic diffusion experiments")
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("list", help="list available experiments")

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("--config", required=True, help="yaml config path")

    p_run = sub.add_parser("run", help="run one experiment")
    p_run.add_argument("--experiment", help="experiment name (see list)")
    p_run.add_argument("--config", help="yaml config path")
    p_run.add_argument("--seed", type=int, help="override the run seed")
    p_run.add_argument("--paths", type=int, help="override the path count")
    p_run.add_argument("--dt", type=float, help="override the step size")
    p_run.add_argument("--workers", type=int, help="worker process count")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--smoke", action="store_true",
                       help="use the quick smoke-scale parameters")
    p_run.add_argument("--csv-trajectories", action="store_true",
                       help="also write the trajectory table if produced")
    p_run.add_argument("--csv-hits", action="store_true",
                       help="also write the hyperplane hit table if produced")
    p_run.add_argument("--csv-series", action="store_true",
                       help="also write the summary series table if produced")
    return parser


def _cmd_list():
    for name, summary in list_experiments():
        print("%-26s %s" % (name, summary))
    return 0


def _cmd_validate(args):
    cfg = load_config(args.config)
    exp = cfg["experiment"] or "(none)"
    print("ok: schema_version=1 experiment=%s" % exp)
    return 0


def _cmd_run(args):
    cfg = default_config()
    if args.config:
        cfg = load_config(args.config)
    if args.experiment:
        cfg["experiment"] = args.experiment
    if cfg["experiment"] is None:
        raise ConfigError("experiment: required (flag --experiment or "
                          "config field)")
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.workers is not None:
        cfg["workers"] = args.workers
    if args.out is not None:
        cfg["out"] = args.out
    if args.smoke:
        cfg["smoke"] = True
    overrides = dict(cfg["params"])
    if args.paths is not None:
        overrides["paths"] = args.paths
    if args.dt is not None:
        overrides["dt"] = args.dt
    if cfg["csv"]["trajectories"] is False and args.csv_trajectories:
        cfg["csv"]["trajectories"] = True
    if cfg["csv"]["hits"] is False and args.csv_hits:
        cfg["csv"]["hits"] = True
    if cfg["csv"]["series"] is False and args.csv_series:
        cfg["csv"]["series"] = True

    try:
        report, artifacts = run_experiment(
            cfg["experiment"], seed=cfg["seed"], workers=cfg["workers"],
            overrides=overrides, smoke=cfg["smoke"])
    except ValueError as exc:
        # bad experiment name or unknown parameter override
        raise ConfigError(str(exc))

    os.makedirs(cfg["out"], exist_ok=True)
    rpath = os.path.join(cfg["out"], "%s_report.json" % cfg["experiment"])
    write_report(rpath, report)
    for check in report["checks"]:
        print(format_check_line(check))
    print("%s: %s (seed %d) -> %s"
          % ("PASS" if report["pass"] else "FAIL", cfg["experiment"],
             report["seed"], rpath))

    max_rows = cfg["csv"]["max_rows"]
    if cfg["csv"]["trajectories"]:
        traj = artifacts.get("trajectory")
        if traj is None:
            print("note: %s produces no trajectory table" % cfg["experiment"])
        else:
            tpath = os.path.join(cfg["out"],
                                 "%s_trajectory.csv" % cfg["experiment"])
            rows = write_trajectory_csv(tpath, traj, max_rows=max_rows)
            print("wrote %d trajectory rows -> %s" % (rows, tpath))
    if cfg["csv"]["hits"]:
        hits = artifacts.get("hits")
        if hits is None or len(hits["ids"]) == 0:
            print("note: %s produced no hit table" % cfg["experiment"])
        else:
            hpath = os.path.join(cfg["out"], "%s_hits.csv" % cfg["experiment"])
            rows = write_hits_csv(hpath, hits, max_rows=max_rows)
            print("wrote %d hit rows -> %s" % (rows, hpath))
    if cfg["csv"]["series"]:
        series = artifacts.get("series")
        if series is None:
            print("note: %s produces no series table" % cfg["experiment"])
        else:
            spath = os.path.join(cfg["out"],
                                 "%s_series.csv" % cfg["experiment"])
            rows = write_series_csv(spath, series["columns"],
                                    series["names"])
            print("wrote %d series rows -> %s" % (rows, spath))
    return 0 if report["pass"] else 1


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        if args.command == "list":
            return _cmd_list()
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_run(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
