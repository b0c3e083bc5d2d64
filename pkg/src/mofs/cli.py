"""Command-line entry point.

Subcommands:
  profile    print the missingness profile of one dataset file
  run        execute the experiment described by a config file
  summarize  aggregate run records into a metrics table (text + CSV)
  export     write sorted front CSVs and scatter figures from records
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .data import ConfigurationError, DataError, load_dataset, profile_report
from .experiment import (export_fronts, load_config, per_run_metrics,
                         read_records_dir, run_experiment, summarize,
                         summary_to_csv, summary_to_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mofs",
        description=("Three-objective feature selection on incomplete "
                     "datasets: error rate, subset size and missing rate."))
    sub = parser.add_subparsers(dest="command", required=True)

    p_profile = sub.add_parser(
        "profile", help="print dataset statistics and missingness profile")
    p_profile.add_argument("dataset", help="path to a CSV dataset file")
    p_profile.add_argument("--missing-token", default="?")
    p_profile.add_argument("--skip-header", action="store_true")
    p_profile.set_defaults(handler=_cmd_profile)

    p_run = sub.add_parser("run", help="run the experiment in a config file")
    p_run.add_argument("config", help="key=value experiment config file")
    p_run.add_argument("--datasets",
                       help="comma-separated dataset list (name=path entries)")
    p_run.add_argument("--nfe", type=int, help="evaluation budget per run")
    p_run.add_argument("--pop", type=int, help="population size")
    p_run.add_argument("--theta", type=float, help="selection threshold")
    p_run.add_argument("--seed", type=int, help="base seed")
    p_run.add_argument("--runs", type=int, help="runs per dataset/algorithm")
    p_run.add_argument("--algo", help="comma-separated algorithm list")
    p_run.add_argument("--knn-k", type=int, help="neighbor count")
    p_run.add_argument("--folds", type=int, help="cross-validation folds")
    p_run.add_argument("--train-fraction", type=float)
    p_run.add_argument("--divisions", type=int,
                       help="reference-point divisions per axis")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--missing-token")
    p_run.add_argument("--skip-header", action="store_true", default=None)
    p_run.set_defaults(handler=_cmd_run)

    p_sum = sub.add_parser(
        "summarize", help="aggregate records into a metrics table")
    p_sum.add_argument("records", help="directory holding .record files")
    p_sum.add_argument("--reference", default="nsga3",
                       help="algorithm the significance marks compare against")
    p_sum.add_argument("--out", help="output directory (default: records/../summary)")
    p_sum.add_argument("--no-figures", action="store_true")
    p_sum.set_defaults(handler=_cmd_summarize)

    p_exp = sub.add_parser(
        "export", help="write sorted front CSVs and scatter figures")
    p_exp.add_argument("records", help="directory holding .record files")
    p_exp.add_argument("--out", help="output directory (default: records/../fronts)")
    p_exp.add_argument("--no-figures", action="store_true")
    p_exp.set_defaults(handler=_cmd_export)
    return parser


def _cmd_profile(args) -> int:
    dataset = load_dataset(args.dataset, args.missing_token, args.skip_header)
    sys.stdout.write(profile_report(dataset))
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.datasets is not None:
        from .experiment import parse_dataset_list
        overrides["datasets"] = parse_dataset_list(args.datasets, Path.cwd())
    if args.nfe is not None:
        overrides["nfe"] = args.nfe
    if args.pop is not None:
        overrides["pop"] = args.pop
    if args.theta is not None:
        overrides["theta"] = args.theta
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.algo is not None:
        overrides["algorithms"] = tuple(
            a.strip() for a in args.algo.split(",") if a.strip())
    if args.knn_k is not None:
        overrides["knn_k"] = args.knn_k
    if args.folds is not None:
        overrides["folds"] = args.folds
    if args.train_fraction is not None:
        overrides["train_fraction"] = args.train_fraction
    if args.divisions is not None:
        overrides["divisions"] = args.divisions
    if args.out is not None:
        overrides["out"] = args.out
    if args.missing_token is not None:
        overrides["missing_token"] = args.missing_token
    if args.skip_header is not None:
        overrides["skip_header"] = args.skip_header
    if overrides:
        cfg = replace(cfg, **overrides)
    records = run_experiment(cfg)
    if not records:
        print("error: no runs completed", file=sys.stderr)
        return 1
    print(f"wrote {len(records)} run records under {Path(cfg.out) / 'records'}")
    return 0


def _cmd_summarize(args) -> int:
    records = read_records_dir(args.records)
    table = summarize(records, reference_algorithm=args.reference)
    out_dir = Path(args.out) if args.out else Path(args.records).parent / "summary"
    out_dir.mkdir(parents=True, exist_ok=True)
    text = summary_to_text(table)
    (out_dir / "summary.txt").write_text(text)
    (out_dir / "summary.csv").write_text(summary_to_csv(table))
    sys.stdout.write(text)
    if not args.no_figures:
        from .plots import render_metric_boxplots
        values = per_run_metrics(records)
        for dataset_name in sorted({key[0] for key in values}):
            grouped: dict = {}
            for (ds, algorithm, split_name, metric), sample in values.items():
                if ds == dataset_name:
                    grouped.setdefault((metric, split_name), {})[algorithm] = sample
            render_metric_boxplots(dataset_name, grouped,
                                   out_dir / f"{dataset_name}__metrics.png")
    print(f"summary written to {out_dir}")
    return 0


def _cmd_export(args) -> int:
    records = read_records_dir(args.records)
    out_dir = Path(args.out) if args.out else Path(args.records).parent / "fronts"
    written = export_fronts(records, out_dir, make_figures=not args.no_figures)
    print(f"wrote {len(written)} files under {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except (DataError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
