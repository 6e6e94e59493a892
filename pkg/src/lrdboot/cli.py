"""Command line entry point ``lrdboot``.

Exit codes: 0 success, 2 configuration error, 3 numeric or regime error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .errors import ConfigError, LRDBootError
from .estimator import true_abs_jm
from .experiments.config import ExperimentConfig, parse_config
from .experiments.presets import PRESETS, preset_document, preset_names
from .experiments.report import emit_report, load_series_csv, prepare_output_dir
from .experiments.scenario import run_estimates, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
DEFAULT_OUT = "lrdboot_output"


def _load_config(args) -> ExperimentConfig:
    if args.preset:
        try:
            return parse_config(preset_document(args.preset))
        except KeyError as exc:
            raise ConfigError("preset", str(exc.args[0])) from None
    text = Path(args.config).read_text(encoding="utf-8")
    return parse_config(text)


def _out_dir(args, config: ExperimentConfig) -> Path:
    return Path(args.out or config.output_dir or DEFAULT_OUT)


def _cmd_presets(args) -> int:
    for name in preset_names():
        doc = PRESETS[name]
        print(f"{name:14s} {json.dumps(doc, sort_keys=True)}")
    return EXIT_OK


def _cmd_run(args) -> int:
    config = _load_config(args)
    out = _out_dir(args, config)
    prepare_output_dir(out, args.overwrite)
    report = run_scenario(config, threads=args.threads)
    for path in emit_report(report, out, overwrite=True):
        print(path)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    config = _load_config(args)
    out = prepare_output_dir(_out_dir(args, config), args.overwrite)
    data = None
    if config.data is not None:
        data = np.asarray(load_series_csv(config.data), dtype=float)
    grid, profile, runs = run_estimates(config, threads=args.threads, data=data)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["n", "series", "x", "jhat", "jm_true_abs", "abs_error"])
    truth = None if profile is None else true_abs_jm(profile, grid)
    summary = []
    for run in runs:
        for k, (x, v) in enumerate(zip(grid.x, run.estimate.values)):
            if truth is None:
                w.writerow([run.n, run.series, repr(float(x)), repr(float(v)), "", ""])
            else:
                t = float(truth[k])
                w.writerow(
                    [run.n, run.series, repr(float(x)), repr(float(v)), repr(t), repr(abs(float(v) - t))]
                )
        summary.append({"meta": asdict(run.estimate.meta), "sup_abs_deviation": run.sup_deviation})

    (out / "jm_estimate.csv").write_text(buf.getvalue(), encoding="utf-8", newline="")
    (out / "jm_summary.json").write_text(
        json.dumps({"config": config.to_dict(), "runs": summary}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(out / "jm_estimate.csv")
    print(out / "jm_summary.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrdboot",
        description="Block bootstrap of the empirical process of long-memory subordinated Gaussian series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("presets", help="list built-in scenarios").set_defaults(func=_cmd_presets)

    for name, func, help_ in (
        ("run", _cmd_run, "run a full scenario and write report files"),
        ("estimate-jm", _cmd_estimate, "run only the J_m estimator"),
    ):
        p = sub.add_parser(name, help=help_)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="path to a JSON experiment config")
        src.add_argument("--preset", help="name of a built-in scenario")
        p.add_argument("--out", help=f"output directory (default: config output_dir or ./{DEFAULT_OUT})")
        p.add_argument("--overwrite", action="store_true", help="replace files in a non-empty output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("lrdboot: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"lrdboot: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LRDBootError as exc:
        print(f"lrdboot: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"lrdboot: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"lrdboot: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
