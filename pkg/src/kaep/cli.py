"""Command line entry point: ``kaep run | compare | ablate``.

Settings come from defaults, then an optional JSON file (``--config``), then
flags; later sources win. Exit status is 0 on success, 1 for configuration
errors and 2 for numerical failures during a run.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .harness import (
    ABLATION_SET,
    ConfigError,
    ExperimentConfig,
    RunFailure,
    budget_parity,
    compare,
    run_experiment,
    write_comparison,
    write_results,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

# flag dest -> config field
_FLAG_FIELDS = {
    "problem": "problem",
    "strategy": "strategy",
    "taut": "tau_t",
    "nt": "n_t",
    "runs": "runs",
    "seed": "seed",
    "out": "out",
    "kernel_degree": "kernel_degree",
    "refset": "refset",
    "warmup": "warmup",
    "changes": "changes",
    "pop_size": "N",
    "n_var": "n",
    "ridge": "ridge",
    "workers": "workers",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON document with ExperimentConfig fields")
    p.add_argument("--problem")
    p.add_argument("--taut", type=int, help="generations per change")
    p.add_argument("--nt", type=int, help="change severity")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    p.add_argument("--out", help="output directory")
    p.add_argument("--kernel-degree", type=int)
    p.add_argument("--refset", type=int, help="points in each true-front reference set")
    p.add_argument("--warmup", type=int)
    p.add_argument("--changes", type=int)
    p.add_argument("--pop-size", type=int)
    p.add_argument("--n-var", type=int)
    p.add_argument("--ridge", help="'auto' or a nonnegative ridge value")
    p.add_argument("--workers", type=int, help="parallel runs")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kaep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="one strategy, several seeded runs")
    _common(run)
    run.add_argument("--strategy")

    cmp_ = sub.add_parser("compare", help="several strategies under one config")
    _common(cmp_)
    cmp_.add_argument("--strategies", default="KAEP,DNSGA2_A,DNSGA2_B,RESTART",
                      help="comma separated strategy names")

    abl = sub.add_parser("ablate", help="KAEP, CP, KAE, AEa and AEB under one config")
    _common(abl)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text(encoding="utf-8"))
        except OSError as err:
            raise ConfigError(f"cannot read {args.config}: {err}") from None
        except json.JSONDecodeError as err:
            raise ConfigError(f"{args.config} is not valid JSON: {err}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = ExperimentConfig.from_dict(data)
    overrides = {}
    for dest, fld in _FLAG_FIELDS.items():
        val = getattr(args, dest, None)
        if val is not None:
            overrides[fld] = val
    if "ridge" in overrides and overrides["ridge"] != "auto":
        try:
            overrides["ridge"] = float(overrides["ridge"])
        except ValueError:
            raise ConfigError(f"bad --ridge value {overrides['ridge']!r}") from None
    return dataclasses.replace(cfg, **overrides).validate()


def _main(argv) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = load_config(args)
    out = Path(cfg.out) if cfg.out else Path("results")

    if args.command == "run":
        result = run_experiment(cfg)
        csv_path, json_path = write_results(result, out)
        agg = result.aggregate
        print(f"{cfg.problem} {cfg.strategy} ({cfg.tau_t},{cfg.n_t}) runs={len(result.runs)} "
              f"MIGD={agg['migd_mean']:.4e} ({agg['migd_std']:.2e}) MHV={agg['mhv_mean']:.4e}")
        print(f"wrote {csv_path} and {json_path}")
        return EXIT_OK

    if args.command == "compare":
        names = [s for s in args.strategies.split(",") if s.strip()]
        try:
            results = compare(cfg, names)
        except ValueError as err:
            raise ConfigError(str(err)) from None
        table = write_comparison(results, out, "compare.csv")
    else:
        results = compare(cfg, [s.value for s in ABLATION_SET])
        table = write_comparison(results, out, "ablation.csv")
        if not budget_parity(results):
            print("evaluation budgets differ between variants", file=sys.stderr)
            sys.stdout.write(table.read_text())
            return EXIT_NUMERIC
    sys.stdout.write(table.read_text())
    print(f"wrote {table}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        return _main(argv)
    except (ConfigError, KeyError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (RunFailure, np.linalg.LinAlgError, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
