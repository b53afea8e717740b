"""Command-line entry point.

    swarmsafe --config scenario.yaml --out results/ [--mode simulate]
              [--seed N] [--force]

Modes:
  simulate          run the scenario; write records.jsonl, summary.csv, metrics.json
  feasibility-map   Monte Carlo gain sweep; write feasibility_map.csv (+ metrics.json)
  baseline-compare  run with and without the auction; metrics.json carries both

Exit codes: 0 success, 2 config/usage error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import yaml

from .config import ConfigError, config_from_dict
from .recording import (
    summarize,
    write_feasibility_csv,
    write_metrics_json,
    write_records_jsonl,
    write_summary_csv,
)
from .sim import feasibility_map, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

MODE_OUTPUTS = {
    "simulate": ["records.jsonl", "summary.csv", "metrics.json"],
    "feasibility-map": ["feasibility_map.csv", "metrics.json"],
    "baseline-compare": [
        "records.jsonl", "summary.csv",
        "records_baseline.jsonl", "summary_baseline.csv", "metrics.json",
    ],
}


@dataclass(frozen=True)
class RunManifest:
    config_path: Path
    out_dir: Path
    mode: str
    seed: int | None = None
    force: bool = False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmsafe", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", required=True, type=Path, help="scenario YAML file")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--mode", default="simulate", choices=sorted(MODE_OUTPUTS),
                        help="what to run (default: simulate)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed (also reseeds generated layouts)")
    parser.add_argument("--force", action="store_true",
                        help="overwrite existing output files")
    return parser


def _load(manifest: RunManifest):
    """Parse + validate config, applying the seed override before any
    generator runs so layouts follow the effective seed."""
    try:
        with open(manifest.config_path) as f:
            raw = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse YAML: {e}") from e
    if manifest.seed is not None:
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a mapping")
        raw.setdefault("scenario", {})["seed"] = manifest.seed
    return config_from_dict(raw)


def _prepare_outputs(manifest: RunManifest) -> dict[str, Path]:
    paths = {name: manifest.out_dir / name for name in MODE_OUTPUTS[manifest.mode]}
    if not manifest.force:
        existing = [str(p) for p in paths.values() if p.exists()]
        if existing:
            raise ConfigError(
                "refusing to overwrite existing outputs (use --force): "
                + ", ".join(existing)
            )
    manifest.out_dir.mkdir(parents=True, exist_ok=True)
    return paths


def execute(manifest: RunManifest) -> int:
    try:
        config = _load(manifest)
        paths = _prepare_outputs(manifest)
    except ConfigError as e:
        print(f"swarmsafe: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if manifest.mode == "simulate":
            records = run(config)
            write_records_jsonl(paths["records.jsonl"], config, records)
            write_summary_csv(paths["summary.csv"], records)
            write_metrics_json(paths["metrics.json"], config, summarize(config, records))
        elif manifest.mode == "feasibility-map":
            fmap = feasibility_map(config)
            write_feasibility_csv(paths["feasibility_map.csv"], fmap)
            write_metrics_json(paths["metrics.json"], config, {
                "samples": fmap.samples,
                "grid": [len(fmap.gamma1_values), len(fmap.gamma2_values)],
                "min_fraction": float(fmap.fractions.min()),
                "max_fraction": float(fmap.fractions.max()),
            })
        else:  # baseline-compare
            from dataclasses import replace

            records = run(config)
            baseline_cfg = replace(config, auction_enabled=False)
            baseline_records = run(baseline_cfg)
            write_records_jsonl(paths["records.jsonl"], config, records)
            write_summary_csv(paths["summary.csv"], records)
            write_records_jsonl(paths["records_baseline.jsonl"], baseline_cfg,
                                baseline_records)
            write_summary_csv(paths["summary_baseline.csv"], baseline_records)
            auction_metrics = summarize(config, records)
            baseline_metrics = summarize(baseline_cfg, baseline_records)
            write_metrics_json(paths["metrics.json"], config, {
                "auction": auction_metrics,
                "baseline": baseline_metrics,
                "constraint_reduction": {
                    "auction_mean_enforced_per_tick":
                        auction_metrics["mean_enforced_per_tick"],
                    "baseline_mean_enforced_per_tick":
                        baseline_metrics["mean_enforced_per_tick"],
                },
            })
    except Exception as e:  # noqa: BLE001 - boundary: report and set exit code
        print(f"swarmsafe: runtime failure: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    manifest = RunManifest(config_path=args.config, out_dir=args.out,
                           mode=args.mode, seed=args.seed, force=args.force)
    return execute(manifest)


if __name__ == "__main__":
    sys.exit(main())
