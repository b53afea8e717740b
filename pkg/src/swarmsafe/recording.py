"""File outputs: line-delimited JSON step records, the per-tick summary CSV,
run metrics, and the feasibility-map CSV.

records.jsonl starts with one header line carrying the schema version and
the fully resolved config, so downstream tools (the plotting package in
particular) are self-contained. Infinite bid costs are serialized as null:
strict JSON has no Infinity literal.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .config import SCHEMA_VERSION, ScenarioConfig
from .sim import FeasibilityMap, StepRecord

SUMMARY_COLUMNS = ["t", "min_dist", "n_active_pairs", "n_edges", "n_dual",
                   "total_deviation", "qp_fallbacks"]


def _num(x):
    if x is None:
        return None
    x = float(x)
    return None if math.isinf(x) or math.isnan(x) else x


def _vec(v) -> list[float]:
    return [float(x) for x in np.asarray(v).ravel()]


def record_to_dict(record: StepRecord) -> dict:
    return {
        "kind": "step",
        "t": record.t,
        "agents": [
            {
                "id": a.id,
                "p": _vec(a.p),
                "v": _vec(a.v),
                "a_nom": _vec(a.a_nom),
                "a_cmd": _vec(a.a_cmd),
                "qp_status": a.qp_status,
                "deviation": a.deviation,
                "n_constraints": a.n_constraints,
                "captured": a.captured,
            }
            for a in record.agents
        ],
        "active_pairs": [list(p) for p in record.active_pairs],
        "bids": [
            {"pair": list(pair), "costs": {str(k): _num(c) for k, c in costs.items()}}
            for pair, costs in sorted(record.bids.items())
        ],
        "edges": [list(e) for e in record.edges],
        "forced_edges": [list(e) for e in record.forced_edges],
        "dual_pairs": [list(p) for p in record.dual_pairs],
        "min_dist": _num(record.min_dist),
        "total_deviation": record.total_deviation,
        "qp_fallbacks": record.qp_fallbacks,
        "total_enforced": record.total_enforced,
        "greedy_cost": _num(record.greedy_cost),
        "oracle_cost": _num(record.oracle_cost),
    }


def write_records_jsonl(path, config: ScenarioConfig, records: list[StepRecord]) -> None:
    with open(path, "w") as f:
        header = {"kind": "header", "schema_version": SCHEMA_VERSION,
                  "config": config.to_dict()}
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for record in records:
            f.write(json.dumps(record_to_dict(record), sort_keys=True) + "\n")


def write_summary_csv(path, records: list[StepRecord]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        for r in records:
            writer.writerow([
                r.t,
                "" if r.min_dist is None else r.min_dist,
                r.n_active_pairs,
                r.n_edges,
                r.n_dual,
                r.total_deviation,
                r.qp_fallbacks,
            ])


def summarize(config: ScenarioConfig, records: list[StepRecord]) -> dict:
    """Run-level metrics: safety margin, capture times, enforcement totals,
    greedy-vs-oracle cost ratios where the oracle ran."""
    capture_times: dict[int, float | None] = {i: None for i in range(len(config.agents))}
    for r in records:
        for a in r.agents:
            if a.captured and capture_times[a.id] is None:
                capture_times[a.id] = r.t
    min_dists = [r.min_dist for r in records if r.min_dist is not None]
    ratios = []
    for r in records:
        if r.greedy_cost is not None and r.oracle_cost is not None and r.oracle_cost > 0:
            ratios.append(r.greedy_cost / r.oracle_cost)
    n_ticks = len(records)
    return {
        "ticks": n_ticks,
        "sim_time": records[-1].t + config.dt if records else 0.0,
        "min_distance": min(min_dists) if min_dists else None,
        "safety_satisfied": (min(min_dists) >= config.r_s - 1e-6) if min_dists else True,
        "capture_times": {str(k): v for k, v in capture_times.items()},
        "all_captured": all(v is not None for v in capture_times.values()),
        "total_enforced_sum": sum(r.total_enforced for r in records),
        "mean_enforced_per_tick": (
            sum(r.total_enforced for r in records) / n_ticks if n_ticks else 0.0
        ),
        "total_active_pair_ticks": sum(r.n_active_pairs for r in records),
        "qp_fallbacks": sum(r.qp_fallbacks for r in records),
        "total_deviation": sum(r.total_deviation for r in records),
        "dual_pair_ticks": sum(r.n_dual for r in records),
        "oracle_comparison": {
            "ticks_compared": len(ratios),
            "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
            "max_ratio": max(ratios) if ratios else None,
        },
    }


def write_metrics_json(path, config: ScenarioConfig, metrics: dict) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "seed": config.seed,
        "metrics": metrics,
    }
    with open(path, "w") as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write("\n")


def write_feasibility_csv(path, fmap: FeasibilityMap) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["gamma1", "gamma2", "feasible_fraction"])
        for i1, g1 in enumerate(fmap.gamma1_values):
            for i2, g2 in enumerate(fmap.gamma2_values):
                writer.writerow([g1, g2, fmap.fractions[i1, i2]])


def read_records_jsonl(path) -> tuple[dict, list[dict]]:
    """Parse a records file back into (header, step dicts); schema checked."""
    path = Path(path)
    with open(path) as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty records file")
    header = json.loads(lines[0])
    if header.get("kind") != "header":
        raise ValueError(f"{path}: first line is not a header record")
    version = header.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(
            f"{path}: unsupported schema_version: expected {SCHEMA_VERSION}, found {version}"
        )
    return header, [json.loads(line) for line in lines[1:]]
