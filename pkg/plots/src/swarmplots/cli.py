"""Command-line figure renderer for swarmsafe outputs.

    swarmplots --figure trajectories        --records out/records.jsonl  --out traj.png
    swarmplots --figure feasibility-heatmap --feasibility out/feasibility_map.csv --out map.png
    swarmplots --figure metrics-timeseries  --summary out/summary.csv    --out metrics.png

Exit codes: 0 success, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_KINDS, PlotSpec, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmplots", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--figure", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--records", type=Path, help="records.jsonl from a simulation run")
    parser.add_argument("--summary", type=Path, help="summary.csv from a simulation run")
    parser.add_argument("--feasibility", type=Path, help="feasibility_map.csv from the gain sweep")
    parser.add_argument("--out", required=True, type=Path, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec_kwargs = dict(
        figure=args.figure,
        out_path=args.out,
        records_path=args.records,
        summary_path=args.summary,
        feasibility_path=args.feasibility,
        dpi=args.dpi,
    )
    try:
        spec = PlotSpec(**spec_kwargs)
        out = render(spec)
    except (RenderError, OSError) as e:
        print(f"swarmplots: {e}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
