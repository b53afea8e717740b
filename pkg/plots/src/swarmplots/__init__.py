"""Static figure rendering for swarmsafe simulation outputs."""

from .render import (
    FIGURE_KINDS,
    PlotSpec,
    RenderError,
    feasibility_heatmap_figure,
    load_feasibility,
    load_records,
    load_summary,
    metrics_timeseries_figure,
    render,
    trajectories_figure,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS", "PlotSpec", "RenderError", "feasibility_heatmap_figure",
    "load_feasibility", "load_records", "load_summary",
    "metrics_timeseries_figure", "render", "trajectories_figure",
]
