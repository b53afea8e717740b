"""Deterministic multi-agent collision-avoidance simulator.

Pipeline per tick: proportional-navigation nominal guidance, event-triggered
activation of pairwise second-order barrier constraints, auction-based
allocation of enforcement responsibility, and a per-agent QP safety filter
under input bounds.
"""

from .auction import Bid, ResponsibilityGraph, centralized_assign, compute_bid, run_auction
from .config import AgentSpec, ScenarioConfig, load_config, shipped_scenario
from .dynamics import AgentState, RelativeState, relative, step
from .guidance import PngParams, nominal_accel, png_accel
from .hocbf import Behavior, HocbfParams, PairConstraint, build_constraint, c_offset
from .neighborhood import NeighborhoodParams, ZemResult, active_neighbors, geometric_neighbors, zem
from .qp import QpProblem, QpSolution, QpStatus, project_single, solve
from .sim import FeasibilityMap, StepRecord, World, feasibility_map, run, tick

__version__ = "0.1.0"

__all__ = [
    "AgentSpec", "AgentState", "Behavior", "Bid", "FeasibilityMap", "HocbfParams",
    "NeighborhoodParams", "PairConstraint", "PngParams", "QpProblem", "QpSolution",
    "QpStatus", "RelativeState", "ResponsibilityGraph", "ScenarioConfig", "StepRecord",
    "World", "ZemResult", "active_neighbors", "build_constraint", "c_offset",
    "centralized_assign", "compute_bid", "feasibility_map", "geometric_neighbors",
    "load_config", "nominal_accel", "png_accel", "project_single", "relative", "run",
    "run_auction", "shipped_scenario", "solve", "step", "tick", "zem",
]
