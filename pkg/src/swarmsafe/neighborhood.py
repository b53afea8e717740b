"""Geometric neighborhoods, zero-effort-miss prediction, and event triggering.

A pairwise safety constraint is activated only when both trigger conditions
hold at once: proximity |r_ij| <= r_crit and predicted miss ZEM <= eta*r_crit.
The ZEM assumes constant relative velocity: the squared distance
|r + T v|^2 is minimized at T = -(r.v)/|v|^2, and only T > 0 counts as a
converging encounter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import AgentState, RelativeState, relative

SPEED_SQ_FLOOR = 1e-12  # below this |v_ij|^2 the pair is treated as non-converging


@dataclass(frozen=True)
class NeighborhoodParams:
    r_neigh: float = 1.6
    r_crit: float = 1.3
    eta: float = 0.9
    r_comm: float = 1.6

    def __post_init__(self):
        if self.r_neigh <= 0 or self.r_comm <= 0:
            raise ValueError("radii must be strictly positive")
        if not (0 < self.r_crit <= self.r_neigh):
            raise ValueError("requires 0 < r_crit <= r_neigh")
        if not (0 < self.eta < 1):
            raise ValueError("eta must lie in (0, 1)")


@dataclass(frozen=True)
class ZemResult:
    t_zem: float
    zem: float
    converging: bool


def zem(rel: RelativeState) -> ZemResult:
    """Predicted minimum separation under constant relative velocity."""
    r = rel.r_ij
    v = rel.v_ij
    vv = float(np.dot(v, v))
    dist = float(np.linalg.norm(r))
    if vv < SPEED_SQ_FLOOR:
        return ZemResult(t_zem=0.0, zem=dist, converging=False)
    t = -float(np.dot(r, v)) / vv
    if t <= 0.0:
        return ZemResult(t_zem=0.0, zem=dist, converging=False)
    miss = float(np.linalg.norm(r + t * v))
    return ZemResult(t_zem=t, zem=miss, converging=True)


def geometric_neighbors(
    agent: AgentState, all_agents: list[AgentState], params: NeighborhoodParams
) -> set[int]:
    """Ids within r_neigh of `agent` (boundary inclusive), excluding itself."""
    out: set[int] = set()
    for other in all_agents:
        if other.id == agent.id:
            continue
        if float(np.linalg.norm(agent.p - other.p)) <= params.r_neigh:
            out.add(other.id)
    return out


def active_neighbors(
    agent: AgentState,
    geometric_set: set[int],
    states: dict[int, AgentState],
    params: NeighborhoodParams,
) -> set[int]:
    """Subset of geometric neighbors whose constraint is event-triggered."""
    out: set[int] = set()
    for j in geometric_set:
        rel = relative(agent, states[j])
        if float(np.linalg.norm(rel.r_ij)) > params.r_crit:
            continue
        if zem(rel).zem <= params.eta * params.r_crit:
            out.add(j)
    return out
