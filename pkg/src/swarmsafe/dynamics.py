"""Double-integrator agent state and fixed-step integration.

Each agent is a point mass with commanded acceleration as input, a radial
acceleration limit a_max and a radial speed limit v_max. Integration is
semi-implicit Euler: the (saturated) acceleration updates velocity first,
the clamped velocity then updates position.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .geometry import as_vec, clamp_norm


@dataclass(frozen=True)
class AgentState:
    """State of one agent: position, velocity, fixed goal, and limits."""

    id: int
    p: np.ndarray
    v: np.ndarray
    target: np.ndarray
    a_max: float = 5.0
    v_max: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "p", as_vec(self.p))
        object.__setattr__(self, "v", as_vec(self.v, dim=self.p.size))
        object.__setattr__(self, "target", as_vec(self.target, dim=self.p.size))
        if self.a_max <= 0 or self.v_max <= 0:
            raise ValueError("a_max and v_max must be strictly positive")

    @property
    def dim(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class RelativeState:
    """Relative kinematics of an ordered pair: r_ij = p_i - p_j, v_ij = v_i - v_j."""

    r_ij: np.ndarray
    v_ij: np.ndarray


def relative(i: AgentState, j: AgentState) -> RelativeState:
    if i.dim != j.dim:
        raise ValueError(f"dimension mismatch: {i.dim} vs {j.dim}")
    return RelativeState(r_ij=i.p - j.p, v_ij=i.v - j.v)


def step(state: AgentState, a_cmd, dt: float) -> AgentState:
    """Advance one agent by dt under a commanded acceleration.

    The command is radially clamped to a_max, then v' = v + dt*a and, if
    needed, v' is radially clamped to v_max (warning emitted once), and
    finally p' = p + dt*v'. The input state is never mutated.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    a = clamp_norm(as_vec(a_cmd, dim=state.dim), state.a_max)
    v_new = state.v + dt * a
    speed = float(np.linalg.norm(v_new))
    if speed > state.v_max:
        warnings.warn(
            "velocity exceeded v_max after integration; clamped radially",
            RuntimeWarning,
            stacklevel=2,
        )
        v_new = v_new * (state.v_max / speed)
    p_new = state.p + dt * v_new
    return replace(state, p=p_new, v=v_new)
