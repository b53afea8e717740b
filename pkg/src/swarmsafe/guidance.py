"""Pure proportional navigation guidance toward a fixed target.

The nominal command is a = N * |v_rel| * (los_rate x r_hat), where
los_rate = (r x v_rel) / |r|^2 is the line-of-sight angular rate. The
command is orthogonal to the LOS and acts to null the LOS rate, aligning
the velocity vector with the LOS over time.

Sign convention (the target is a static virtual agent): r points from the
agent to the target, and v_rel = d/dt r = -v_agent. Using +v_agent instead
flips the command and steers away from LOS alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import AgentState
from .geometry import as_vec, cross_planar, embed3


@dataclass(frozen=True)
class PngParams:
    nav_constant: float = 3.0
    epsilon_range: float = 1e-3  # m, range floor below which guidance shuts off

    def __post_init__(self):
        if self.nav_constant <= 0:
            raise ValueError("nav_constant must be strictly positive")
        if self.epsilon_range <= 0:
            raise ValueError("epsilon_range must be strictly positive")


def los_rate(r_los, v_rel) -> np.ndarray:
    """LOS angular rate vector (r x v) / |r|^2, always length 3."""
    r = as_vec(r_los)
    rr = float(np.dot(r, r))
    if rr == 0.0:
        raise ValueError("LOS vector must be nonzero")
    return cross_planar(r, v_rel) / rr


def png_command(r_los, v_rel, nav_constant: float) -> np.ndarray:
    """Evaluate the guidance formula on explicit relative kinematics.

    Returns a vector of the input dimension; in 2D the intermediate 3D
    result has zero third component by construction.
    """
    r = as_vec(r_los)
    v = as_vec(v_rel, dim=r.size)
    lam_dot = los_rate(r, v)
    r_hat3 = embed3(r) / float(np.linalg.norm(r))
    a3 = nav_constant * float(np.linalg.norm(v)) * np.cross(lam_dot, r_hat3)
    return a3[: r.size]


def png_accel(agent: AgentState, params: PngParams) -> tuple[np.ndarray, bool]:
    """Nominal acceleration for one agent; second element flags target reached.

    Inside epsilon_range of the target the command is zero and the flag is
    set; otherwise returns the PNG command built from r = target - p and
    v_rel = -v.
    """
    r = agent.target - agent.p
    if float(np.linalg.norm(r)) < params.epsilon_range:
        return np.zeros(agent.dim), True
    return png_command(r, -agent.v, params.nav_constant), False


def _ccw_perp(r_hat: np.ndarray) -> np.ndarray:
    """Unit vector perpendicular to the LOS (counterclockwise in-plane)."""
    if r_hat.size == 2:
        return np.array([-r_hat[1], r_hat[0]])
    p = np.cross(np.array([0.0, 0.0, 1.0]), r_hat)
    if np.linalg.norm(p) < 1e-9:
        p = np.cross(np.array([1.0, 0.0, 0.0]), r_hat)
    return p / np.linalg.norm(p)


def nominal_accel(
    agent: AgentState,
    params: PngParams,
    capture_radius: float = 0.05,
    damping_gain: float = 2.0,
    captured: bool = False,
    restart_speed: float = 0.1,
    restart_gain: float = 1.0,
) -> tuple[np.ndarray, bool]:
    """Sim-facing nominal command with terminal and degenerate-case handling.

    Within capture_radius the agent is considered arrived: the command
    switches to velocity damping -damping_gain * v so it parks near the
    target. Capture latches: pass the previous flag back in, otherwise an
    agent crossing the capture zone at speed would revert to guidance with
    the target behind it (a zero-LOS-rate trap).

    The guidance law is degenerate whenever the LOS rate vanishes: an agent
    the safety filter stopped (or reversed) gets a near-zero command and
    would never make progress again. Whenever the closing speed toward the
    target drops below restart_speed the command is therefore a kick along
    the LOS with a counterclockwise tangential bias; the shared turning
    sense makes mutual standoffs orbit apart instead of pushing head-on
    forever.

    Returns (accel, captured).
    """
    r = agent.target - agent.p
    dist = float(np.linalg.norm(r))
    if captured or dist <= capture_radius:
        return -damping_gain * agent.v, True
    r_hat = r / dist
    closing = float(np.dot(r_hat, agent.v))
    if closing < restart_speed:
        kick = r_hat + 0.5 * _ccw_perp(r_hat)
        return restart_gain * kick / float(np.linalg.norm(kick)), False
    a, reached = png_accel(agent, params)
    return a, reached
