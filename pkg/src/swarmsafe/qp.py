"""Per-agent safety-filter QP: min |a - a_nom|^2 over halfspaces and a box.

The problem is tiny (dim <= 3, a handful of halfspaces), so instead of an
iterative solver we enumerate candidate active sets exactly: for every
subset W of at most dim constraints, solve the equality-constrained
projection

    a = a_nom + 0.5 * G_W @ lam,   lam = 2 (G_W^T G_W)^-1 (b_W - G_W^T a_nom),

and accept the first candidate that is primal feasible with nonnegative
multipliers. For a strictly convex QP the accepted point is the unique
optimum; if no subset qualifies the feasible set is empty (conic
Caratheodory: the optimum, when it exists, is supported by at most dim
linearly independent active constraints).

Also provides the closed-form single-halfspace projection and a relaxed
solve used as fallback when the constrained problem is infeasible.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class QpProblem:
    a_nom: np.ndarray
    halfspaces: list[tuple[np.ndarray, float]]  # each (normal n, rhs): n^T a >= rhs
    box_lo: np.ndarray
    box_hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a_nom", np.asarray(self.a_nom, dtype=np.float64))
        object.__setattr__(self, "box_lo", np.asarray(self.box_lo, dtype=np.float64))
        object.__setattr__(self, "box_hi", np.asarray(self.box_hi, dtype=np.float64))
        if self.box_lo.shape != self.a_nom.shape or self.box_hi.shape != self.a_nom.shape:
            raise ValueError("box bounds must match a_nom dimension")
        if np.any(self.box_lo > self.box_hi):
            raise ValueError("requires box_lo <= box_hi componentwise")
        if not np.all(np.isfinite(self.a_nom)):
            raise ValueError("a_nom must be finite")

    @property
    def dim(self) -> int:
        return self.a_nom.size


class QpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass
class QpSolution:
    a_star: np.ndarray | None
    status: QpStatus
    active_set: list[int] = field(default_factory=list)
    deviation: float = 0.0


def project_single(a_nom, normal, rhs: float) -> tuple[np.ndarray, float]:
    """Euclidean projection of a_nom onto the halfspace {a : normal^T a >= rhs}.

    Returns (a_star, cost) with cost = (rhs - normal^T a_nom)_+^2 / |normal|^2,
    the squared deviation of the projection.
    """
    a_nom = np.asarray(a_nom, dtype=np.float64)
    n = np.asarray(normal, dtype=np.float64)
    nn = float(np.dot(n, n))
    if nn == 0.0:
        raise ValueError("halfspace normal must be nonzero")
    gap = rhs - float(np.dot(n, a_nom))
    if gap <= 0.0:
        return a_nom.copy(), 0.0
    return a_nom + (gap / nn) * n, gap * gap / nn


def _stack_constraints(problem: QpProblem) -> tuple[np.ndarray, np.ndarray]:
    """All constraints as rows of (G, b) with G a >= b.

    Index layout: halfspaces first, then box lower bounds per axis, then box
    upper bounds per axis.
    """
    d = problem.dim
    m = len(problem.halfspaces)
    G = np.zeros((m + 2 * d, d))
    b = np.zeros(m + 2 * d)
    for k, (n, rhs) in enumerate(problem.halfspaces):
        n = np.asarray(n, dtype=np.float64)
        if n.size != d:
            raise ValueError("halfspace normal dimension mismatch")
        if float(np.dot(n, n)) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        G[k] = n
        b[k] = rhs
    for ax in range(d):
        G[m + ax, ax] = 1.0
        b[m + ax] = problem.box_lo[ax]
        G[m + d + ax, ax] = -1.0
        b[m + d + ax] = -problem.box_hi[ax]
    return G, b


def _enumerate_active_sets(
    a_nom: np.ndarray,
    G: np.ndarray,
    b: np.ndarray,
    max_active: int,
    feas_tol: float,
    dual_tol: float,
) -> tuple[np.ndarray, list[int]] | None:
    """First (lexicographically, by active-set size then indices) KKT point.

    Only subsets containing at least one constraint violated at a_nom are
    examined: a subset with no violated member can only reproduce a_nom,
    which the empty active set already covers.
    """
    n_con = G.shape[0]
    slack0 = G @ a_nom - b
    if np.all(slack0 >= -feas_tol):
        return a_nom.copy(), []
    violated = set(np.nonzero(slack0 < -feas_tol)[0].tolist())
    for size in range(1, max_active + 1):
        for subset in itertools.combinations(range(n_con), size):
            if violated.isdisjoint(subset):
                continue
            Gw = G[list(subset)]
            M = Gw @ Gw.T
            try:
                lam = 2.0 * np.linalg.solve(M, b[list(subset)] - Gw @ a_nom)
            except np.linalg.LinAlgError:
                continue
            if not np.all(np.isfinite(lam)) or np.any(lam < -dual_tol):
                continue
            a = a_nom + 0.5 * (Gw.T @ lam)
            if np.all(G @ a - b >= -feas_tol):
                return a, list(subset)
    return None


def solve(problem: QpProblem, feas_tol: float = 1e-8, dual_tol: float = 1e-9) -> QpSolution:
    """Exact solve of the safety-filter QP; Infeasible is a status, not an error."""
    G, b = _stack_constraints(problem)
    found = _enumerate_active_sets(problem.a_nom, G, b, problem.dim, feas_tol, dual_tol)
    if found is None:
        return QpSolution(a_star=None, status=QpStatus.INFEASIBLE, deviation=math.inf)
    a, active = found
    dev = float(np.dot(a - problem.a_nom, a - problem.a_nom))
    return QpSolution(a_star=a, status=QpStatus.OPTIMAL, active_set=active, deviation=dev)


def solve_relaxed(
    problem: QpProblem, weight: float = 1e6, feas_tol: float = 1e-8, dual_tol: float = 1e-9
) -> tuple[np.ndarray, float]:
    """Min-max violation relaxation for infeasible problems.

    Epigraph reformulation with slack t >= max constraint violation:

        min |a - a_nom|^2 + weight * t^2
        s.t. n_k^T a + t >= rhs_k,  t >= 0,  box_lo <= a <= box_hi

    which the same enumerator solves after rescaling t so the Hessian is the
    identity. Always feasible; returns (a_star, max_violation_slack).
    """
    d = problem.dim
    G, b = _stack_constraints(problem)
    m = len(problem.halfspaces)
    s = math.sqrt(weight)
    # variables y = (a, s*t); halfspace rows gain a 1/s slack column
    n_con = G.shape[0]
    Gy = np.zeros((n_con + 1, d + 1))
    by = np.zeros(n_con + 1)
    Gy[:n_con, :d] = G
    by[:n_con] = b
    Gy[:m, d] = 1.0 / s
    Gy[n_con, d] = 1.0  # s*t >= 0
    y_nom = np.concatenate([problem.a_nom, [0.0]])
    found = _enumerate_active_sets(y_nom, Gy, by, d + 1, feas_tol, dual_tol)
    if found is None:  # cannot happen: large t is always feasible
        raise RuntimeError("relaxed QP unexpectedly infeasible")
    y, _ = found
    return y[:d], float(y[d] / s)
