"""Pairwise second-order barrier constraints in affine-in-control form.

For the squared-distance barrier h = |r_ij|^2 - r_s^2 with relative degree
two, the recursion

    psi0 = h,  psi1 = psi0' + gamma1*psi0,  psi2 = psi1' + gamma2*psi1

with h' = 2 r.v and h'' = 2|v|^2 + 2 r.(a_i - a_j) expands to

    psi2 = (2r).(a_i - a_j) + 2|v|^2 + 2(gamma1+gamma2) r.v
           + gamma1*gamma2*(|r|^2 - r_s^2),

so psi2 >= 0 is exactly (2r)^T a_i - (2r)^T a_j >= c_ij with

    c_ij = -2|v|^2 - 2(gamma1+gamma2) r.v - gamma1*gamma2*(|r|^2 - r_s^2).

Note the gamma1*gamma2 coefficient on the barrier term: it comes from the
literal expansion of the recursion, which is authoritative here.

The unknown neighbor input a_j is replaced by a behavior assumption:
cooperative (a_j = -a_i, available when the pair can communicate) or
non-adversarial (a_j = 0). Either way the agent sees a single halfspace
n^T a_i >= rhs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dynamics import AgentState, RelativeState, relative


@dataclass(frozen=True)
class HocbfParams:
    gamma1: float = 2.0
    gamma2: float = 2.0
    r_s: float = 0.4

    def __post_init__(self):
        if self.gamma1 <= 0 or self.gamma2 <= 0 or self.r_s <= 0:
            raise ValueError("gamma1, gamma2, r_s must be strictly positive")


class Behavior(enum.Enum):
    COOPERATIVE = "cooperative"
    NON_ADVERSARIAL = "non_adversarial"


@dataclass(frozen=True)
class PairConstraint:
    """One active pairwise constraint from the perspective of agent `pair[0]`.

    `normal` is the base normal 2*r_ij and `b_ij` the right-hand side after
    substituting the neighbor estimate, so the enforced halfspace is
    normal^T a_i >= b_ij. Under the cooperative substitution b_ij = c_ij/2,
    which is the same halfspace as (4 r_ij)^T a_i >= c_ij.
    """

    pair: tuple[int, int]
    normal: np.ndarray
    c_ij: float
    behavior: Behavior
    b_ij: float

    def halfspace(self) -> tuple[np.ndarray, float]:
        """Constraint as (n, rhs) with rhs = c_ij: n = 4r (coop) or 2r."""
        if self.behavior is Behavior.COOPERATIVE:
            return 2.0 * self.normal, self.c_ij
        return self.normal, self.c_ij


def barrier(rel: RelativeState, params: HocbfParams) -> float:
    """h = |r_ij|^2 - r_s^2."""
    return float(np.dot(rel.r_ij, rel.r_ij)) - params.r_s**2


def barrier_rate(rel: RelativeState) -> float:
    """h' = 2 r_ij . v_ij."""
    return 2.0 * float(np.dot(rel.r_ij, rel.v_ij))


def c_offset(rel: RelativeState, params: HocbfParams) -> float:
    """Scalar right-hand side c_ij of the affine constraint (expansion form)."""
    r, v = rel.r_ij, rel.v_ij
    g1, g2 = params.gamma1, params.gamma2
    return (
        -2.0 * float(np.dot(v, v))
        - 2.0 * (g1 + g2) * float(np.dot(r, v))
        - g1 * g2 * (float(np.dot(r, r)) - params.r_s**2)
    )


def psi_values(
    rel: RelativeState, a_i, a_j, params: HocbfParams
) -> tuple[float, float, float]:
    """Numerically evaluate (psi0, psi1, psi2) of the degree-two recursion."""
    a_i = np.asarray(a_i, dtype=np.float64)
    a_j = np.asarray(a_j, dtype=np.float64)
    h = barrier(rel, params)
    hdot = barrier_rate(rel)
    hddot = 2.0 * float(np.dot(rel.v_ij, rel.v_ij)) + 2.0 * float(
        np.dot(rel.r_ij, a_i - a_j)
    )
    psi0 = h
    psi1 = hdot + params.gamma1 * h
    psi2 = hddot + params.gamma1 * hdot + params.gamma2 * psi1
    return psi0, psi1, psi2


def build_constraint(
    i: AgentState, j: AgentState, params: HocbfParams, has_comm_link: bool
) -> PairConstraint:
    """Constraint enforced by agent i against neighbor j.

    Cooperative (a_j = -a_i) when a communication link exists, otherwise
    non-adversarial (a_j = 0). Coincident agents make the constraint
    direction undefined and raise.
    """
    if i.id == j.id:
        raise ValueError("cannot build a pair constraint for an agent with itself")
    rel = relative(i, j)
    if float(np.dot(rel.r_ij, rel.r_ij)) == 0.0:
        raise ValueError(f"agents {i.id} and {j.id} are coincident; constraint undefined")
    c = c_offset(rel, params)
    if has_comm_link:
        behavior = Behavior.COOPERATIVE
        b = 0.5 * c
    else:
        behavior = Behavior.NON_ADVERSARIAL
        b = c
    return PairConstraint(
        pair=(i.id, j.id), normal=2.0 * rel.r_ij, c_ij=c, behavior=behavior, b_ij=b
    )
