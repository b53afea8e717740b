"""Greedy auction allocating pairwise constraint-enforcement responsibility.

Each agent of an active pair bids its estimated corrective effort: the
deviation cost of projecting its nominal command onto the pair's halfspace,
set to +inf when the projected command exceeds the input bound. Pairs are
processed in a deterministic order (ascending minimum bid, ties by pair id)
and each is assigned to the cheaper bidder that still has responsibility
capacity; the loser takes over if the winner is saturated. When no agent
can feasibly enforce a pair (all candidates saturated or the best available
bid is infinite) both directions are enforced as an emergency fallback, and
pairs without a communication link skip the auction entirely and are
enforced from both sides under the non-adversarial assumption.

A brute-force minimum-cost assignment over per-pair directions is included
as a validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import AgentState
from .hocbf import PairConstraint
from .qp import project_single

Pair = tuple[int, int]  # unordered, stored sorted
Edge = tuple[int, int]  # directed (enforcer, neighbor)


def _as_pair(p, q) -> Pair:
    return (p, q) if p <= q else (q, p)


@dataclass(frozen=True)
class Bid:
    pair: Pair
    bidder: int
    cost: float  # >= 0, or +inf when the projection violates the input bound

    def __post_init__(self):
        if self.bidder not in self.pair:
            raise ValueError("bidder must be a member of the pair")
        if not math.isinf(self.cost) and self.cost < 0:
            raise ValueError("bid cost must be nonnegative")


@dataclass
class ResponsibilityGraph:
    """Directed enforcement assignment for one tick.

    `edges` holds auction-won directions plus both directions of every
    dual-enforced pair; `forced` holds forced-zone directions. Capacity
    counts auction-won edges only: forced and dual-enforced edges are
    safety overrides exempt from the per-agent budget.
    """

    capacity: dict[int, int]
    edges: set[Edge] = field(default_factory=set)
    forced: set[Edge] = field(default_factory=set)
    dual_enforced: set[Pair] = field(default_factory=set)

    def won_count(self, agent_id: int) -> int:
        return sum(
            1
            for (i, j) in self.edges
            if i == agent_id and _as_pair(i, j) not in self.dual_enforced
        )

    def covers(self, pair: Pair) -> bool:
        p, q = pair
        all_edges = self.edges | self.forced
        return (p, q) in all_edges or (q, p) in all_edges


def compute_bid(
    i: AgentState,
    j: AgentState,
    a_nom_i: np.ndarray,
    constraint: PairConstraint,
    a_max: float,
) -> Bid:
    """Agent i's corrective-effort bid for enforcing the pair (i, j)."""
    if constraint.pair[0] != i.id:
        raise ValueError("constraint must be built from the bidder's perspective")
    n, rhs = constraint.halfspace()
    a_star, cost = project_single(a_nom_i, n, rhs)
    if float(np.max(np.abs(a_star))) > a_max:
        cost = math.inf
    return Bid(pair=_as_pair(i.id, j.id), bidder=i.id, cost=cost)


def run_auction(
    active_pairs: set[Pair],
    bids: dict[Pair, dict[int, float]],
    capacities: dict[int, int],
    forced_edges: set[Edge] | None = None,
) -> ResponsibilityGraph:
    """Allocate every active pair to an enforcing direction.

    `bids` maps a pair to both sides' costs; pairs missing from it (no
    communication link, so no bid exchange happened) are dual-enforced.
    Pairs already covered by a forced edge are skipped: forced neighbors are
    always included downstream, so auctioning them would only burn capacity.
    The result always satisfies coverage, and auction-won edges respect
    capacities.
    """
    graph = ResponsibilityGraph(capacity=dict(capacities), forced=set(forced_edges or ()))
    won: dict[int, int] = {}

    def order_key(pair: Pair):
        pair_bids = bids.get(pair)
        lo = min(pair_bids.values()) if pair_bids else math.inf
        return (lo, pair)

    for pair in sorted({_as_pair(*p) for p in active_pairs}, key=order_key):
        p, q = pair
        if (p, q) in graph.forced or (q, p) in graph.forced:
            continue
        pair_bids = bids.get(pair)
        if not pair_bids or len(pair_bids) < 2:
            _dual_enforce(graph, pair)
            continue
        candidates = sorted(
            (k for k in pair if won.get(k, 0) < graph.capacity.get(k, 0)),
            key=lambda k: (pair_bids[k], k),
        )
        if not candidates or math.isinf(pair_bids[candidates[0]]):
            _dual_enforce(graph, pair)
            continue
        winner = candidates[0]
        other = q if winner == p else p
        graph.edges.add((winner, other))
        won[winner] = won.get(winner, 0) + 1
    return graph


def _dual_enforce(graph: ResponsibilityGraph, pair: Pair) -> None:
    p, q = pair
    graph.edges.add((p, q))
    graph.edges.add((q, p))
    graph.dual_enforced.add(pair)


def final_constraint_set(
    agent_id: int, graph: ResponsibilityGraph, forced: set[Edge] | None = None
) -> set[int]:
    """Neighbors agent_id must enforce: won/dual edges plus forced neighbors."""
    forced = graph.forced if forced is None else forced
    out = {j for (i, j) in graph.edges if i == agent_id}
    out |= {j for (i, j) in forced if i == agent_id}
    return out


def greedy_cost(graph: ResponsibilityGraph, bids: dict[Pair, dict[int, float]]) -> float:
    """Total bid cost of the auction outcome (dual pairs pay both sides)."""
    total = 0.0
    for (i, j) in graph.edges:
        pair = _as_pair(i, j)
        if pair in graph.dual_enforced:
            continue
        pair_bids = bids.get(pair)
        if pair_bids and i in pair_bids:
            total += pair_bids[i]
    for pair in graph.dual_enforced:
        pair_bids = bids.get(pair)
        if pair_bids:
            total += sum(pair_bids.values())
    return total


MAX_ORACLE_PAIRS = 20


def centralized_assign(
    active_pairs: set[Pair],
    bids: dict[Pair, dict[int, float]],
    capacities: dict[int, int],
) -> tuple[dict[Pair, int] | None, float]:
    """Minimum-total-cost covering assignment by exhaustive search.

    Explores both directions of every pair (branch and bound on partial
    cost) under the capacity limits. Returns (pair -> enforcer, total cost),
    or (None, inf) when no capacity-respecting cover exists. Test oracle
    only; refuses more than MAX_ORACLE_PAIRS pairs.
    """
    pairs = sorted(_as_pair(*p) for p in active_pairs)
    if len(pairs) > MAX_ORACLE_PAIRS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_PAIRS} pairs, got {len(pairs)}")
    for pair in pairs:
        if pair not in bids or len(bids[pair]) < 2:
            raise ValueError(f"oracle requires both bids for pair {pair}")

    best_cost = math.inf
    best_assign: dict[Pair, int] | None = None
    used: dict[int, int] = {}
    choice: dict[Pair, int] = {}

    def dfs(idx: int, cost: float) -> None:
        nonlocal best_cost, best_assign
        if cost >= best_cost:
            return
        if idx == len(pairs):
            best_cost = cost
            best_assign = dict(choice)
            return
        pair = pairs[idx]
        options = sorted(pair, key=lambda k: (bids[pair][k], k))
        for k in options:
            if used.get(k, 0) >= capacities.get(k, 0):
                continue
            used[k] = used.get(k, 0) + 1
            choice[pair] = k
            dfs(idx + 1, cost + bids[pair][k])
            del choice[pair]
            used[k] -= 1

    dfs(0, 0.0)
    return best_assign, best_cost
