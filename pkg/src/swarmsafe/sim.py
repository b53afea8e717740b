"""Tick-loop orchestration and the gain-feasibility Monte Carlo harness.

Each tick works on the previous snapshot only, in a fixed order: geometric
neighborhoods -> event-triggered activation -> bids -> auction -> final
constraint sets -> per-agent QP filtering -> saturated integration. All
agents advance together, so the loop is deterministic for a given config
and seed. A baseline mode (auction disabled) enforces every active pair
from both sides to quantify the constraint-count reduction.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .auction import (
    ResponsibilityGraph,
    centralized_assign,
    compute_bid,
    final_constraint_set,
    greedy_cost,
    run_auction,
)
from .config import ScenarioConfig
from .dynamics import AgentState, RelativeState, step
from .guidance import nominal_accel
from .hocbf import build_constraint, c_offset
from .neighborhood import zem
from .qp import QpProblem, QpStatus, solve, solve_relaxed

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass
class AgentTick:
    """Per-agent slice of one tick: pre-step state and the applied command."""

    id: int
    p: np.ndarray
    v: np.ndarray
    a_nom: np.ndarray
    a_cmd: np.ndarray
    qp_status: str  # nominal | optimal | fallback
    deviation: float
    n_constraints: int
    captured: bool


@dataclass
class StepRecord:
    t: float
    agents: list[AgentTick]
    active_pairs: list[Pair]
    bids: dict[Pair, dict[int, float]]
    edges: list[tuple[int, int]]
    forced_edges: list[tuple[int, int]]
    dual_pairs: list[Pair]
    min_dist: float | None
    total_deviation: float
    qp_fallbacks: int
    total_enforced: int
    greedy_cost: float | None = None
    oracle_cost: float | None = None

    @property
    def n_active_pairs(self) -> int:
        return len(self.active_pairs)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_dual(self) -> int:
        return len(self.dual_pairs)


@dataclass
class World:
    agents: list[AgentState]
    time: float = 0.0
    captured: set[int] = field(default_factory=set)


def make_world(config: ScenarioConfig) -> World:
    return World(agents=config.initial_states())


def _pairwise_distances(agents: list[AgentState]) -> np.ndarray:
    P = np.stack([a.p for a in agents])
    diff = P[:, None, :] - P[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def tick(world: World, config: ScenarioConfig) -> tuple[World, StepRecord]:
    """Advance the world by one dt and log everything that happened."""
    agents = world.agents
    n = len(agents)
    ids = [a.id for a in agents]
    by_id = {a.id: a for a in agents}
    hparams = config.hocbf_params()
    nparams = config.neighborhood_params()
    png = config.png_params()

    D = _pairwise_distances(agents)
    min_dist = float(np.min(D[np.triu_indices(n, k=1)])) if n > 1 else None

    # event-triggered activation over the geometric neighborhood
    active_pairs: set[Pair] = set()
    forced_edges: set[tuple[int, int]] = set()
    comm: dict[Pair, bool] = {}
    for a in range(n):
        for b in range(a + 1, n):
            dist = D[a, b]
            if dist > nparams.r_neigh:
                continue
            i, j = ids[a], ids[b]
            pair = (min(i, j), max(i, j))
            comm[pair] = dist <= nparams.r_comm
            if dist <= config.r_s + config.forced_margin:
                forced_edges.add((i, j))
                forced_edges.add((j, i))
            if dist <= nparams.r_crit:
                rel = RelativeState(r_ij=by_id[i].p - by_id[j].p,
                                    v_ij=by_id[i].v - by_id[j].v)
                if zem(rel).zem <= nparams.eta * nparams.r_crit:
                    active_pairs.add(pair)

    # nominal guidance (capture latches across ticks)
    a_nom: dict[int, np.ndarray] = {}
    captured_now: set[int] = set()
    for agent in agents:
        acc, cap = nominal_accel(
            agent, png,
            capture_radius=config.capture_radius,
            damping_gain=config.damping_gain,
            captured=agent.id in world.captured,
            restart_speed=config.restart_speed,
            restart_gain=config.restart_gain,
        )
        a_nom[agent.id] = acc
        if cap:
            captured_now.add(agent.id)

    # responsibility allocation
    bids: dict[Pair, dict[int, float]] = {}
    g_cost = o_cost = None
    if config.auction_enabled:
        auctionable = []
        for pair in active_pairs:
            if (pair[0], pair[1]) in forced_edges:
                continue
            if not comm.get(pair, False):
                continue  # no bid exchange possible: run_auction dual-enforces
            auctionable.append(pair)
            side_bids = {}
            for k, other in (pair, (pair[1], pair[0])):
                con = build_constraint(by_id[k], by_id[other], hparams, True)
                side_bids[k] = compute_bid(
                    by_id[k], by_id[other], a_nom[k], con, config.a_max
                ).cost
            bids[pair] = side_bids
        capacities = {i: config.capacity for i in ids}
        graph = run_auction(active_pairs, bids, capacities, forced_edges)
        enforce = {i: sorted(final_constraint_set(i, graph)) for i in ids}
        if 0 < len(auctionable) <= config.oracle_max_pairs:
            g_cost = greedy_cost(graph, bids)
            _, o_cost = centralized_assign(set(auctionable), bids, capacities)
    else:
        # baseline: both sides enforce every active pair
        graph = ResponsibilityGraph(capacity={i: config.capacity for i in ids},
                                    forced=set(forced_edges))
        for (p, q) in active_pairs:
            graph.edges.add((p, q))
            graph.edges.add((q, p))
        enforce = {i: sorted(final_constraint_set(i, graph)) for i in ids}

    # per-agent safety filter and integration. The cooperative substitution
    # (neighbor mirrors the command) is only sound when the pair really is
    # enforced from both sides; a lone auction winner must assume the loser
    # keeps its trajectory (non-adversarial), or it under-compensates by half.
    all_enforced = graph.edges | graph.forced
    ticks: list[AgentTick] = []
    new_agents: list[AgentState] = []
    total_dev = 0.0
    fallbacks = 0
    total_enforced = 0
    box_lo = -config.a_max * np.ones(config.dim)
    box_hi = config.a_max * np.ones(config.dim)
    for agent in agents:
        neighbors = enforce[agent.id]
        total_enforced += len(neighbors)
        nominal = a_nom[agent.id]
        if not neighbors:
            a_cmd, status, dev = nominal, "nominal", 0.0
        else:
            halfspaces = [
                build_constraint(
                    agent, by_id[j], hparams,
                    comm.get((min(agent.id, j), max(agent.id, j)), False)
                    and (j, agent.id) in all_enforced,
                ).halfspace()
                for j in neighbors
            ]
            problem = QpProblem(a_nom=nominal, halfspaces=halfspaces,
                                box_lo=box_lo, box_hi=box_hi)
            sol = solve(problem)
            if sol.status is QpStatus.OPTIMAL:
                a_cmd, status, dev = sol.a_star, "optimal", sol.deviation
            else:
                a_cmd, slack = solve_relaxed(problem)
                status = "fallback"
                dev = float(np.dot(a_cmd - nominal, a_cmd - nominal))
                fallbacks += 1
                logger.warning(
                    "t=%.3f agent %d: safety QP infeasible, min-max relaxation "
                    "applied (worst violation %.3g)",
                    world.time, agent.id, slack,
                )
        total_dev += dev
        ticks.append(AgentTick(
            id=agent.id, p=agent.p.copy(), v=agent.v.copy(),
            a_nom=np.asarray(nominal, dtype=float),
            a_cmd=np.asarray(a_cmd, dtype=float), qp_status=status,
            deviation=dev, n_constraints=len(neighbors),
            captured=agent.id in captured_now,
        ))
        new_agents.append(step(agent, a_cmd, config.dt))

    record = StepRecord(
        t=world.time,
        agents=ticks,
        active_pairs=sorted(active_pairs),
        bids=bids,
        edges=sorted(graph.edges),
        forced_edges=sorted(forced_edges),
        dual_pairs=sorted(graph.dual_enforced),
        min_dist=min_dist,
        total_deviation=total_dev,
        qp_fallbacks=fallbacks,
        total_enforced=total_enforced,
        greedy_cost=g_cost,
        oracle_cost=o_cost,
    )
    new_world = World(agents=new_agents, time=world.time + config.dt,
                      captured=captured_now)
    return new_world, record


def run(config: ScenarioConfig) -> list[StepRecord]:
    """Run until t_end or until every agent has captured its target."""
    world = make_world(config)
    records: list[StepRecord] = []
    n_ticks = int(round(config.t_end / config.dt))
    for _ in range(n_ticks):
        if len(world.captured) == len(world.agents):
            break
        world, record = tick(world, config)
        records.append(record)
    return records


# ---------------------------------------------------------------------------
# Monte Carlo feasibility mapping over the class-K gains

@dataclass
class FeasibilityMap:
    gamma1_values: tuple[float, ...]
    gamma2_values: tuple[float, ...]
    fractions: np.ndarray  # shape (len(gamma1), len(gamma2)), values in [0, 1]
    samples: int
    seed: int


def feasibility_map(config: ScenarioConfig, seed: int | None = None) -> FeasibilityMap:
    """Fraction of sampled boundary encounters with a feasible filter command.

    One encounter: the evaluated agent sits at the origin at rest; the
    neighbor is placed on the safety-boundary sphere (radius
    `sample_radius`, default r_s) moving straight at it with a sampled speed
    up to v_max. For every gain pair on the grid the single-constraint QP
    with box bounds is solved on the same encounter set and the Optimal
    fraction recorded.
    """
    spec = config.feasibility
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    dim = config.dim
    radius = spec.sample_radius if spec.sample_radius is not None else config.r_s
    speed_max = spec.speed_max if spec.speed_max is not None else config.v_max

    dirs = rng.normal(size=(spec.samples, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    speeds = rng.uniform(0.0, speed_max, size=spec.samples)

    box_lo = -config.a_max * np.ones(dim)
    box_hi = config.a_max * np.ones(dim)
    fractions = np.zeros((len(spec.gamma1_values), len(spec.gamma2_values)))
    from .hocbf import HocbfParams  # local import keeps module top uncluttered

    for i1, g1 in enumerate(spec.gamma1_values):
        for i2, g2 in enumerate(spec.gamma2_values):
            params = HocbfParams(gamma1=g1, gamma2=g2, r_s=config.r_s)
            n_ok = 0
            for u, s in zip(dirs, speeds):
                # neighbor at radius*u headed at the origin: r_ij = -radius*u,
                # v_ij = 0 - (-s*u) = s*u
                rel = RelativeState(r_ij=-radius * u, v_ij=s * u)
                c = c_offset(rel, params)
                n = 2.0 * rel.r_ij
                if spec.cooperative:
                    n = 2.0 * n
                sol = solve(QpProblem(a_nom=np.zeros(dim), halfspaces=[(n, c)],
                                      box_lo=box_lo, box_hi=box_hi))
                if sol.status is QpStatus.OPTIMAL:
                    n_ok += 1
            fractions[i1, i2] = n_ok / spec.samples
    return FeasibilityMap(
        gamma1_values=tuple(spec.gamma1_values),
        gamma2_values=tuple(spec.gamma2_values),
        fractions=fractions,
        samples=spec.samples,
        seed=seed,
    )
