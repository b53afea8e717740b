"""Scenario configuration: schema, validation, YAML loading, and the shipped
scenario generators.

A config file is YAML with a `schema_version` field and the sections
`scenario`, `safety`, `limits`, `guidance`, `auction`, and optionally
`feasibility`. Agents are either listed explicitly or produced by a seeded
generator (`circle` antipodal swap or `random` placement), so runs are
reproducible from the file alone. The resolved agent list is embedded in
every output for traceability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .dynamics import AgentState
from .guidance import PngParams
from .hocbf import HocbfParams
from .neighborhood import NeighborhoodParams

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Raised for malformed or inconsistent configuration input."""


@dataclass(frozen=True)
class AgentSpec:
    p0: tuple[float, ...]
    v0: tuple[float, ...]
    target: tuple[float, ...]

    def __post_init__(self):
        # plain-float tuples: hashable, YAML-serializable, numpy-free
        object.__setattr__(self, "p0", tuple(float(x) for x in self.p0))
        object.__setattr__(self, "v0", tuple(float(x) for x in self.v0))
        object.__setattr__(self, "target", tuple(float(x) for x in self.target))


@dataclass(frozen=True)
class FeasibilitySpec:
    gamma1_values: tuple[float, ...] = tuple(np.linspace(0.5, 10.0, 10))
    gamma2_values: tuple[float, ...] = tuple(np.linspace(0.5, 10.0, 10))
    samples: int = 200
    sample_radius: float | None = None  # None: use the safety radius r_s
    speed_max: float | None = None  # None: use v_max
    cooperative: bool = False  # non-adversarial neighbor assumption by default

    def __post_init__(self):
        object.__setattr__(self, "gamma1_values", tuple(float(g) for g in self.gamma1_values))
        object.__setattr__(self, "gamma2_values", tuple(float(g) for g in self.gamma2_values))
        if not self.gamma1_values or not self.gamma2_values:
            raise ConfigError("feasibility grid must be non-empty")
        if self.samples < 1:
            raise ConfigError("feasibility samples must be >= 1")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    agents: tuple[AgentSpec, ...]
    dim: int = 2
    dt: float = 0.01
    t_end: float = 20.0
    seed: int = 0
    workspace: float = 6.0
    # safety
    r_s: float = 0.4
    r_crit: float = 1.3
    r_neigh: float = 1.6
    r_comm: float = 1.6
    eta: float = 0.9
    gamma1: float = 2.0
    gamma2: float = 2.0
    forced_margin: float = 0.1
    # constraints are built against r_s + enforce_margin: headroom so that
    # min-max relaxation creep during transient infeasibility stays above
    # the true safety radius
    enforce_margin: float = 0.0
    # limits
    a_max: float = 5.0
    v_max: float = 2.0
    # guidance
    nav_constant: float = 3.0
    epsilon_range: float = 1e-3
    capture_radius: float = 0.05
    damping_gain: float = 2.0
    restart_speed: float = 0.1
    restart_gain: float = 1.0
    # auction
    capacity: int = 4
    auction_enabled: bool = True
    oracle_max_pairs: int = 10  # per-tick greedy-vs-oracle comparison cutoff
    feasibility: FeasibilitySpec = field(default_factory=FeasibilitySpec)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ConfigError("dim must be 2 or 3")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.t_end < 0:
            raise ConfigError("t_end must be nonnegative")
        for name in ("r_s", "r_crit", "r_neigh", "r_comm", "a_max", "v_max",
                     "nav_constant", "capture_radius", "damping_gain", "forced_margin"):
            if getattr(self, name) <= 0 and name != "forced_margin":
                raise ConfigError(f"{name} must be strictly positive")
        if self.forced_margin < 0:
            raise ConfigError("forced_margin must be nonnegative")
        if self.enforce_margin < 0:
            raise ConfigError("enforce_margin must be nonnegative")
        if not (0 < self.r_crit <= self.r_neigh):
            raise ConfigError("requires 0 < r_crit <= r_neigh")
        if not (0 < self.eta < 1):
            raise ConfigError("eta must lie in (0, 1)")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ConfigError("gamma1/gamma2 must be strictly positive")
        if self.capacity < 0:
            raise ConfigError("capacity must be nonnegative")
        if not self.agents:
            raise ConfigError("scenario needs at least one agent")
        for spec in self.agents:
            for vec in (spec.p0, spec.v0, spec.target):
                if len(vec) != self.dim:
                    raise ConfigError(f"agent vector {vec} does not match dim={self.dim}")
                if not all(np.isfinite(vec)):
                    raise ConfigError(f"agent vector {vec} has non-finite entries")
        ps = np.array([s.p0 for s in self.agents])
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if np.linalg.norm(ps[i] - ps[j]) <= self.r_s:
                    raise ConfigError(
                        f"agents {i} and {j} start within the safety radius r_s"
                    )

    # parameter bundles consumed by the other modules

    def neighborhood_params(self) -> NeighborhoodParams:
        return NeighborhoodParams(
            r_neigh=self.r_neigh, r_crit=self.r_crit, eta=self.eta, r_comm=self.r_comm
        )

    def hocbf_params(self) -> HocbfParams:
        return HocbfParams(gamma1=self.gamma1, gamma2=self.gamma2,
                           r_s=self.r_s + self.enforce_margin)

    def png_params(self) -> PngParams:
        return PngParams(nav_constant=self.nav_constant, epsilon_range=self.epsilon_range)

    def initial_states(self) -> list[AgentState]:
        return [
            AgentState(
                id=k,
                p=np.array(spec.p0, dtype=float),
                v=np.array(spec.v0, dtype=float),
                target=np.array(spec.target, dtype=float),
                a_max=self.a_max,
                v_max=self.v_max,
            )
            for k, spec in enumerate(self.agents)
        ]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "scenario": {
                "dim": self.dim,
                "dt": self.dt,
                "t_end": self.t_end,
                "seed": self.seed,
                "workspace": self.workspace,
                "agents": [
                    {"p": list(s.p0), "v": list(s.v0), "target": list(s.target)}
                    for s in self.agents
                ],
            },
            "safety": {
                "r_s": self.r_s,
                "r_crit": self.r_crit,
                "r_neigh": self.r_neigh,
                "r_comm": self.r_comm,
                "eta": self.eta,
                "gamma1": self.gamma1,
                "gamma2": self.gamma2,
                "forced_margin": self.forced_margin,
                "enforce_margin": self.enforce_margin,
            },
            "limits": {"a_max": self.a_max, "v_max": self.v_max},
            "guidance": {
                "nav_constant": self.nav_constant,
                "epsilon_range": self.epsilon_range,
                "capture_radius": self.capture_radius,
                "damping_gain": self.damping_gain,
                "restart_speed": self.restart_speed,
                "restart_gain": self.restart_gain,
            },
            "auction": {
                "enabled": self.auction_enabled,
                "capacity": self.capacity,
                "oracle_max_pairs": self.oracle_max_pairs,
            },
            "feasibility": {
                "gamma1_values": list(self.feasibility.gamma1_values),
                "gamma2_values": list(self.feasibility.gamma2_values),
                "samples": self.feasibility.samples,
                "sample_radius": self.feasibility.sample_radius,
                "speed_max": self.feasibility.speed_max,
                "cooperative": self.feasibility.cooperative,
            },
        }


def _require_mapping(d, name):
    if not isinstance(d, dict):
        raise ConfigError(f"section '{name}' must be a mapping")
    return d


def _reject_unknown(d: dict, allowed: set[str], where: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _axis_values(spec, where: str) -> tuple[float, ...]:
    if isinstance(spec, dict):
        _reject_unknown(spec, {"start", "stop", "count"}, where)
        try:
            return tuple(np.linspace(float(spec["start"]), float(spec["stop"]),
                                     int(spec["count"])))
        except KeyError as e:
            raise ConfigError(f"{where} needs start/stop/count") from e
    if isinstance(spec, (list, tuple)):
        return tuple(float(x) for x in spec)
    raise ConfigError(f"{where} must be a list or start/stop/count mapping")


def config_from_dict(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version: expected {SCHEMA_VERSION}, found {version}"
        )
    _reject_unknown(
        raw,
        {"schema_version", "name", "scenario", "safety", "limits", "guidance",
         "auction", "feasibility"},
        "config root",
    )
    scn = _require_mapping(raw.get("scenario", {}), "scenario")
    _reject_unknown(
        scn,
        {"dim", "dt", "t_end", "seed", "workspace", "agents", "generator"},
        "scenario",
    )
    dim = int(scn.get("dim", 2))
    seed = int(scn.get("seed", 0))

    if "agents" in scn and "generator" in scn:
        raise ConfigError("give either scenario.agents or scenario.generator, not both")
    if "agents" in scn:
        agents = []
        for k, a in enumerate(scn["agents"]):
            _reject_unknown(_require_mapping(a, f"agents[{k}]"), {"p", "v", "target"},
                            f"agents[{k}]")
            try:
                agents.append(AgentSpec(
                    p0=tuple(float(x) for x in a["p"]),
                    v0=tuple(float(x) for x in a["v"]),
                    target=tuple(float(x) for x in a["target"]),
                ))
            except (KeyError, TypeError) as e:
                raise ConfigError(f"agents[{k}] needs p, v, target vectors") from e
        agents = tuple(agents)
    elif "generator" in scn:
        gen = _require_mapping(scn["generator"], "scenario.generator")
        agents = generate_agents(gen, dim=dim, seed=seed,
                                 workspace=float(scn.get("workspace", 6.0)))
    else:
        raise ConfigError("scenario needs 'agents' or 'generator'")

    safety = _require_mapping(raw.get("safety", {}), "safety")
    _reject_unknown(safety, {"r_s", "r_crit", "r_neigh", "r_comm", "eta", "gamma1",
                             "gamma2", "forced_margin", "enforce_margin"}, "safety")
    limits = _require_mapping(raw.get("limits", {}), "limits")
    _reject_unknown(limits, {"a_max", "v_max"}, "limits")
    guidance = _require_mapping(raw.get("guidance", {}), "guidance")
    _reject_unknown(guidance, {"nav_constant", "epsilon_range", "capture_radius",
                               "damping_gain", "restart_speed", "restart_gain"},
                    "guidance")
    auction = _require_mapping(raw.get("auction", {}), "auction")
    _reject_unknown(auction, {"enabled", "capacity", "oracle_max_pairs"}, "auction")

    feas_raw = raw.get("feasibility")
    if feas_raw is None:
        feas = FeasibilitySpec()
    else:
        feas_raw = _require_mapping(feas_raw, "feasibility")
        _reject_unknown(feas_raw, {"gamma1", "gamma2", "gamma1_values", "gamma2_values",
                                   "samples", "sample_radius", "speed_max",
                                   "cooperative"}, "feasibility")
        g1 = feas_raw.get("gamma1_values", feas_raw.get("gamma1"))
        g2 = feas_raw.get("gamma2_values", feas_raw.get("gamma2"))
        kwargs = {}
        if g1 is not None:
            kwargs["gamma1_values"] = _axis_values(g1, "feasibility.gamma1")
        if g2 is not None:
            kwargs["gamma2_values"] = _axis_values(g2, "feasibility.gamma2")
        if "samples" in feas_raw:
            kwargs["samples"] = int(feas_raw["samples"])
        if feas_raw.get("sample_radius") is not None:
            kwargs["sample_radius"] = float(feas_raw["sample_radius"])
        if feas_raw.get("speed_max") is not None:
            kwargs["speed_max"] = float(feas_raw["speed_max"])
        if "cooperative" in feas_raw:
            kwargs["cooperative"] = bool(feas_raw["cooperative"])
        feas = FeasibilitySpec(**kwargs)

    try:
        return ScenarioConfig(
            name=str(raw.get("name", "scenario")),
            agents=agents,
            dim=dim,
            dt=float(scn.get("dt", 0.01)),
            t_end=float(scn.get("t_end", 20.0)),
            seed=seed,
            workspace=float(scn.get("workspace", 6.0)),
            r_s=float(safety.get("r_s", 0.4)),
            r_crit=float(safety.get("r_crit", 1.3)),
            r_neigh=float(safety.get("r_neigh", 1.6)),
            r_comm=float(safety.get("r_comm", 1.6)),
            eta=float(safety.get("eta", 0.9)),
            gamma1=float(safety.get("gamma1", 2.0)),
            gamma2=float(safety.get("gamma2", 2.0)),
            forced_margin=float(safety.get("forced_margin", 0.1)),
            enforce_margin=float(safety.get("enforce_margin", 0.0)),
            a_max=float(limits.get("a_max", 5.0)),
            v_max=float(limits.get("v_max", 2.0)),
            nav_constant=float(guidance.get("nav_constant", 3.0)),
            epsilon_range=float(guidance.get("epsilon_range", 1e-3)),
            capture_radius=float(guidance.get("capture_radius", 0.05)),
            damping_gain=float(guidance.get("damping_gain", 2.0)),
            restart_speed=float(guidance.get("restart_speed", 0.1)),
            restart_gain=float(guidance.get("restart_gain", 1.0)),
            capacity=int(auction.get("capacity", 4)),
            auction_enabled=bool(auction.get("enabled", True)),
            oracle_max_pairs=int(auction.get("oracle_max_pairs", 10)),
            feasibility=feas,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def load_config(path) -> ScenarioConfig:
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse YAML: {e}") from e
    return config_from_dict(raw)


def save_config(config: ScenarioConfig, path) -> None:
    with open(path, "w") as f:
        yaml.safe_dump(config.to_dict(), f, sort_keys=False)


# ---------------------------------------------------------------------------
# agent placement generators

def generate_agents(gen: dict, dim: int, seed: int, workspace: float) -> tuple[AgentSpec, ...]:
    _reject_unknown(gen, {"kind", "n", "radius", "swap_offset", "speed",
                          "min_separation"}, "scenario.generator")
    kind = gen.get("kind")
    n = int(gen.get("n", 0))
    if n < 1:
        raise ConfigError("generator.n must be >= 1")
    speed = float(gen.get("speed", 1.0))
    if kind == "circle":
        radius = float(gen.get("radius", min(2.5, workspace / 2 - 0.4)))
        swap_offset = float(gen.get("swap_offset", 0.35))
        return circle_swap_agents(n, radius=radius, swap_offset=swap_offset,
                                  speed=speed, dim=dim, seed=seed)
    if kind == "random":
        min_sep = float(gen.get("min_separation", 1.0))
        return random_agents(n, workspace=workspace, min_separation=min_sep,
                             speed=speed, dim=dim, seed=seed)
    raise ConfigError(f"unknown generator kind: {kind!r}")


def circle_swap_agents(
    n: int,
    radius: float = 2.5,
    swap_offset: float = 0.35,
    speed: float = 1.0,
    dim: int = 2,
    seed: int = 0,
) -> tuple[AgentSpec, ...]:
    """Agents on a circle, each targeting (nearly) the antipodal point.

    All nominal paths cross near the center, which forces interactions.
    `swap_offset` rotates each target off the exact antipode (radians) so
    encounters are glancing rather than perfectly symmetric gridlock; a
    seeded angular jitter breaks any remaining symmetry.
    """
    rng = np.random.default_rng(seed)
    specs = []
    jitter = rng.uniform(-0.02, 0.02, size=n)
    for k in range(n):
        theta = 2 * np.pi * k / n + jitter[k]
        p = np.array([radius * np.cos(theta), radius * np.sin(theta)])
        phi = theta + np.pi + swap_offset
        t = np.array([radius * np.cos(phi), radius * np.sin(phi)])
        if dim == 3:
            p = np.append(p, 0.0)
            t = np.append(t, 0.0)
        los = t - p
        v = speed * los / np.linalg.norm(los)
        specs.append(AgentSpec(p0=tuple(p), v0=tuple(v), target=tuple(t)))
    return tuple(specs)


def random_agents(
    n: int,
    workspace: float = 6.0,
    min_separation: float = 1.0,
    speed: float = 1.0,
    dim: int = 2,
    seed: int = 0,
) -> tuple[AgentSpec, ...]:
    """Seeded rejection sampling of start/target positions in the workspace."""
    rng = np.random.default_rng(seed)
    half = workspace / 2 - 0.3
    ps: list[np.ndarray] = []
    ts: list[np.ndarray] = []

    def sample_point(existing, sep):
        for _ in range(10000):
            q = rng.uniform(-half, half, size=dim)
            if all(np.linalg.norm(q - e) > sep for e in existing):
                return q
        raise ConfigError("could not place agents with the requested separation")

    for _ in range(n):
        ps.append(sample_point(ps, min_separation))
    for k in range(n):
        # targets spread out and away from the agent's own start
        t = sample_point(ts, min_separation)
        for _ in range(100):
            if np.linalg.norm(t - ps[k]) > workspace / 4:
                break
            t = sample_point(ts, min_separation)
        ts.append(t)
    specs = []
    for p, t in zip(ps, ts):
        los = t - p
        v = speed * los / np.linalg.norm(los)
        specs.append(AgentSpec(p0=tuple(p), v0=tuple(v), target=tuple(t)))
    return tuple(specs)


# ---------------------------------------------------------------------------
# shipped scenarios: 0.4 m safety radius, 1.3 m activation radius, 1.6 m comm
# radius, 6x6 m workspace. Gains sit in the feasible region of the
# Monte Carlo map with gamma1 large enough that the approach-speed envelope
# psi1 >= 0 holds at activation for these closing speeds; the enforcement
# margin keeps relaxation creep during transient multi-constraint
# infeasibility above the true safety radius.

def shipped_scenario(name: str, auction_enabled: bool = True) -> ScenarioConfig:
    shared = dict(
        gamma1=5.0,
        gamma2=3.0,
        eta=0.6,
        forced_margin=0.1,
        enforce_margin=0.1,
        damping_gain=4.0,
        auction_enabled=auction_enabled,
    )
    if name == "three":
        agents = circle_swap_agents(3, radius=2.4, swap_offset=0.35, speed=1.2, seed=3)
        extra = dict(t_end=20.0, seed=3, v_max=2.0)
    elif name == "eight":
        agents = circle_swap_agents(8, radius=2.5, swap_offset=0.45, speed=1.2, seed=8)
        extra = dict(t_end=25.0, seed=8, v_max=2.0)
    elif name == "twenty":
        agents = random_agents(20, workspace=6.0, min_separation=1.05, speed=0.6, seed=21)
        extra = dict(t_end=40.0, seed=21, v_max=1.0)
    else:
        raise ConfigError(f"unknown shipped scenario: {name!r}")
    return ScenarioConfig(name=f"{name}-agents", agents=agents, **shared, **extra)
