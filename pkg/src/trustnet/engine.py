"""Synchronous evolutionary dynamics: seeding, stepping, recording, ensembles.

Every step computes all payoffs from the frozen previous state, then all
agents revise simultaneously. Agent randomness is addressed by
(master_seed, run_index, step, agent, slot) through trustnet.streams, so runs
are bit-reproducible at any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from trustnet import rules
from trustnet.game import GameParams, Strategy, all_payoffs, global_net_wealth
from trustnet.rules import UpdateRuleConfig
from trustnet.streams import Substreams
from trustnet.topology import LATTICE, SCALE_FREE, Network, build_lattice, build_scale_free

DEFAULT_STEPS = 5000
DEFAULT_RUNS = 100


@dataclass(frozen=True)
class SimConfig:
    """One simulation setting; validate() enforces the CLI-facing constraints."""

    topology: str = LATTICE
    side: int = 32
    n: int = 1024
    m: int = 2
    r_t: float = 6.0
    r_ut: float = 0.33
    rule: str = rules.UI
    q: float = 0.1
    f_i: float = 0.30
    f_t: float = 0.25
    f_u: float = 0.45
    steps: int = DEFAULT_STEPS
    runs: int = DEFAULT_RUNS
    master_seed: int = 0
    snapshot_every: int | None = None
    record_nodes: tuple[int, ...] | None = None
    probe_distances: tuple[int, ...] | None = None
    window: float = 0.25

    @property
    def pop(self) -> int:
        return self.side * self.side if self.topology == LATTICE else self.n

    @property
    def fractions(self) -> tuple[float, float, float]:
        return (self.f_i, self.f_t, self.f_u)

    @property
    def game_params(self) -> GameParams:
        return GameParams(r_t=self.r_t, r_ut=self.r_ut)

    @property
    def rule_config(self) -> UpdateRuleConfig:
        return UpdateRuleConfig(rule=self.rule, q=self.q)

    def validate(self) -> None:
        if self.topology not in (LATTICE, SCALE_FREE):
            raise ValueError(f"topology must be 'lattice' or 'sf', got {self.topology!r}")
        if self.topology == LATTICE and self.side < 2:
            raise ValueError(f"side must be >= 2, got {self.side}")
        if self.topology == SCALE_FREE and self.n <= self.m:
            raise ValueError(f"n must exceed m, got n={self.n}, m={self.m}")
        self.game_params
        self.rule_config
        for key, f in zip(("f_i", "f_t", "f_u"), self.fractions):
            if f < 0:
                raise ValueError(f"{key} must be non-negative, got {f}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError(f"initial fractions must sum to 1, got {self.fractions}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")
        if not 0.0 < self.window <= 1.0:
            raise ValueError(f"window must lie in (0, 1], got {self.window}")


@dataclass
class RunRecord:
    """Everything recorded from one seeded realization (t = 0 included)."""

    run_index: int
    seed: int
    counts: np.ndarray  # (steps+1, 3) population totals of I, T, U
    wealth: np.ndarray  # (steps+1,) global net wealth W per step
    snapshots: list[tuple[int, np.ndarray]] = field(default_factory=list)
    node_ids: np.ndarray | None = None
    node_series: np.ndarray | None = None  # (steps+1, len(node_ids)) codes

    @property
    def steps(self) -> int:
        return len(self.wealth) - 1


def init_population(pop: int, fractions: tuple[float, float, float], rng) -> np.ndarray:
    """Exact per-strategy counts (largest-remainder rounding), placed by a
    uniform random permutation."""
    if any(f < 0 for f in fractions):
        raise ValueError(f"fractions must be non-negative, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    raw = [f * pop for f in fractions]
    counts = [math.floor(x) for x in raw]
    remainders = [x - c for x, c in zip(raw, counts)]
    for _ in range(pop - sum(counts)):
        k = max(range(3), key=lambda idx: (remainders[idx], -idx))
        counts[k] += 1
        remainders[k] = -1.0
    state = np.repeat(
        np.array([Strategy.I, Strategy.T, Strategy.U], dtype=np.int64), counts
    )
    return state[rng.permutation(pop)]


def step(
    net: Network,
    state: np.ndarray,
    params: GameParams,
    rule: UpdateRuleConfig,
    streams: Substreams,
    t: int,
    w: np.ndarray | None = None,
) -> np.ndarray:
    """One synchronous update into step t, from payoffs of the frozen state.

    w may carry precomputed all_payoffs(net, state, params); it is never
    mutated. Randomness comes from the (run, t) substreams, slot layout per
    trustnet.rules.
    """
    if w is None:
        w = all_payoffs(net, state, params)
    pop = net.node_count
    if rule.rule == rules.UI:
        return rules.ui_step(net, state, w, streams.uniforms(t, 1, pop))
    if rule.rule == rules.UI_VM:
        return rules.ui_vm_step(
            net, state, w, streams.uniforms(t, 0, pop), streams.uniforms(t, 1, pop), rule.q
        )
    if rule.rule == rules.MORAN:
        return rules.moran_step(net, state, w, streams.uniforms(t, 0, pop))
    return rules.prop_step(
        net, state, w, streams.uniforms(t, 0, pop), streams.uniforms(t, 1, pop), params
    )


def build_topology(config: SimConfig, streams: Substreams) -> Network:
    """Lattices are fixed; scale-free graphs are regenerated per realization."""
    if config.topology == LATTICE:
        return build_lattice(config.side)
    return build_scale_free(config.n, config.m, streams.generator("topology"))


def run(config: SimConfig, run_index: int = 0) -> RunRecord:
    """One seeded realization; every recorded series includes t = 0."""
    streams = Substreams(config.master_seed, run_index)
    net = build_topology(config, streams)
    params = config.game_params
    rule = config.rule_config
    state = init_population(net.node_count, config.fractions, streams.generator("init"))

    node_ids = _nodes_to_record(config, net, streams)
    steps = config.steps
    counts = np.empty((steps + 1, 3), dtype=np.int64)
    wealth = np.empty(steps + 1)
    snapshots: list[tuple[int, np.ndarray]] = []
    node_series = (
        np.empty((steps + 1, len(node_ids)), dtype=np.int64) if node_ids is not None else None
    )

    w = all_payoffs(net, state, params)
    for t in range(steps + 1):
        counts[t] = np.bincount(state, minlength=4)[1:4]
        wealth[t] = global_net_wealth(w)
        if config.snapshot_every and t % config.snapshot_every == 0:
            snapshots.append((t, state.copy()))
        if node_series is not None:
            node_series[t] = state[node_ids]
        if t == steps:
            break
        state = step(net, state, params, rule, streams, t + 1, w=w)
        w = all_payoffs(net, state, params)

    return RunRecord(
        run_index=run_index,
        seed=config.master_seed,
        counts=counts,
        wealth=wealth,
        snapshots=snapshots,
        node_ids=node_ids,
        node_series=node_series,
    )


def _nodes_to_record(config: SimConfig, net: Network, streams: Substreams):
    from trustnet.analysis import select_probe_nodes  # cycle-free at call time

    if config.record_nodes is not None:
        return np.asarray(config.record_nodes, dtype=np.int64)
    if config.probe_distances:
        rng = streams.generator("probes")
        focal = int(rng.integers(net.node_count))
        probes = select_probe_nodes(net, focal, list(config.probe_distances), rng)
        return np.concatenate(([focal], probes))
    return None


def run_ensemble(config: SimConfig, workers: int = 1) -> list[RunRecord]:
    """`runs` independent realizations; output is identical at any worker count."""
    if config.runs < 1:
        raise ValueError(f"runs must be >= 1, got {config.runs}")
    if workers <= 1:
        return [run(config, r) for r in range(config.runs)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: run(config, r), range(config.runs)))
