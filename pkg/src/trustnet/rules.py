"""The four imitation rules mapping previous-step payoffs to next strategies.

Each rule exists twice: a scalar per-agent function (the reference contract,
convenient for unit tests and Monte Carlo checks) and a vectorized kernel the
engine uses for whole-population synchronous steps. Both consume uniform
variates in the same fixed slot order, so the two paths produce identical
states when fed the same variates:

    ui      slot 1 = tie-break among co-maximal neighbors
    ui_vm   slot 0 = voter-vs-UI mixing, slot 1 = choice (neighbor pick or tie)
    moran   slot 0 = inverse-CDF position over {self} + neighbors
    prop    slot 0 = neighbor pick, slot 1 = acceptance threshold

UI reads slot 1 (not 0) so that UI-VM with q = 0 reproduces UI trajectories
exactly under a shared seed.

Scalar functions draw lazily via rng.random(), so e.g. UI with a unique best
neighbor consumes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from trustnet.game import GameParams, Strategy
from trustnet.topology import Network

UI = "ui"
UI_VM = "ui_vm"
MORAN = "moran"
PROP = "prop"
RULES = (UI, UI_VM, MORAN, PROP)


@dataclass(frozen=True)
class UpdateRuleConfig:
    """Rule token plus the voter-model mixing probability (UI-VM only)."""

    rule: str = UI
    q: float = 0.1

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}, expected one of {RULES}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")


def phi(params: GameParams, k_i: int, k_j: int) -> float:
    """Maximum payoff distance between two interacting players.

    max_w = (1 + r_UT) * R_T * k realizable by an untrustworthy trustee whose
    whole group invests; min_w = -1 for an investor among untrustworthy
    trustees. The larger of the two degrees bounds both players' payoffs.
    """
    return (1.0 + params.r_ut) * params.r_t * max(k_i, k_j) + 1.0


# --- scalar per-agent reference implementations ---


def ui_update(i: int, state: np.ndarray, w: np.ndarray, net: Network, rng) -> int:
    """Copy the best-performing neighbor, only if strictly better than self.

    Ties among co-maximal neighbors break uniformly at random; no randomness
    is consumed otherwise.
    """
    nbrs = net.neighbors(i)
    wn = w[nbrs]
    best = wn.max()
    if best <= w[i]:
        return int(state[i])
    tied = nbrs[wn == best]
    if len(tied) == 1:
        return int(state[tied[0]])
    return int(state[tied[int(rng.random() * len(tied))]])


def ui_vm_update(i: int, state: np.ndarray, w: np.ndarray, net: Network, rng, q: float) -> int:
    """With probability q copy a uniformly random neighbor, else behave as UI."""
    if rng.random() < q:
        nbrs = net.neighbors(i)
        return int(state[nbrs[int(rng.random() * len(nbrs))]])
    return ui_update(i, state, w, net, rng)


def moran_update(i: int, state: np.ndarray, w: np.ndarray, net: Network, rng) -> int:
    """Sample one of {self} + neighbors proportionally to shifted fitness w+1.

    The +1 shift makes weights non-negative (min payoff is -1); an all-zero
    weight vector degrades to the uniform distribution. Worse-performing
    neighbors keep positive weight, so mistakes happen by construction.
    """
    nbrs = net.neighbors(i)
    weights = np.concatenate(([w[i]], w[nbrs])) + 1.0
    total = weights.sum()
    if total == 0.0:
        weights = np.ones_like(weights)
        total = weights.sum()
    probs = weights / total
    assert abs(probs.sum() - 1.0) < 1e-12
    target = rng.random() * total
    acc = 0.0
    for k, wk in enumerate(weights):
        acc += wk
        if acc > target:
            return int(state[i]) if k == 0 else int(state[nbrs[k - 1]])
    return int(state[nbrs[-1]])  # guards against rounding in the running sum


def prop_update(
    i: int, state: np.ndarray, w: np.ndarray, net: Network, rng, params: GameParams
) -> int:
    """Pairwise proportional imitation: never copies a worse-paid neighbor.

    One neighbor j is picked uniformly; if w_j > w_i the switch happens with
    probability (w_j - w_i) / phi(i, j), else the strategy is kept.
    """
    nbrs = net.neighbors(i)
    j = int(nbrs[int(rng.random() * len(nbrs))])
    if w[j] <= w[i]:
        return int(state[i])
    p = (w[j] - w[i]) / phi(params, net.degree(i), net.degree(j))
    if rng.random() < p:
        return int(state[j])
    return int(state[i])


# --- vectorized whole-population kernels (synchronous step) ---


def _segment_pick(net: Network, hit: np.ndarray, pick_rank: np.ndarray) -> np.ndarray:
    """Per node, the edge index of the pick_rank-th True within its segment.

    hit is a boolean over edges (CSR order); pick_rank[i] must be smaller than
    the number of hits in segment i. Nodes with no hit get -1.
    """
    src = net.edge_src
    csum = np.cumsum(hit)
    excl = csum - hit
    seg_start = excl[net.indptr[:-1]]
    rank = excl - seg_start[src]
    match = hit & (rank == pick_rank[src])
    out = np.full(net.node_count, -1, dtype=np.int64)
    edge_ids = np.flatnonzero(match)
    out[src[edge_ids]] = edge_ids
    return out


def ui_step(net: Network, state: np.ndarray, w: np.ndarray, u_tie: np.ndarray) -> np.ndarray:
    wn = w[net.indices]
    best = np.maximum.reduceat(wn, net.indptr[:-1])
    src = net.edge_src
    tied = wn == best[src]
    n_tied = np.add.reduceat(tied, net.indptr[:-1])
    pick = np.minimum((u_tie * n_tied).astype(np.int64), n_tied - 1)
    chosen_edge = _segment_pick(net, tied, pick)
    adopted = state[net.indices[chosen_edge]]
    return np.where(best > w, adopted, state)


def voter_step(net: Network, state: np.ndarray, u_pick: np.ndarray) -> np.ndarray:
    deg = net.degrees
    j = net.indptr[:-1] + np.minimum((u_pick * deg).astype(np.int64), deg - 1)
    return state[net.indices[j]]


def ui_vm_step(
    net: Network,
    state: np.ndarray,
    w: np.ndarray,
    u_mix: np.ndarray,
    u_choice: np.ndarray,
    q: float,
) -> np.ndarray:
    return np.where(
        u_mix < q,
        voter_step(net, state, u_choice),
        ui_step(net, state, w, u_choice),
    )


def moran_step(net: Network, state: np.ndarray, w: np.ndarray, u: np.ndarray) -> np.ndarray:
    src = net.edge_src
    self_w = w + 1.0
    nb_w = w[net.indices] + 1.0
    totals = self_w + np.add.reduceat(nb_w, net.indptr[:-1])
    dead = totals == 0.0
    if dead.any():
        self_w = np.where(dead, 1.0, self_w)
        nb_w = np.where(dead[src], 1.0, nb_w)
        totals = np.where(dead, net.degrees + 1.0, totals)
    target = u * totals
    keep = target < self_w
    # Inverse CDF over neighbors for the rest: first edge whose running sum
    # within its segment exceeds target - self weight.
    csum = np.cumsum(nb_w)
    seg_start = (csum - nb_w)[net.indptr[:-1]]
    running = csum - seg_start[src]
    over = running > (target - self_w)[src]
    chosen_edge = _segment_pick(net, over, np.zeros(net.node_count, dtype=np.int64))
    chosen_edge = np.where(chosen_edge < 0, net.indptr[1:] - 1, chosen_edge)
    adopted = state[net.indices[chosen_edge]]
    return np.where(keep, state, adopted)


def prop_step(
    net: Network,
    state: np.ndarray,
    w: np.ndarray,
    u_pick: np.ndarray,
    u_accept: np.ndarray,
    params: GameParams,
) -> np.ndarray:
    deg = net.degrees
    edge = net.indptr[:-1] + np.minimum((u_pick * deg).astype(np.int64), deg - 1)
    j = net.indices[edge]
    max_k = np.maximum(deg, deg[j]).astype(np.float64)
    norm = (1.0 + params.r_ut) * params.r_t * max_k + 1.0
    p = (w[j] - w) / norm
    adopt = (w[j] > w) & (u_accept < p)
    return np.where(adopt, state[j], state)
