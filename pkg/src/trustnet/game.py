"""Game constants and per-step payoffs of the three-strategy trust game.

Strategies: investors (I) put in one unit per step, split equally among the
trustees of their group; trustworthy trustees (T) multiply their share by R_T
and return it, earning the same amount; untrustworthy trustees (U) keep their
share multiplied by R_U = (1 + r_UT) * R_T and return nothing. All counts are
over the closed neighborhood (focal agent included). An agent whose group has
no trustee earns exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from trustnet.topology import Network


class Strategy(IntEnum):
    """The three plays; the numeric codes are fixed project-wide."""

    I = 1
    T = 2
    U = 3


STRATEGY_NAMES = {Strategy.I: "I", Strategy.T: "T", Strategy.U: "U"}


@dataclass(frozen=True)
class GameParams:
    """Payoff constants; r_ut in (0, 1) enforces 1 < R_T < R_U < 2*R_T."""

    r_t: float = 6.0
    r_ut: float = 0.33

    def __post_init__(self):
        if not self.r_t > 1.0:
            raise ValueError(f"R_T must exceed 1, got {self.r_t}")
        if not 0.0 < self.r_ut < 1.0:
            raise ValueError(f"r_UT must lie in (0, 1), got {self.r_ut}")

    @property
    def r_u(self) -> float:
        return self.r_t * (1.0 + self.r_ut)


@dataclass(frozen=True)
class NeighborhoodCounts:
    """Strategy counts over {focal} union neighbors (focal included)."""

    k_i_star: int
    k_t_star: int
    k_u_star: int

    @property
    def k_tu_star(self) -> int:
        return self.k_t_star + self.k_u_star

    @property
    def total(self) -> int:
        return self.k_i_star + self.k_t_star + self.k_u_star


def local_counts(net: Network, state: np.ndarray, i: int) -> NeighborhoodCounts:
    """Counts over the closed neighborhood of i; total is always degree+1."""
    group = state[net.neighbors(i)]
    s = int(state[i])
    return NeighborhoodCounts(
        k_i_star=int(np.count_nonzero(group == Strategy.I)) + (s == Strategy.I),
        k_t_star=int(np.count_nonzero(group == Strategy.T)) + (s == Strategy.T),
        k_u_star=int(np.count_nonzero(group == Strategy.U)) + (s == Strategy.U),
    )


def payoff(params: GameParams, counts: NeighborhoodCounts, s: Strategy) -> float:
    """Net wealth of a focal agent playing s amid the given closed counts.

    Zero whenever the group has no trustee (k_TU* = 0); the division is never
    reached in that case. Operation order is fixed so vectorized evaluation
    reproduces these values bit for bit.
    """
    k_tu = counts.k_tu_star
    if k_tu == 0:
        return 0.0
    if s == Strategy.I:
        return params.r_t * counts.k_t_star / k_tu - 1.0
    if s == Strategy.T:
        return params.r_t * counts.k_i_star / k_tu
    return (1.0 + params.r_ut) * params.r_t * counts.k_i_star / k_tu


def neighbor_strategy_counts(net: Network, state: np.ndarray) -> np.ndarray:
    """(pop, 3) open-neighborhood counts of codes 1..3 for every node."""
    flat = net.edge_src * 4 + state[net.indices]
    return np.bincount(flat, minlength=net.node_count * 4).reshape(-1, 4)[:, 1:4]


def closed_counts(net: Network, state: np.ndarray) -> np.ndarray:
    """(pop, 3) closed-neighborhood counts (focal agent included)."""
    counts = neighbor_strategy_counts(net, state)
    counts[np.arange(net.node_count), state - 1] += 1
    return counts


def all_payoffs(net: Network, state: np.ndarray, params: GameParams) -> np.ndarray:
    """Per-agent net wealth for one synchronous round, from one state snapshot."""
    counts = closed_counts(net, state)
    k_i = counts[:, 0].astype(np.float64)
    k_t = counts[:, 1].astype(np.float64)
    k_tu = (counts[:, 1] + counts[:, 2]).astype(np.float64)
    nz = k_tu > 0
    w_i = np.zeros(net.node_count)
    w_t = np.zeros(net.node_count)
    w_u = np.zeros(net.node_count)
    np.divide(params.r_t * k_t, k_tu, out=w_i, where=nz)
    w_i[nz] -= 1.0
    np.divide(params.r_t * k_i, k_tu, out=w_t, where=nz)
    np.divide((1.0 + params.r_ut) * params.r_t * k_i, k_tu, out=w_u, where=nz)
    return np.where(state == Strategy.I, w_i, np.where(state == Strategy.T, w_t, w_u))


def global_net_wealth(w: np.ndarray) -> float:
    """W: the population's summed per-step payoffs.

    Uses the correctly-rounded sum, so W is exactly invariant under any
    permutation of the wealth vector.
    """
    return math.fsum(w)
