"""Evolutionary N-player trust game on networks: simulation and analysis."""

from trustnet.game import GameParams, Strategy, all_payoffs, global_net_wealth, local_counts, payoff
from trustnet.topology import Network, build_from_edges, build_lattice, build_scale_free
from trustnet.rules import UpdateRuleConfig
from trustnet.engine import RunRecord, SimConfig, run, run_ensemble

__version__ = "0.1.0"

__all__ = [
    "GameParams",
    "Strategy",
    "Network",
    "RunRecord",
    "SimConfig",
    "UpdateRuleConfig",
    "all_payoffs",
    "build_from_edges",
    "build_lattice",
    "build_scale_free",
    "global_net_wealth",
    "local_counts",
    "payoff",
    "run",
    "run_ensemble",
]
