"""Initial-condition x rule x topology x r_UT sensitivity grid (wealth heatmaps)."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from trustnet.analysis import steady_state_wealth
from trustnet.engine import SimConfig, run_ensemble
from trustnet.streams import derive_seed


@dataclass(frozen=True)
class SweepRow:
    """Steady-state wealth statistics for one grid cell."""

    f_i: float
    f_t: float
    f_u: float
    rule: str
    topology: str
    r_ut: float
    mean_w: float
    std_w: float
    mean_k_i: float
    mean_k_t: float
    mean_k_u: float


def initial_condition_grid(step: float) -> list[tuple[float, float, float]]:
    """All fraction triples on the 2-simplex with spacing `step`.

    step must divide 1 evenly; triples are emitted in lexicographic order of
    (f_I, f_T).
    """
    if not 0.0 < step <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {step}")
    n = 1.0 / step
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"1/step must be an integer, got step={step}")
    n = int(round(n))
    grid = []
    for i in range(n + 1):
        for t in range(n + 1 - i):
            u = n - i - t
            grid.append((i / n, t / n, u / n))
    return grid


def sweep_cells(
    grid: Iterable[tuple[float, float, float]],
    rules: Iterable[str],
    topologies: Iterable[str],
    r_ut_values: Iterable[float],
) -> list[tuple[tuple[float, float, float], str, str, float]]:
    """Cartesian cell list in the canonical (fractions, rule, topology, r_UT) order."""
    cells = [
        (fracs, rule, topo, r_ut)
        for fracs in grid
        for rule in rules
        for topo in topologies
        for r_ut in r_ut_values
    ]
    return sorted(cells)


def run_cell(
    base: SimConfig,
    fracs: tuple[float, float, float],
    rule: str,
    topology: str,
    r_ut: float,
    workers: int = 1,
) -> SweepRow:
    """One grid cell: an ensemble with a content-derived seed, then the
    window-averaged wealth statistics."""
    cell_seed = derive_seed(base.master_seed, "cell", topology, rule, r_ut, *fracs)
    config = replace(
        base,
        f_i=fracs[0],
        f_t=fracs[1],
        f_u=fracs[2],
        rule=rule,
        topology=topology,
        r_ut=r_ut,
        master_seed=cell_seed,
        snapshot_every=None,
        record_nodes=None,
        probe_distances=None,
    )
    records = run_ensemble(config, workers=workers)
    wealth = np.array([steady_state_wealth(rec, config.window) for rec in records])
    finals = np.array([rec.counts[-1] for rec in records], dtype=np.float64)
    return SweepRow(
        f_i=fracs[0],
        f_t=fracs[1],
        f_u=fracs[2],
        rule=rule,
        topology=topology,
        r_ut=r_ut,
        mean_w=float(wealth.mean()),
        std_w=float(wealth.std()),
        mean_k_i=float(finals[:, 0].mean()),
        mean_k_t=float(finals[:, 1].mean()),
        mean_k_u=float(finals[:, 2].mean()),
    )


def heatmap_sweep(
    base: SimConfig,
    grid: Iterable[tuple[float, float, float]],
    rules: Iterable[str],
    topologies: Iterable[str],
    r_ut_values: Iterable[float],
    workers: int = 1,
) -> list[SweepRow]:
    """One SweepRow per Cartesian cell, in canonical order.

    Cell seeds are derived from the cell key, so a failed cell can be rerun in
    isolation and results never depend on execution order.
    """
    rules = list(rules)
    topologies = list(topologies)
    r_ut_values = list(r_ut_values)
    if not (rules and topologies and r_ut_values):
        raise ValueError("rules, topologies, and r_ut_values must be non-empty")
    rows = []
    for fracs, rule, topo, r_ut in sweep_cells(grid, rules, topologies, r_ut_values):
        try:
            rows.append(run_cell(base, fracs, rule, topo, r_ut, workers=workers))
        except Exception as exc:
            raise RuntimeError(
                f"sweep cell failed: fractions={fracs}, rule={rule}, "
                f"topology={topo}, r_UT={r_ut}"
            ) from exc
    return rows
