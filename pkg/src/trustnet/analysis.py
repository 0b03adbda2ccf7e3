"""Measurements over recorded runs: steady-state wealth, mass-scaling fits,
spatial correlation G(l), periodograms, and lagged Pearson correlations.

All functions are pure over recorded data. Strategy codes are fixed
project-wide as I -> 1, T -> 2, U -> 3; G(l) magnitudes depend on that
labeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from trustnet.engine import RunRecord
from trustnet.game import Strategy
from trustnet.topology import Network, _displacements_at_distance, _require_lattice, nodes_at_distance


@dataclass(frozen=True)
class MassScalingCurve:
    """Mean target-strategy count M inside growing L x L windows."""

    box_sides: tuple[int, ...]
    mass: tuple[float, ...]

    def points(self) -> list[tuple[int, float]]:
        return list(zip(self.box_sides, self.mass))


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray  # cycles per step, 0 .. 0.5
    power: np.ndarray


@dataclass(frozen=True)
class LagCorrelation:
    lags: np.ndarray
    rho: np.ndarray  # NaN marks an undefined (zero-variance) lag


def steady_state_wealth(record: RunRecord, window_frac: float = 0.25) -> float:
    """Mean W over the final ceil(window_frac * steps) steps (t = 0 excluded)."""
    if not 0.0 < window_frac <= 1.0:
        raise ValueError(f"window_frac must lie in (0, 1], got {window_frac}")
    steps = record.steps
    n = int(np.ceil(window_frac * steps))
    if n < 1:
        raise ValueError("empty averaging window: record holds no steps past t=0")
    return float(np.mean(record.wealth[1:][-n:]))


def _as_grid(snapshot: np.ndarray) -> np.ndarray:
    snapshot = np.asarray(snapshot)
    if snapshot.ndim == 1:
        side = int(round(np.sqrt(snapshot.size)))
        if side * side != snapshot.size:
            raise ValueError(f"snapshot of length {snapshot.size} is not square")
        return snapshot.reshape(side, side)
    return snapshot


def mass_scaling(
    snapshot: np.ndarray, target: Strategy, box_sides: list[int]
) -> MassScalingCurve:
    """Occupancy mass around occupied sites, for the fractal-dimension fit.

    For each box side L, an L x L toroidal window is anchored (top-left) at
    every cell holding the target strategy, and M(L) is the mean count of
    target cells inside the window. Averaging over all occupied anchors makes
    the curve invariant under cyclic shifts of the snapshot.
    """
    grid = _as_grid(snapshot)
    side = grid.shape[0]
    occ = (grid == int(target)).astype(np.float64)
    total = occ.sum()
    mass = []
    # window[r, c] = occupied count in the L x L window anchored at (r, c).
    for length in box_sides:
        if not 1 <= length <= side:
            raise ValueError(f"box side {length} outside [1, {side}]")
        if total == 0:
            mass.append(0.0)
            continue
        rows = sum(np.roll(occ, -k, axis=0) for k in range(length))
        window = sum(np.roll(rows, -k, axis=1) for k in range(length))
        mass.append(float((window * occ).sum() / total))
    return MassScalingCurve(tuple(box_sides), tuple(mass))


def fit_power_exponent(curve: list[tuple[float, float]]) -> float:
    """OLS slope of ln y on ln x; points with x <= 0 or y <= 0 are dropped."""
    pts = [(x, y) for x, y in curve if x > 0 and y > 0]
    if len(pts) < 2:
        raise ValueError(f"need >= 2 positive points for a log-log fit, got {len(pts)}")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def spatial_correlation(snapshot: np.ndarray, l: int, net: Network) -> float:
    """G(l): mean squared strategy-code difference over all pairs at distance l."""
    side = _require_lattice(net)
    grid = _as_grid(snapshot).astype(np.int64)
    if grid.shape[0] != side:
        raise ValueError(f"snapshot side {grid.shape[0]} does not match lattice side {side}")
    disp = _displacements_at_distance(side, l)
    if not disp:
        raise ValueError(f"no pairs exist at distance {l} on a {side}x{side} torus")
    # Each unordered pair appears exactly twice across the ordered shifts.
    acc = 0
    for dr, dc in disp:
        diff = grid - np.roll(np.roll(grid, -dr, axis=0), -dc, axis=1)
        acc += int((diff * diff).sum())
    return acc / (len(disp) * side * side)


def periodogram(series: np.ndarray) -> Spectrum:
    """Squared-magnitude DFT of the mean-removed series, no tapering.

    Frequencies are k/N cycles per step for k = 0 .. floor(N/2); tapering is
    deliberately absent so a period-2 oscillation shows as a clean bin at 0.5.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise ValueError(f"series must have length >= 2, got {x.size}")
    x = x - x.mean()
    spec = np.fft.rfft(x)
    power = np.abs(spec) ** 2
    freqs = np.arange(power.size) / x.size
    return Spectrum(frequencies=freqs, power=power)


def spectrum_loglog_slope(spec: Spectrum, f_min: float) -> tuple[float, float]:
    """OLS slope and R^2 of log power vs log frequency over [f_min, 0.5)."""
    sel = (spec.frequencies >= f_min) & (spec.frequencies < 0.5) & (spec.power > 0)
    if sel.sum() < 8:
        raise ValueError(
            f"need >= 8 positive power bins above f_min={f_min}, got {int(sel.sum())}"
        )
    lx = np.log(spec.frequencies[sel])
    ly = np.log(spec.power[sel])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r_squared = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r_squared


def lagged_pearson(series_a: np.ndarray, series_b: np.ndarray, max_lag: int) -> LagCorrelation:
    """Pearson correlation of (a_t, b_{t+lag}) for lag = 0 .. max_lag.

    Means and variances are taken on the overlapping window of each lag. A
    zero-variance window yields NaN for that lag (undefined, not zero).
    """
    a = np.asarray(series_a, dtype=np.float64)
    b = np.asarray(series_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"series lengths differ: {a.size} vs {b.size}")
    if a.size < max_lag + 2:
        raise ValueError(f"series length {a.size} too short for max_lag={max_lag}")
    rho = np.empty(max_lag + 1)
    for lag in range(max_lag + 1):
        x = a[: a.size - lag]
        y = b[lag:]
        xd = x - x.mean()
        yd = y - y.mean()
        denom = np.sqrt((xd**2).sum() * (yd**2).sum())
        rho[lag] = (xd * yd).sum() / denom if denom > 0 else np.nan
    return LagCorrelation(lags=np.arange(max_lag + 1), rho=rho)


def select_probe_nodes(net: Network, focal: int, distances: list[int], rng) -> np.ndarray:
    """One uniformly random node at each requested torus distance from focal."""
    _require_lattice(net)
    picks = []
    for d in distances:
        candidates = nodes_at_distance(net, focal, d)
        if candidates.size == 0:
            raise ValueError(f"no node at distance {d} from {focal} on this lattice")
        picks.append(int(candidates[int(rng.integers(candidates.size))]))
    return np.array(picks, dtype=np.int64)
