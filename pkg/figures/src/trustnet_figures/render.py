"""Render paper-style figures from trustnet CSV artifacts.

Inputs are the documented CSV schemas only; nothing here imports the
simulator. Strategy colors are fixed: I (code 1) blue, T (code 2) green,
U (code 3) red.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap

STRATEGY_COLORS = {1: "#0000ff", 2: "#008000", 3: "#ff0000"}
STRATEGY_NAMES = {1: "I", 2: "T", 3: "U"}
KINDS = ("heatmap", "snapshot", "massfit", "gl", "spectrum", "lagcorr")


@dataclass
class FigureSpec:
    kind: str
    inputs: list[Path]
    output: Path
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")


def read_table(path: Path, required: list[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise ValueError(f"{path}: missing column {col!r} (header: {header})")
        return list(reader)


def _pick_input(spec: FigureSpec, required: list[str]) -> tuple[Path, list[dict]]:
    """First input file carrying all required columns."""
    errors = []
    for path in spec.inputs:
        try:
            return path, read_table(path, required)
        except ValueError as exc:
            errors.append(str(exc))
    raise ValueError("; ".join(errors))


def render(spec: FigureSpec) -> Path:
    fig = _RENDERERS[spec.kind](spec)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output)
    plt.close(fig)
    return spec.output


def render_heatmap(spec: FigureSpec):
    _, rows = _pick_input(spec, ["f_I", "f_T", "f_U", "rule", "topology", "r_UT", "mean_W"])
    for key in ("rule", "topology", "r_UT"):
        want = spec.options.get(key)
        if want is not None:
            rows = [r for r in rows if r[key] == str(want)]
    if not rows:
        raise ValueError("no sweep rows left after filtering")
    f_i = sorted({float(r["f_I"]) for r in rows})
    f_t = sorted({float(r["f_T"]) for r in rows})
    xi = {v: k for k, v in enumerate(f_i)}
    yi = {v: k for k, v in enumerate(f_t)}
    grid = np.full((len(f_t), len(f_i)), np.nan)
    for r in rows:
        y, x = yi[float(r["f_T"])], xi[float(r["f_I"])]
        if not np.isnan(grid[y, x]):
            raise ValueError(
                "several sweep rows map to one (f_I, f_T) cell; "
                "filter with rule/topology/r_UT options"
            )
        grid[y, x] = float(r["mean_W"])
    fig, ax = plt.subplots(figsize=(5, 4.2))
    mesh = ax.imshow(
        np.ma.masked_invalid(grid),
        origin="lower",
        aspect="auto",
        extent=(min(f_i), max(f_i), min(f_t), max(f_t)) if len(f_i) > 1 else None,
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label="mean W")
    ax.set_xlabel("initial investor fraction")
    ax.set_ylabel("initial trustworthy fraction")
    title = ", ".join(
        f"{k}={spec.options[k]}" for k in ("rule", "topology", "r_UT") if spec.options.get(k)
    )
    ax.set_title(title or "global net wealth")
    return fig


def render_snapshot(spec: FigureSpec):
    _, rows = _pick_input(spec, ["step", "node", "strategy_code"])
    steps = sorted({int(r["step"]) for r in rows})
    step = int(spec.options.get("step", steps[-1]))
    if step not in steps:
        raise ValueError(f"step {step} not in snapshot file (available: {steps})")
    cells = {int(r["node"]): int(r["strategy_code"]) for r in rows if int(r["step"]) == step}
    side = int(round(np.sqrt(len(cells))))
    if side * side != len(cells):
        raise ValueError(f"snapshot holds {len(cells)} nodes, not a square lattice")
    grid = np.empty((side, side), dtype=np.int64)
    for node, code in cells.items():
        grid[node // side, node % side] = code
    cmap = ListedColormap([STRATEGY_COLORS[1], STRATEGY_COLORS[2], STRATEGY_COLORS[3]])
    norm = BoundaryNorm([0.5, 1.5, 2.5, 3.5], cmap.N)
    fig = plt.figure(figsize=(4, 4))
    ax = fig.add_axes([0, 0, 1, 1])
    ax.imshow(grid, cmap=cmap, norm=norm, interpolation="nearest")
    ax.set_axis_off()
    return fig


def render_massfit(spec: FigureSpec):
    _, rows = _pick_input(spec, ["rule", "strategy", "L", "M"])
    fits = {}
    for path in spec.inputs:
        try:
            for r in read_table(path, ["r_UT", "rule", "strategy", "a"]):
                fits[r["strategy"]] = float(r["a"])
        except ValueError:
            continue
    fig, ax = plt.subplots(figsize=(5, 4))
    for strategy in ("I", "T", "U"):
        pts = [(float(r["L"]), float(r["M"])) for r in rows if r["strategy"] == strategy]
        pts = [(x, y) for x, y in pts if y > 0]
        if not pts:
            continue
        xs, ys = zip(*sorted(pts))
        label = f"k_{strategy}"
        if strategy in fits:
            label += f" (a = {fits[strategy]:.2f})"
        code = {"I": 1, "T": 2, "U": 3}[strategy]
        ax.loglog(xs, ys, "o-", color=STRATEGY_COLORS[code], label=label)
    ax.set_xlabel("box side L")
    ax.set_ylabel("mean mass M(L)")
    ax.legend()
    ax.set_title("mass scaling")
    return fig


def render_gl(spec: FigureSpec):
    _, rows = _pick_input(spec, ["l", "rule", "G"])
    fig, ax = plt.subplots(figsize=(5, 4))
    for rule in sorted({r["rule"] for r in rows}):
        pts = sorted((int(r["l"]), float(r["G"])) for r in rows if r["rule"] == rule)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=rule)
    ax.set_xlabel("distance l")
    ax.set_ylabel("G(l)")
    ax.legend()
    ax.set_title("spatial correlation")
    return fig


def render_spectrum(spec: FigureSpec):
    _, rows = _pick_input(spec, ["freq", "power", "rule"])
    scale = spec.options.get("scale", "linear")
    fig, ax = plt.subplots(figsize=(5, 4))
    for rule in sorted({r["rule"] for r in rows}):
        pts = sorted((float(r["freq"]), float(r["power"])) for r in rows if r["rule"] == rule)
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        if scale == "loglog":
            keep = (xs > 0) & (ys > 0)
            ax.loglog(xs[keep], ys[keep], label=rule)
        else:
            ax.plot(xs, ys, label=rule)
    ax.set_xlabel("frequency (cycles/step)")
    ax.set_ylabel("power")
    ax.legend()
    ax.set_title("power spectrum of k_I")
    return fig


def render_lagcorr(spec: FigureSpec):
    _, rows = _pick_input(spec, ["distance", "lag", "rho", "rule"])
    fig, ax = plt.subplots(figsize=(5, 4))
    for d in sorted({int(r["distance"]) for r in rows}):
        pts = sorted(
            (int(r["lag"]), float(r["rho"])) for r in rows if int(r["distance"]) == d
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"distance {d}")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("lag (steps)")
    ax.set_ylabel("Pearson rho")
    ax.legend()
    ax.set_title("spatio-temporal correlation")
    return fig


_RENDERERS = {
    "heatmap": render_heatmap,
    "snapshot": render_snapshot,
    "massfit": render_massfit,
    "gl": render_gl,
    "spectrum": render_spectrum,
    "lagcorr": render_lagcorr,
}
