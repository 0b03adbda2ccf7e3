"""Command-line entry point: run / sweep / analyze, all artifacts as CSV.

Config files are flat JSON objects whose keys mirror SimConfig fields (plus
the sweep extras); --set key=value overrides win over file values. Every
numeric CSV field is written with full round-trip precision and LF newlines,
so identical seeds give byte-identical artifacts at any worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from trustnet import __version__, analysis, rules
from trustnet.engine import RunRecord, SimConfig, run_ensemble
from trustnet.game import Strategy
from trustnet.sweep import heatmap_sweep, initial_condition_grid
from trustnet.topology import LATTICE, SCALE_FREE, build_lattice

ANALYZE_KINDS = ("fractal", "gl", "spectrum", "lagcorr")

SWEEP_DEFAULTS = {
    "grid_step": 0.05,
    "rules": list(rules.RULES),
    "topologies": [LATTICE, SCALE_FREE],
    "r_ut_values": [0.11, 0.33, 0.66],
}


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_csv(path: Path, header: list[str]) -> list[list[str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            actual = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {header}") from None
        if actual != header:
            raise ValueError(f"{path}:1: header {actual} does not match expected {header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append(row)
        return rows


# --- configuration ---


def parse_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"override {pair!r} is not of the form key=value")
        key, raw = pair.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def parse_config(path: str | None, overrides: dict | None = None) -> dict:
    """File values (if any) merged with overrides; unknown keys are rejected."""
    data: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ValueError(f"config file not found: {p}")
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {p} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValueError(f"config file {p} must hold a JSON object")
    data.update(overrides or {})
    known = set(SimConfig.__dataclass_fields__) | set(SWEEP_DEFAULTS)
    for key in data:
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
    return data


def sim_config_from(data: dict) -> SimConfig:
    fields = {k: v for k, v in data.items() if k in SimConfig.__dataclass_fields__}
    for key in ("record_nodes", "probe_distances"):
        if fields.get(key) is not None:
            fields[key] = tuple(fields[key])
    config = SimConfig(**fields)
    config.validate()
    return config


def sweep_settings_from(data: dict) -> dict:
    settings = dict(SWEEP_DEFAULTS)
    settings.update({k: data[k] for k in SWEEP_DEFAULTS if k in data})
    return settings


# --- run ---


def write_run_outputs(out_dir: Path, config: SimConfig, records: list[RunRecord]) -> list[Path]:
    written = []
    for rec in records:
        path = out_dir / f"timeseries_{rec.run_index}.csv"
        _write_csv(
            path,
            ["step", "k_I", "k_T", "k_U", "W"],
            (
                (t, rec.counts[t, 0], rec.counts[t, 1], rec.counts[t, 2], rec.wealth[t])
                for t in range(rec.steps + 1)
            ),
        )
        written.append(path)
        if rec.snapshots:
            path = out_dir / f"snapshots_{rec.run_index}.csv"
            _write_csv(
                path,
                ["step", "node", "strategy_code"],
                (
                    (t, node, int(snap[node]))
                    for t, snap in rec.snapshots
                    for node in range(len(snap))
                ),
            )
            written.append(path)
        if rec.node_series is not None:
            path = out_dir / f"nodeseries_{rec.run_index}.csv"
            _write_csv(
                path,
                ["step", "node", "strategy_code"],
                (
                    (t, int(node), int(rec.node_series[t, k]))
                    for t in range(rec.steps + 1)
                    for k, node in enumerate(rec.node_ids)
                ),
            )
            written.append(path)
    path = out_dir / "ensemble_summary.csv"
    _write_csv(
        path,
        ["run", "seed", "mean_W", "final_k_I", "final_k_T", "final_k_U"],
        (
            (
                rec.run_index,
                rec.seed,
                analysis.steady_state_wealth(rec, config.window),
                rec.counts[-1, 0],
                rec.counts[-1, 1],
                rec.counts[-1, 2],
            )
            for rec in records
        ),
    )
    written.append(path)
    return written


def write_manifest(out_dir: Path, config: SimConfig, extra: dict | None = None) -> Path:
    payload = {"version": __version__, "config": asdict(config)}
    payload.update(extra or {})
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def cmd_run(config: SimConfig, out_dir: Path, workers: int = 1) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    records = run_ensemble(config, workers=workers)
    written = write_run_outputs(out_dir, config, records)
    probes = {
        str(rec.run_index): [int(x) for x in rec.node_ids]
        for rec in records
        if rec.node_ids is not None
    }
    written.append(write_manifest(out_dir, config, {"recorded_nodes": probes} if probes else None))
    return written


# --- sweep ---


def cmd_sweep(config: SimConfig, settings: dict, out_dir: Path, workers: int = 1) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = initial_condition_grid(settings["grid_step"])
    rows = heatmap_sweep(
        config,
        grid,
        settings["rules"],
        settings["topologies"],
        settings["r_ut_values"],
        workers=workers,
    )
    path = out_dir / "sweep.csv"
    _write_csv(
        path,
        ["f_I", "f_T", "f_U", "rule", "topology", "r_UT", "mean_W", "std_W", "mean_kI", "mean_kT", "mean_kU"],
        (
            (
                r.f_i, r.f_t, r.f_u, r.rule, r.topology, r.r_ut,
                r.mean_w, r.std_w, r.mean_k_i, r.mean_k_t, r.mean_k_u,
            )
            for r in rows
        ),
    )
    manifest = write_manifest(out_dir, config, {"sweep": settings})
    return [path, manifest]


# --- analyze ---


def load_manifest(in_dir: Path) -> dict:
    path = in_dir / "manifest.json"
    if not path.exists():
        raise ValueError(f"no manifest.json in {in_dir}; run `trustnet run` first")
    return json.loads(path.read_text())


def load_records(in_dir: Path, manifest: dict) -> list[RunRecord]:
    config = manifest["config"]
    records = []
    for r in range(config["runs"]):
        ts = in_dir / f"timeseries_{r}.csv"
        if not ts.exists():
            raise ValueError(f"missing {ts}")
        rows = _read_csv(ts, ["step", "k_I", "k_T", "k_U", "W"])
        counts = np.array([[int(x) for x in row[1:4]] for row in rows], dtype=np.int64)
        wealth = np.array([float(row[4]) for row in rows])
        snapshots = []
        snap_path = in_dir / f"snapshots_{r}.csv"
        if snap_path.exists():
            snapshots = _read_grouped_series(snap_path)
        node_ids = None
        node_series = None
        node_path = in_dir / f"nodeseries_{r}.csv"
        if node_path.exists():
            series = _read_grouped_series(node_path)
            node_ids = np.array(manifest["recorded_nodes"][str(r)], dtype=np.int64)
            node_series = np.stack([codes for _, codes in series])
        records.append(
            RunRecord(
                run_index=r,
                seed=config["master_seed"],
                counts=counts,
                wealth=wealth,
                snapshots=snapshots,
                node_ids=node_ids,
                node_series=node_series,
            )
        )
    return records


def _read_grouped_series(path: Path) -> list[tuple[int, np.ndarray]]:
    """(step, codes) groups from a step,node,strategy_code file."""
    rows = _read_csv(path, ["step", "node", "strategy_code"])
    groups: dict[int, list[int]] = {}
    for lineno, row in enumerate(rows, start=2):
        try:
            step, _, code = int(row[0]), int(row[1]), int(row[2])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer field in {row}") from None
        if code not in (1, 2, 3):
            raise ValueError(f"{path}:{lineno}: strategy_code must be 1, 2, or 3, got {code}")
        groups.setdefault(step, []).append(code)
    return [(step, np.array(groups[step], dtype=np.int64)) for step in sorted(groups)]


def default_box_sides(side: int) -> list[int]:
    """Box sides 1, 2, 4, ... up to the lattice side."""
    sides = []
    length = 1
    while length <= side:
        sides.append(length)
        length *= 2
    return sides


def analyze_fractal(in_dir: Path, out_dir: Path, manifest: dict, records) -> list[Path]:
    config = manifest["config"]
    if config["topology"] != LATTICE:
        raise ValueError("fractal analysis requires lattice snapshots")
    side = config["side"]
    box_sides = default_box_sides(side)
    curve_rows = []
    fit_rows = []
    for strat in (Strategy.I, Strategy.T, Strategy.U):
        curves = []
        for rec in records:
            if not rec.snapshots:
                raise ValueError(f"run {rec.run_index} has no snapshots; rerun with snapshot_every")
            _, snap = rec.snapshots[-1]
            if np.count_nonzero(snap == strat) == 0:
                continue
            curves.append(analysis.mass_scaling(snap, strat, box_sides).mass)
        if not curves:
            continue
        mean_mass = np.mean(np.array(curves), axis=0)
        for length, m in zip(box_sides, mean_mass):
            curve_rows.append((config["rule"], strat.name, length, m))
        a = analysis.fit_power_exponent(list(zip(box_sides, mean_mass)))
        fit_rows.append((config["r_ut"], config["rule"], strat.name, a))
    fractal_path = out_dir / "fractal.csv"
    _write_csv(fractal_path, ["r_UT", "rule", "strategy", "a"], fit_rows)
    curve_path = out_dir / "masscurve.csv"
    _write_csv(curve_path, ["rule", "strategy", "L", "M"], curve_rows)
    return [fractal_path, curve_path]


def analyze_gl(in_dir: Path, out_dir: Path, manifest: dict, records) -> list[Path]:
    config = manifest["config"]
    if config["topology"] != LATTICE:
        raise ValueError("G(l) analysis requires lattice snapshots")
    net = build_lattice(config["side"])
    distances = range(1, config["side"] // 2 + 1)
    rows = []
    for l in distances:
        values = []
        for rec in records:
            if not rec.snapshots:
                raise ValueError(f"run {rec.run_index} has no snapshots; rerun with snapshot_every")
            _, snap = rec.snapshots[-1]
            values.append(analysis.spatial_correlation(snap, l, net))
        rows.append((l, config["rule"], float(np.mean(values))))
    path = out_dir / "gl.csv"
    _write_csv(path, ["l", "rule", "G"], rows)
    return [path]


def analyze_spectrum(in_dir: Path, out_dir: Path, manifest: dict, records) -> list[Path]:
    config = manifest["config"]
    powers = []
    freqs = None
    for rec in records:
        n_tail = rec.steps // 2
        if n_tail < 2:
            raise ValueError(f"run {rec.run_index} too short for a spectrum ({rec.steps} steps)")
        tail = rec.counts[:, 0][-n_tail:].astype(np.float64)
        spec = analysis.periodogram(tail)
        powers.append(spec.power)
        freqs = spec.frequencies
    mean_power = np.mean(np.array(powers), axis=0)
    path = out_dir / "spectrum.csv"
    _write_csv(
        path,
        ["freq", "power", "rule"],
        ((f, p, config["rule"]) for f, p in zip(freqs, mean_power)),
    )
    return [path]


def analyze_lagcorr(
    in_dir: Path, out_dir: Path, manifest: dict, records, max_lag: int = 20
) -> list[Path]:
    config = manifest["config"]
    distances = config.get("probe_distances")
    if not distances:
        raise ValueError("lag-correlation analysis requires a run with probe_distances set")
    rho_by_distance: dict[int, list[np.ndarray]] = {d: [] for d in distances}
    for rec in records:
        if rec.node_series is None:
            raise ValueError(f"run {rec.run_index} has no node series; rerun with probe_distances")
        n_tail = rec.steps // 2
        if n_tail < max_lag + 2:
            raise ValueError(f"run {rec.run_index} too short for lag {max_lag} correlations")
        tail = rec.node_series[-n_tail:]
        focal = tail[:, 0]
        for k, d in enumerate(distances):
            lc = analysis.lagged_pearson(focal, tail[:, k + 1], max_lag)
            rho_by_distance[d].append(lc.rho)
    rows = []
    for d in distances:
        stacked = np.array(rho_by_distance[d])
        defined = ~np.isnan(stacked)
        # all-NaN lags (every run undefined) stay NaN in the output
        mean_rho = np.full(max_lag + 1, np.nan)
        any_defined = defined.any(axis=0)
        mean_rho[any_defined] = (
            np.where(defined, stacked, 0.0).sum(axis=0)[any_defined]
            / defined.sum(axis=0)[any_defined]
        )
        for lag in range(max_lag + 1):
            rows.append((d, lag, mean_rho[lag], config["rule"]))
    path = out_dir / "lagcorr.csv"
    _write_csv(path, ["distance", "lag", "rho", "rule"], rows)
    return [path]


def cmd_analyze(in_dir: Path, out_dir: Path, which: list[str] | None = None) -> list[Path]:
    manifest = load_manifest(in_dir)
    records = load_records(in_dir, manifest)
    out_dir.mkdir(parents=True, exist_ok=True)
    kinds = which or list(ANALYZE_KINDS)
    dispatch = {
        "fractal": analyze_fractal,
        "gl": analyze_gl,
        "spectrum": analyze_spectrum,
        "lagcorr": analyze_lagcorr,
    }
    written = []
    for kind in kinds:
        if kind not in dispatch:
            raise ValueError(f"unknown analysis kind {kind!r}, expected one of {ANALYZE_KINDS}")
        written.extend(dispatch[kind](in_dir, out_dir, manifest, records))
    return written


# --- entry point ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustnet",
        description="N-player trust game simulator: run ensembles, sweep initial "
        "conditions, analyze recorded dynamics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="config override, repeatable; value parsed as JSON when possible",
        )
        p.add_argument("--workers", type=int, default=1, help="parallel run workers")

    p_run = sub.add_parser("run", help="run a seeded ensemble and write CSVs")
    common(p_run)
    p_sweep = sub.add_parser("sweep", help="initial-condition sensitivity grid")
    common(p_sweep)
    p_an = sub.add_parser("analyze", help="compute measurements from run outputs")
    p_an.add_argument("--in", dest="in_dir", required=True, help="directory written by `run`")
    p_an.add_argument("--out", required=True, help="output directory")
    p_an.add_argument(
        "--which",
        action="append",
        choices=ANALYZE_KINDS,
        help="analysis kind, repeatable (default: all four)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            written = cmd_analyze(Path(args.in_dir), Path(args.out), args.which)
        else:
            overrides = parse_overrides(args.overrides)
            if args.seed is not None:
                overrides["master_seed"] = args.seed
            data = parse_config(args.config, overrides)
            config = sim_config_from(data)
            if args.command == "run":
                written = cmd_run(config, Path(args.out), workers=args.workers)
            else:
                settings = sweep_settings_from(data)
                written = cmd_sweep(config, settings, Path(args.out), workers=args.workers)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
