"""Reproduce the spatial/temporal dynamics experiments on a 32x32 lattice.

For each update rule this runs a seeded ensemble from the standard 30/25/45
initial mix, then derives every measurement (mass-scaling fractal fits, G(l),
power spectra, lag correlations) from the recorded CSVs.

Desk-scale defaults; pass --runs 100 --steps 5000 for paper-scale statistics.
"""

import argparse
from pathlib import Path

from trustnet.cli import cmd_analyze, cmd_run, sim_config_from

RULES = ["ui", "ui_vm", "moran", "prop"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/dynamics", help="output root")
    ap.add_argument("--r-ut", type=float, default=0.33)
    ap.add_argument("--side", type=int, default=32)
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=101)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    root = Path(args.out)
    for rule in RULES:
        config = sim_config_from(
            dict(
                side=args.side,
                steps=args.steps,
                runs=args.runs,
                master_seed=args.seed,
                rule=rule,
                r_ut=args.r_ut,
                snapshot_every=args.steps,
                probe_distances=[2, 4, 6, 10],
            )
        )
        run_dir = root / rule / "run"
        print(f"[{rule}] running {args.runs} x {args.steps} steps -> {run_dir}")
        cmd_run(config, run_dir, workers=args.workers)
        analysis_dir = root / rule / "analysis"
        print(f"[{rule}] analyzing -> {analysis_dir}")
        cmd_analyze(run_dir, analysis_dir)


if __name__ == "__main__":
    main()
