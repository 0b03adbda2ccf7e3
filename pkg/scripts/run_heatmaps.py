"""Initial-condition sensitivity heatmaps: rules x topologies x r_UT.

Produces one sweep.csv over the whole Cartesian grid. The full-resolution
grid (step 0.05, 100 runs per cell, 5000 steps) is a long batch job; the
defaults here are scaled down to finish on a desk machine.
"""

import argparse
from pathlib import Path

from trustnet.cli import cmd_sweep, sim_config_from, sweep_settings_from


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/heatmaps")
    ap.add_argument("--grid-step", type=float, default=0.1)
    ap.add_argument("--side", type=int, default=32)
    ap.add_argument("--sf-n", type=int, default=1024)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--rules", nargs="+", default=["ui", "ui_vm", "moran", "prop"])
    ap.add_argument("--topologies", nargs="+", default=["lattice", "sf"])
    ap.add_argument("--r-ut-values", nargs="+", type=float, default=[0.11, 0.33, 0.66])
    args = ap.parse_args()

    config = sim_config_from(
        dict(
            side=args.side,
            n=args.sf_n,
            steps=args.steps,
            runs=args.runs,
            master_seed=args.seed,
        )
    )
    settings = sweep_settings_from(
        dict(
            grid_step=args.grid_step,
            rules=args.rules,
            topologies=args.topologies,
            r_ut_values=args.r_ut_values,
        )
    )
    cells = "x".join(
        str(len(v)) for v in (settings["rules"], settings["topologies"], settings["r_ut_values"])
    )
    print(f"sweeping grid step {args.grid_step} over {cells} rule/topology/r_UT cells")
    for path in cmd_sweep(config, settings, Path(args.out), workers=args.workers):
        print(path)


if __name__ == "__main__":
    main()
