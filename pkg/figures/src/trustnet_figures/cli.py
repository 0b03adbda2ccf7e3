"""figures <kind> --in <csv...> --out <image>: plot trustnet CSV artifacts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from trustnet_figures.render import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render paper-style figures from trustnet CSV outputs.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True, help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path (.png, .pdf, .svg)")
    parser.add_argument("--rule", help="heatmap: keep only this rule")
    parser.add_argument("--topology", help="heatmap: keep only this topology")
    parser.add_argument("--r-ut", dest="r_ut", help="heatmap: keep only this r_UT value")
    parser.add_argument("--step", type=int, help="snapshot: which recorded step (default last)")
    parser.add_argument(
        "--scale", choices=["linear", "loglog"], default="linear",
        help="spectrum: axis scale (default linear)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    options = {}
    if args.rule is not None:
        options["rule"] = args.rule
    if args.topology is not None:
        options["topology"] = args.topology
    if args.r_ut is not None:
        options["r_UT"] = args.r_ut
    if args.step is not None:
        options["step"] = args.step
    options["scale"] = args.scale
    spec = FigureSpec(
        kind=args.kind,
        inputs=[Path(p) for p in args.inputs],
        output=Path(args.out),
        options=options,
    )
    try:
        written = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(written)
    return 0


if __name__ == "__main__":
    sys.exit(main())
