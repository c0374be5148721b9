"""Batch figure rendering: `scalingplots input.csv output.png [filters]`."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .render import EmptySelectionError, SchemaError, render_scaling_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalingplots",
        description="render log-log convergence figures from a scaling CSV",
    )
    parser.add_argument("csv", help="input scaling CSV (scaling-v1 schema)")
    parser.add_argument("out", help="output image path (.png, .pdf, .svg)")
    parser.add_argument("--target", nargs="*", help="only these targets (ti, beta)")
    parser.add_argument("--h", nargs="*", help="only these test functions (x3, x2, ...)")
    parser.add_argument("--eps", nargs="*", type=float, help="only these exponents")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = render_scaling_figure(
            args.csv, args.out,
            targets=args.target, hs=args.h, eps_values=args.eps, dpi=args.dpi,
        )
    except (SchemaError, EmptySelectionError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for panel in report.panels:
        print(f"{panel.kind} eps={panel.eps:g} {panel.target} h={panel.h}: "
              f"{panel.annotation}")
    print(f"wrote {report.out_path} ({len(report.panels)} panels)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
