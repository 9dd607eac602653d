"""Command line for rendering figures from simulation result CSVs."""

from __future__ import annotations

import argparse
import sys

from .data import FigureDataError
from .render import KINDS, FigureSpec, render


def _parse_marker(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("marker must be 'p,q'")
    try:
        p, q = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad marker {text!r}") from exc
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise argparse.ArgumentTypeError("marker coordinates must be in [0, 1]")
    return p, q


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render benefit sweeps, p-q heatmaps, and learning curves "
        "from simulation result CSVs.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument(
        "--csv", nargs="+", required=True, help="one or more result.csv inputs"
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--no-threshold", action="store_true",
        help="suppress the analytic dominance boundary on the epsilon-greedy panel",
    )
    parser.add_argument(
        "--marker", type=_parse_marker, default=(0.81, 0.36), metavar="p,q",
        help="experimental point for the heatmap cross (default 0.81,0.36)",
    )
    parser.add_argument(
        "--no-marker", action="store_true", help="suppress the experimental marker"
    )
    parser.add_argument(
        "--b-marker", type=float, default=2.0, metavar="B",
        help="dashed vertical marker on b-sweep plots (default 2)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        csv_paths=tuple(args.csv),
        out_path=args.out,
        threshold=not args.no_threshold,
        marker=None if args.no_marker else args.marker,
        benefit_marker=None if args.no_marker else args.b_marker,
    )
    try:
        out = render(spec)
    except FigureDataError as exc:
        print(f"figures: error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
