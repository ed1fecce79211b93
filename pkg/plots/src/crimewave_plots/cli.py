"""Command line entry points.

    plot figure --spec <spec.json>
    plot monitors --csv <diagnostics.csv> --cols a,b,c [--out <png>] [--log]

Exit codes: 0 on success, 1 on rendering errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import (
    ColumnError,
    FigureSpec,
    FigureSpecError,
    GridMismatchError,
    render_heatmap_grid,
    render_monitors,
)
from .snapshots import SnapshotFormatError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="render a heatmap panel figure from a spec file")
    p_fig.add_argument("--spec", required=True, help="JSON figure spec")

    p_mon = sub.add_parser("monitors", help="plot diagnostics columns against time")
    p_mon.add_argument("--csv", required=True, help="diagnostics CSV file")
    p_mon.add_argument("--cols", required=True, help="comma-separated column names")
    p_mon.add_argument("--out", default=None, help="output image (default: <csv>.png)")
    p_mon.add_argument("--log", action="store_true", help="log-scale vertical axis")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            spec = FigureSpec.from_json(args.spec)
            result = render_heatmap_grid(spec)
            print(f"wrote {result.output} ({result.n_panels} panels)")
            return 0
        if args.command == "monitors":
            cols = [c.strip() for c in args.cols.split(",") if c.strip()]
            out = args.out or str(Path(args.csv).with_suffix(".png"))
            result = render_monitors(args.csv, cols, out, log_scale=args.log)
            print(f"wrote {result.output} ({result.n_panels} series)")
            return 0
    except (
        FigureSpecError,
        GridMismatchError,
        ColumnError,
        SnapshotFormatError,
        FileNotFoundError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
