"""Command line wrapper: render --input sweep.csv --kind placement --out fig.png."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wpt-render",
        description="Render figures from wptplace sweep/field CSV files",
    )
    parser.add_argument("--input", required=True, help="CSV produced by the wptplace CLI")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--series-column", default="rz",
                        help="column that splits sweep rows into curves")
    args = parser.parse_args(argv)
    try:
        path = render(FigureSpec(args.input, args.kind, args.out, args.series_column))
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
