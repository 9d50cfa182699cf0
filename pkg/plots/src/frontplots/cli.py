"""frontplots command line: render frontspec CSV artifacts to images."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .render import FIGURE_KINDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="frontplots", description="Render frontspec CSV outputs into figures"
    )
    parser.add_argument("--version", action="version", version=f"frontplots {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("render", help="render one figure from CSV input(s)")
    rp.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    rp.add_argument(
        "--in",
        dest="inputs",
        required=True,
        help="input CSV path; comma-separated pair for spectrum-map (grid,roots)",
    )
    rp.add_argument("--out", required=True, help="output image path (.png or .svg)")

    args = parser.parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(p for p in args.inputs.split(",") if p),
        kind=args.kind,
        out=args.out,
    )
    try:
        path = render(spec)
    except FileNotFoundError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
