"""Command-line entry point: render --kind <kind> --in <csv...> --out <img>."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, EmptyDataError, MissingColumnError, PlotSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description=(
            "Render spatialmatch experiment CSVs as figures. SVG output is the "
            "default; name the output file *.png to rasterize."
        ),
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument(
        "--in", dest="inputs", required=True, nargs="+", metavar="CSV",
        help="one or more experiment CSV files sharing the kind's schema",
    )
    parser.add_argument("--out", required=True, help="output image path (.svg or .png)")
    parser.add_argument("--xlabel", default="")
    parser.add_argument("--ylabel", default="matching fraction")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = PlotSpec(
            inputs=tuple(args.inputs),
            kind=args.kind,
            output=args.out,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
        )
        render(spec)
    except (MissingColumnError, EmptyDataError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
