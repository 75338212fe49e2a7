"""fdfv-plot: turn benchmark CSV files into figures."""

import argparse
import sys

from .render import KINDS, PlotJob, SchemaError, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdfv-plot", description="Render fdfv benchmark CSVs"
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="input CSV (repeatable)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default="")
    parser.add_argument("--label", dest="labels", action="append", default=[],
                        help="legend label per input (repeatable)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    job = PlotJob(kind=args.kind, inputs=tuple(args.inputs), output=args.out,
                  title=args.title, labels=tuple(args.labels))
    try:
        meta = render(job)
    except (SchemaError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {meta['output']}")
    return 0


def entrypoint():
    raise SystemExit(main())
