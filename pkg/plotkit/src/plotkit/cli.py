"""Command line front end: turn solver CSV/JSON output into figures.

Exit codes: 0 success, 2 bad input (missing, malformed, or empty files).
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .plots import KINDS, PlotJob, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from spectra and excitation tables.",
    )
    parser.add_argument("inputs", nargs="+",
                        help="spectrum or excitation CSV files")
    parser.add_argument("--kind", choices=KINDS, default="overlay")
    parser.add_argument("--out", required=True, help="output image (PNG/SVG)")
    parser.add_argument("--label", action="append", default=None,
                        help="legend label, once per input")
    parser.add_argument("--peak-report", default=None,
                        help="peak-report JSON for a lifetime zoom "
                             "with FWHM annotation (overlay only)")
    parser.add_argument("--title", default=None)
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    job = PlotJob(
        inputs=tuple(args.inputs),
        kind=args.kind,
        out=args.out,
        labels=tuple(args.label) if args.label else (),
        peak_report=args.peak_report,
        title=args.title,
        dpi=args.dpi,
    )
    try:
        render(job)
    except (io.InputError, ValueError, OSError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
