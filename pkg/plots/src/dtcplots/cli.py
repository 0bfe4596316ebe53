"""One command per figure kind, sharing the same flag set.

Each command reads the simulator's CSV/JSON files named by --input (repeated
for two-panel kinds), writes the image at --output, and exits 1 with a
descriptive message if an input violates its schema.
"""

import argparse
import sys

from .figures import FigureRequest, render
from .schemas import SchemaError


def _build_parser(kind: str, n_inputs: int, input_help: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=f"dtc-plot-{kind}",
        description=f"Render a {kind} figure from simulator output files.",
    )
    parser.add_argument("--input", action="append", required=True,
                        metavar="FILE",
                        help=input_help + (f" (repeat exactly {n_inputs}x)"
                                           if n_inputs > 1 else ""))
    parser.add_argument("--output", required=True, metavar="IMAGE",
                        help="output image path (.svg or .png)")
    parser.add_argument("--metadata", default=None, metavar="JSON",
                        help="metadata.json whose resolved config is embedded "
                             "as the figure caption")
    parser.add_argument("--title", default=None, help="figure title override")
    return parser


def _main(kind: str, n_inputs: int, input_help: str, argv) -> int:
    parser = _build_parser(kind, n_inputs, input_help)
    args = parser.parse_args(argv)
    try:
        request = FigureRequest(kind=kind, inputs=tuple(args.input),
                                output=args.output, metadata=args.metadata,
                                title=args.title)
        out = render(request)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def timeseries_main(argv=None) -> None:
    raise SystemExit(_main("timeseries", 1, "series CSV", argv))


def spectrum_pair_main(argv=None) -> None:
    raise SystemExit(_main("spectrum-pair", 2, "spectrum CSV", argv))


def eps_sweep_main(argv=None) -> None:
    raise SystemExit(_main("eps-sweep", 1, "sweep CSV", argv))


def remote_pair_main(argv=None) -> None:
    raise SystemExit(_main("remote-pair", 2, "series CSV", argv))
