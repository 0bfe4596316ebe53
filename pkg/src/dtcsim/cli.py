"""Command-line front door.

Subcommands: run, sweep, spectrum, validate, replicate.  Exit codes:
0 success, 1 configuration/usage error, 2 runtime or capacity error,
3 validation-suite failure.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .errors import CapacityError, ConfigError
from .runner import load_spec, reanalyze_series, run_experiment, run_validation_suite
from .spectral import WINDOWS

# each preset is a bundle of spec files shipped with the package
PRESETS = {
    "fig1b": ("fig1_drive_off.yaml", "fig1_drive_on.yaml"),
    "fig1c": ("fig1_drive_off.yaml", "fig1_drive_on.yaml"),
    "fig1d": ("fig1d_eps_sweep.yaml",),
    "fig2": ("fig2_control.yaml", "fig2_stabilized.yaml"),
    "fig2-inset": ("fig2_inset_eps_sweep.yaml",),
    "fig3": ("fig3_pair_01.yaml", "fig3_pair_00.yaml"),
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the documented contract is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def preset_spec_paths(name: str) -> list[Path]:
    if name not in PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}"
        )
    root = resources.files("dtcsim") / "presets"
    return [Path(str(root / fname)) for fname in PRESETS[name]]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtcsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                              parser_class=_Parser)

    run_p = sub.add_parser("run",
                           help="execute one experiment spec file")
    run_p.add_argument("--spec", required=True, help="path to a spec YAML file")
    run_p.add_argument("--output", default=None,
                       help="output directory (overrides the spec's output block)")
    run_p.add_argument("--workers", type=int, default=1,
                       help="worker threads for sweep grids")

    sweep_p = sub.add_parser("sweep",
                             help="execute a spec that contains a sweep block")
    sweep_p.add_argument("--spec", required=True, help="path to a spec YAML file")
    sweep_p.add_argument("--output", default=None, help="output directory")
    sweep_p.add_argument("--workers", type=int, default=1,
                         help="worker threads (grid order is preserved)")

    spec_p = sub.add_parser("spectrum",
                            help="re-analyze an existing series CSV")
    spec_p.add_argument("--input", required=True, help="series CSV path")
    spec_p.add_argument("--output", required=True, help="output directory")
    spec_p.add_argument("--window", default="rectangular", choices=WINDOWS)

    val_p = sub.add_parser("validate",
                           help="run the bundled numerical cross-checks")
    val_p.add_argument("--quiet", action="store_true", help="suppress per-check lines")

    rep_p = sub.add_parser("replicate",
                           help="run a bundled figure preset")
    rep_p.add_argument("preset", help=f"one of: {', '.join(sorted(PRESETS))}")
    rep_p.add_argument("--output", default="out",
                       help="parent directory for the preset's runs")
    rep_p.add_argument("--workers", type=int, default=1)

    return parser


def _cmd_run(args) -> int:
    spec = load_spec(args.spec)
    written = run_experiment(spec, output_dir=args.output, max_workers=args.workers)
    for name in sorted(written):
        print(f"{name}: {written[name]}")
    return 0


def _cmd_sweep(args) -> int:
    spec = load_spec(args.spec)
    if spec.sweep_parameter is None:
        raise ConfigError(f"spec {args.spec} has no sweep block")
    written = run_experiment(spec, output_dir=args.output, max_workers=args.workers)
    for name in sorted(written):
        print(f"{name}: {written[name]}")
    return 0


def _cmd_spectrum(args) -> int:
    written = reanalyze_series(args.input, args.output, window=args.window)
    for name in sorted(written):
        print(f"{name}: {written[name]}")
    return 0


def _cmd_validate(args) -> int:
    report = run_validation_suite()
    if not args.quiet:
        for line in report.lines():
            print(line)
    if report.passed:
        print("validation: all checks passed")
        return 0
    print("validation: FAILURES above", file=sys.stderr)
    return 3


def _cmd_replicate(args) -> int:
    paths = preset_spec_paths(args.preset)
    for path in paths:
        spec = load_spec(path)
        out = Path(args.output) / (spec.label or path.stem)
        written = run_experiment(spec, output_dir=out, max_workers=args.workers)
        for name in sorted(written):
            print(f"{spec.label}/{name}: {written[name]}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "spectrum": _cmd_spectrum,
    "validate": _cmd_validate,
    "replicate": _cmd_replicate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    raise SystemExit(main())
