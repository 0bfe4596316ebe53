"""Experiment orchestration: spec files, artifact writing, validation suite.

A spec file is a strict YAML document:

    spec_version: 1
    model: central_spin            # or spin_mech / remote_sync
    config:                        # fields of the model's config dataclass
      n_spins: 6
      ...
    analysis:                      # optional
      window: rectangular          # or hann
      readout: collective          # central_spin only; or a site index
    sweep:                         # optional
      parameter: rotation_error
      grid: [0.0, 0.0104, ...]
    provenance:                    # optional: per-field value origin notes
      coupling: derived
    output:
      directory: out/run
      format: csv

Unknown fields anywhere are rejected.  Data files are deterministic for a
given spec: CSV floats are written with 17 significant digits and JSON keys
are sorted; everything nondeterministic (timestamps, wall times) lives under
the metadata file's "volatile" key.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .central_spin import (
    CentralSpinConfig,
    cross_validate_backends,
    extracted_mixing_amplitude,
    floquet_run,
    linear_error_amplitude,
)
from .errors import CapacityError, ConfigError
from .remote import RemoteConfig, floquet_run_remote, sync_metric
from .spectral import (
    WINDOWS,
    SweepTable,
    dtc_signature,
    parameter_sweep,
    peak_report,
    power_spectrum,
)
from .spin_mech import (
    SpinMechConfig,
    closed_vs_brute_deviation,
    extracted_leakage_series,
    floquet_run_mech,
)

SPEC_VERSION = 1

FLOAT_FMT = "%.17g"

MODELS = {
    "central_spin": CentralSpinConfig,
    "spin_mech": SpinMechConfig,
    "remote_sync": RemoteConfig,
}

_TOP_KEYS = {"spec_version", "model", "config", "analysis", "sweep", "provenance",
             "output", "label"}
_ANALYSIS_KEYS = {"window", "readout"}
_SWEEP_KEYS = {"parameter", "grid"}
_OUTPUT_KEYS = {"directory", "format"}
_FORMATS = ("csv", "json")


@dataclass
class ExperimentSpec:
    """A validated experiment description with all defaults resolved."""

    model: str
    config: object
    window: str = "rectangular"
    sweep_parameter: str | None = None
    sweep_grid: tuple[float, ...] | None = None
    provenance: dict | None = None
    output_dir: str | None = None
    output_format: str = "csv"
    label: str | None = None


def _require_mapping(node, name: str, path: str):
    if not isinstance(node, dict):
        raise ConfigError(f"'{name}' must be a mapping in {path}")
    return node


def _reject_unknown(node: dict, allowed: set, name: str, path: str):
    unknown = sorted(set(node) - allowed)
    if unknown:
        raise ConfigError(f"unknown field '{unknown[0]}' in {name} block of {path}")


def _coerce_value(field, raw, path: str):
    """YAML scalar/list -> config dataclass field value."""
    name = field.name
    if raw is None:
        raise ConfigError(f"field '{name}' is null in {path}")
    if name in ("n_spins", "n_periods", "fock_cutoff"):
        if not isinstance(raw, int) or isinstance(raw, bool):
            raise ConfigError(f"field '{name}' must be an integer in {path}")
        return raw
    if name == "bath_sizes":
        if not isinstance(raw, list) or len(raw) != 2:
            raise ConfigError(f"field 'bath_sizes' must be a two-entry list in {path}")
        return tuple(int(v) for v in raw)
    if name in ("coupling", "couplings") and isinstance(raw, list):
        def leaf(v):
            return tuple(float(x) for x in v) if isinstance(v, list) else float(v)
        return tuple(leaf(v) for v in raw) if name == "couplings" else leaf(raw)
    if name == "ancilla_init" and isinstance(raw, list):
        def comp(v):
            return complex(v[0], v[1]) if isinstance(v, list) else complex(float(v), 0.0)
        if len(raw) != 2:
            raise ConfigError(f"field 'ancilla_init' must have two amplitudes in {path}")
        return (comp(raw[0]), comp(raw[1]))
    if name == "boson_init":
        if raw == "vacuum":
            return "vacuum"
        if isinstance(raw, list) and len(raw) == 2:
            return complex(float(raw[0]), float(raw[1]))
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return complex(float(raw), 0.0)
        raise ConfigError(f"field 'boson_init' must be 'vacuum', a number, or "
                          f"[re, im] in {path}")
    if isinstance(raw, bool):
        if name == "boson_reset":
            return raw
        raise ConfigError(f"field '{name}' must not be a boolean in {path}")
    if name == "readout":
        if isinstance(raw, (int, str)):
            return raw
        raise ConfigError(f"field 'readout' must be 'collective' or a site index")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, str):
        return raw
    raise ConfigError(f"field '{name}' has unsupported type in {path}")


def _build_config(model: str, block: dict, path: str):
    cls = MODELS[model]
    known = {f.name: f for f in fields(cls)}
    values = {}
    for key, raw in block.items():
        if key not in known:
            raise ConfigError(f"unknown config field '{key}' in {path}")
        values[key] = _coerce_value(known[key], raw, path)
    missing = [f.name for f in fields(cls)
               if f.default is dataclasses.MISSING
               and f.default_factory is dataclasses.MISSING
               and f.name not in values]
    if missing:
        raise ConfigError(f"missing required config field '{missing[0]}' in {path}")
    return cls(**values)


def load_spec(path) -> ExperimentSpec:
    """Parse and validate one experiment spec file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"spec file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        raise ConfigError(f"spec parse error at {where}: {exc}") from exc
    doc = _require_mapping(doc, "spec", str(path))
    _reject_unknown(doc, _TOP_KEYS, "top-level", str(path))

    version = doc.get("spec_version")
    if version != SPEC_VERSION:
        raise ConfigError(
            f"spec_version must be {SPEC_VERSION}, got {version!r} in {path}"
        )
    model = doc.get("model")
    if model not in MODELS:
        raise ConfigError(
            f"model must be one of {sorted(MODELS)}, got {model!r} in {path}"
        )
    config_block = _require_mapping(doc.get("config"), "config", str(path))

    window = "rectangular"
    readout = None
    if "analysis" in doc:
        analysis = _require_mapping(doc["analysis"], "analysis", str(path))
        _reject_unknown(analysis, _ANALYSIS_KEYS, "analysis", str(path))
        window = analysis.get("window", window)
        if window not in WINDOWS:
            raise ConfigError(f"window must be one of {WINDOWS}, got {window!r}")
        if "readout" in analysis:
            if model != "central_spin":
                raise ConfigError(f"analysis readout applies only to central_spin "
                                  f"runs ({path})")
            readout = analysis["readout"]

    config_block = dict(config_block)
    if readout is not None:
        config_block["readout"] = readout
    config = _build_config(model, config_block, str(path))

    sweep_parameter = None
    sweep_grid = None
    if "sweep" in doc:
        sweep = _require_mapping(doc["sweep"], "sweep", str(path))
        _reject_unknown(sweep, _SWEEP_KEYS, "sweep", str(path))
        sweep_parameter = sweep.get("parameter")
        if sweep_parameter is None or not hasattr(config, str(sweep_parameter)):
            raise ConfigError(
                f"sweep parameter {sweep_parameter!r} is not a config field in {path}"
            )
        grid = sweep.get("grid")
        if not isinstance(grid, list) or not grid:
            raise ConfigError(f"sweep grid must be a non-empty list in {path}")
        sweep_grid = tuple(float(v) for v in grid)
        if sweep_parameter == "rotation_error":
            for v in sweep_grid:
                if not 0.0 <= v < np.pi / 2:
                    raise ConfigError(
                        f"rotation-error grid values must lie in [0, pi/2), "
                        f"got {v!r} in {path}"
                    )

    provenance = None
    if "provenance" in doc:
        prov = _require_mapping(doc["provenance"], "provenance", str(path))
        config_fields = {f.name for f in fields(type(config))}
        for key, value in prov.items():
            if key not in config_fields:
                raise ConfigError(f"provenance names unknown field '{key}' in {path}")
            if not isinstance(value, str):
                raise ConfigError(f"provenance note for '{key}' must be a string")
        provenance = dict(prov)

    output_dir = None
    output_format = "csv"
    if "output" in doc:
        output = _require_mapping(doc["output"], "output", str(path))
        _reject_unknown(output, _OUTPUT_KEYS, "output", str(path))
        output_dir = output.get("directory")
        output_format = output.get("format", "csv")
        if output_format not in _FORMATS:
            raise ConfigError(
                f"output format must be one of {_FORMATS}, got {output_format!r}"
            )

    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ConfigError(f"label must be a string in {path}")

    return ExperimentSpec(
        model=model,
        config=config,
        window=window,
        sweep_parameter=sweep_parameter,
        sweep_grid=sweep_grid,
        provenance=provenance,
        output_dir=output_dir,
        output_format=output_format,
        label=label or path.stem,
    )


# ---------------------------------------------------------------------------
# artifact writing


def _fmt(value) -> str:
    return FLOAT_FMT % float(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _resolved_config_dict(config) -> dict:
    out = {}
    for f in fields(type(config)):
        out[f.name] = _jsonable(getattr(config, f.name))
    return out


def _peaks_payload(report, dominance_factor: float = 3.0) -> dict:
    return {
        "height_at_half": report.height_at_half,
        "global_max_at_half": report.global_max_at_half,
        "satellites": [[nu, p] for nu, p in report.satellites],
        "splitting": report.splitting,
        "dtc_signature": dtc_signature(report, dominance_factor),
        "dominance_factor": dominance_factor,
    }


def _series_rows(magnetization) -> list:
    return [(str(n), _fmt(v)) for n, v in enumerate(magnetization)]


def _spectrum_rows(spectrum) -> list:
    return [(_fmt(nu), _fmt(p))
            for nu, p in zip(spectrum.frequencies, spectrum.power)]


def _metadata(spec: ExperimentSpec, wall_time: float, extra: dict) -> dict:
    meta = {
        "spec_version": SPEC_VERSION,
        "package": {"name": "dtcsim", "version": __version__},
        "model": spec.model,
        "resolved_config": _resolved_config_dict(spec.config),
        "analysis": {"window": spec.window},
        "volatile": {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_time_s": wall_time,
        },
    }
    if spec.provenance:
        meta["parameter_provenance"] = dict(spec.provenance)
    meta.update(extra)
    return meta


def _run_single(spec: ExperimentSpec, out: Path) -> dict:
    start = time.perf_counter()
    extra: dict = {}
    written = {}
    if spec.model == "remote_sync":
        res1, res2 = floquet_run_remote(spec.config)
        results = [("", res1), ("_site2", res2)]
        extra["derived_quantities"] = {"sync_metric": sync_metric(res1, res2)}
    else:
        run = floquet_run if spec.model == "central_spin" else floquet_run_mech
        result = run(spec.config)
        results = [("", result)]
        if spec.model == "spin_mech":
            occ = result.extras.get("mode_occupation")
            extra["derived_quantities"] = {
                "fock_cutoff_resolved": result.config.fock_cutoff,
                "max_mode_occupation": float(np.max(occ)) if occ is not None else None,
            }
    for suffix, result in results:
        spectrum = power_spectrum(result.magnetization, window=spec.window)
        report = peak_report(spectrum)
        series_path = out / f"series{suffix}.csv"
        _write_csv(series_path, ["period_index", "magnetization"],
                   _series_rows(result.magnetization))
        spectrum_path = out / f"spectrum{suffix}.csv"
        _write_csv(spectrum_path, ["nu", "power"], _spectrum_rows(spectrum))
        peaks_path = out / f"peaks{suffix}.json"
        _write_json(peaks_path, _peaks_payload(report))
        written[f"series{suffix}"] = str(series_path)
        written[f"spectrum{suffix}"] = str(spectrum_path)
        written[f"peaks{suffix}"] = str(peaks_path)
    wall = time.perf_counter() - start
    meta_path = out / "metadata.json"
    _write_json(meta_path, _metadata(spec, wall, extra))
    written["metadata"] = str(meta_path)
    return written


def sweep_column_name(parameter: str) -> str:
    # the stable sweep-file contract names the rotation-error column "epsilon"
    return "epsilon" if parameter == "rotation_error" else parameter


def _sweep_rows(table: SweepTable) -> list:
    rows = []
    for row in table.rows:
        if row.report is None:
            rows.append((_fmt(row.value), "", "", "", row.error or ""))
        else:
            rows.append((
                _fmt(row.value),
                _fmt(row.report.height_at_half),
                "true" if row.report.global_max_at_half else "false",
                "" if row.report.splitting is None else _fmt(row.report.splitting),
                "",
            ))
    return rows


def _run_sweep(spec: ExperimentSpec, out: Path, max_workers: int) -> dict:
    start = time.perf_counter()
    table = parameter_sweep(
        spec.config,
        spec.sweep_parameter,
        spec.sweep_grid,
        window=spec.window,
        max_workers=max_workers,
    )
    column = sweep_column_name(spec.sweep_parameter)
    sweep_path = out / "sweep.csv"
    _write_csv(
        sweep_path,
        [column, "height_at_half", "global_max_at_half", "splitting", "error"],
        _sweep_rows(table),
    )
    wall = time.perf_counter() - start
    extra = {
        "sweep": {
            "parameter": spec.sweep_parameter,
            "column": column,
            "grid": list(spec.sweep_grid),
            "workers": max_workers,
        },
    }
    meta = _metadata(spec, wall, extra)
    meta["volatile"]["row_wall_times_s"] = [r.wall_time for r in table.rows]
    meta_path = out / "metadata.json"
    _write_json(meta_path, meta)
    return {"sweep": str(sweep_path), "metadata": str(meta_path)}


def run_experiment(spec: ExperimentSpec, output_dir=None, max_workers: int = 1) -> dict:
    """Execute one spec and write its artifacts; returns {name: path}."""
    target = output_dir or spec.output_dir
    if target is None:
        raise ConfigError("no output directory: set output.directory or pass one")
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    if spec.sweep_parameter is not None:
        return _run_sweep(spec, out, max_workers)
    return _run_single(spec, out)


def reanalyze_series(series_path, output_dir, window: str = "rectangular") -> dict:
    """Recompute spectrum + peak report from an existing series CSV."""
    path = Path(series_path)
    if not path.exists():
        raise ConfigError(f"series file not found: {path}")
    rows = path.read_text().strip().splitlines()
    if not rows or rows[0].split(",")[:2] != ["period_index", "magnetization"]:
        raise ConfigError(f"{path} is not a series file "
                          f"(expected header 'period_index,magnetization')")
    try:
        series = np.array([float(line.split(",")[1]) for line in rows[1:]])
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"malformed series row in {path}: {exc}") from exc
    spectrum = power_spectrum(series, window=window)
    report = peak_report(spectrum)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    spectrum_path = out / "spectrum.csv"
    _write_csv(spectrum_path, ["nu", "power"], _spectrum_rows(spectrum))
    peaks_path = out / "peaks.json"
    _write_json(peaks_path, _peaks_payload(report))
    return {"spectrum": str(spectrum_path), "peaks": str(peaks_path)}


# ---------------------------------------------------------------------------
# validation suite


@dataclass
class ValidationEntry:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    measured: float | None
    tolerance: float | None
    detail: str

    def line(self) -> str:
        parts = [f"{self.status.upper():7s} {self.name}"]
        if self.measured is not None:
            parts.append(f"measured={self.measured:.3e}")
        if self.tolerance is not None:
            parts.append(f"tolerance={self.tolerance:.3e}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass
class ValidationReport:
    entries: list

    @property
    def passed(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def lines(self) -> list:
        return [e.line() for e in self.entries]


def _check(name, measured, tolerance, detail="") -> ValidationEntry:
    status = "pass" if measured <= tolerance else "fail"
    return ValidationEntry(name, status, float(measured), float(tolerance), detail)


def run_validation_suite() -> ValidationReport:
    """Run the numerical cross-checks bundled with the package.

    Failures become report entries, never exceptions; requests that exceed a
    backend capacity limit are recorded as skipped.
    """
    entries = []

    devs = []
    for n_spins, g, w, tau in ((2, 1.3, 0.9, 1.1), (4, 3.0, 3.0, 2.0), (6, 2.0, 1.5, 0.7)):
        cfg = CentralSpinConfig(n_spins=n_spins, coupling=g, drive=w,
                                interaction_time=tau, rotation_error=0.05 * np.pi,
                                n_periods=32)
        devs.append(cross_validate_backends(cfg).max_deviation)
    entries.append(_check("backend_equivalence", max(devs), 1e-8,
                          "collective vs full magnetization series"))

    devs = []
    for n_spins in (2, 4):
        for w0t, gt in ((np.pi, np.pi / 8), (2 * np.pi, np.pi / 4)):
            cfg = SpinMechConfig(n_spins=n_spins, coupling=gt, mode_frequency=w0t,
                                 interaction_time=1.0, rotation_error=0.0,
                                 n_periods=2, fock_cutoff=32)
            devs.append(closed_vs_brute_deviation(cfg, max_occupation=16))
    entries.append(_check("closed_form_vs_brute_force", max(devs), 1e-6,
                          "factored propagator vs dense exponential"))

    eps = 1e-3
    rel = []
    for periods in (2, 4, 8, 16):
        cfg = CentralSpinConfig(n_spins=4, coupling=0.0, drive=0.0,
                                interaction_time=1.0, rotation_error=eps,
                                n_periods=periods)
        a = extracted_mixing_amplitude(cfg, periods)
        target = linear_error_amplitude(4, periods, eps)
        rel.append(abs(a - target) / target)
    entries.append(_check("linear_error_growth", max(rel), 0.05,
                          "first-order mixing amplitude vs M*eps/2"))

    eps = 1e-4
    periods = list(range(2, 61, 2))
    cfg = SpinMechConfig(n_spins=4, coupling=np.pi / 4, mode_frequency=2 * np.pi,
                         interaction_time=1.0, rotation_error=eps, n_periods=60,
                         fock_cutoff=16)
    amps = np.array(extracted_leakage_series(cfg, periods))
    blocks = [b.max() for b in np.array_split(amps, 3)]
    entries.append(_check("bounded_leakage_envelope", max(blocks) / min(blocks), 10.0,
                          "block maxima of the stabilized leakage series"))

    cfg0 = SpinMechConfig(n_spins=4, coupling=0.0, mode_frequency=2 * np.pi,
                          interaction_time=1.0, rotation_error=eps, n_periods=60,
                          fock_cutoff=8)
    amps0 = np.array(extracted_leakage_series(cfg0, periods))
    slope = float(np.polyfit(periods, amps0, 1)[0])
    entries.append(_check("leakage_control_slope", abs(slope - eps / 2) / (eps / 2),
                          0.10, "uncoupled error growth per period vs eps/2"))

    try:
        big = CentralSpinConfig(n_spins=16, coupling=1.0, drive=1.0,
                                interaction_time=1.0, rotation_error=0.05 * np.pi,
                                n_periods=16)
        cross_validate_backends(big)
        entries.append(ValidationEntry("capacity_guard", "fail", None, None,
                                       "expected a capacity error at n_spins=16"))
    except CapacityError as exc:
        entries.append(ValidationEntry("capacity_guard", "skipped", None, None,
                                       f"cross-validation at n_spins=16 skipped: {exc}"))

    return ValidationReport(entries)
