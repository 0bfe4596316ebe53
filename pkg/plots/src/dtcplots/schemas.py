"""Strict readers for the simulator's documented output-file schemas.

Every reader checks the header or key set before touching the payload and
raises SchemaError messages that name the offending file and column/key, so
a wrong or truncated input fails loudly instead of producing an empty plot.
"""

import json
from pathlib import Path

import numpy as np

SERIES_HEADER = ["period_index", "magnetization"]
SPECTRUM_HEADER = ["nu", "power"]
SWEEP_HEADER = ["epsilon", "height_at_half", "global_max_at_half",
                "splitting", "error"]
PEAKS_KEYS = {"height_at_half", "global_max_at_half", "satellites",
              "splitting", "dtc_signature", "dominance_factor"}
METADATA_KEYS = {"spec_version", "model", "resolved_config"}


class SchemaError(ValueError):
    """An input file does not match the documented schema."""


def _read_rows(path: Path, expected_header: list) -> list:
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    lines = path.read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: file is empty")
    header = lines[0].split(",")
    if header != expected_header:
        raise SchemaError(
            f"{path}: header mismatch, expected "
            f"'{','.join(expected_header)}' but found '{lines[0]}'"
        )
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows after the header")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(expected_header):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(expected_header)} columns, "
                f"found {len(cells)}"
            )
        rows.append(cells)
    return rows


def _column_floats(rows, index, column, path):
    out = np.empty(len(rows))
    for i, cells in enumerate(rows):
        try:
            out[i] = float(cells[index])
        except ValueError as exc:
            raise SchemaError(
                f"{path}: column '{column}' row {i + 2}: "
                f"not a number: {cells[index]!r}"
            ) from exc
    return out


def load_series(path) -> tuple[np.ndarray, np.ndarray]:
    """series.csv -> (period_index, magnetization)."""
    path = Path(path)
    rows = _read_rows(path, SERIES_HEADER)
    periods = _column_floats(rows, 0, "period_index", path)
    if not np.array_equal(periods, np.arange(len(rows))):
        raise SchemaError(
            f"{path}: column 'period_index' must count 0..{len(rows) - 1} "
            f"without gaps"
        )
    return periods.astype(int), _column_floats(rows, 1, "magnetization", path)


def load_spectrum(path) -> tuple[np.ndarray, np.ndarray]:
    """spectrum.csv -> (nu, power)."""
    path = Path(path)
    rows = _read_rows(path, SPECTRUM_HEADER)
    nu = _column_floats(rows, 0, "nu", path)
    power = _column_floats(rows, 1, "power", path)
    if np.any(np.diff(nu) <= 0):
        raise SchemaError(f"{path}: column 'nu' must be strictly increasing")
    if np.any(power < 0):
        raise SchemaError(f"{path}: column 'power' contains negative values")
    return nu, power


def load_sweep(path) -> dict:
    """sweep.csv -> column dict; failed rows carry NaN values and their
    error string."""
    path = Path(path)
    rows = _read_rows(path, SWEEP_HEADER)
    epsilon = _column_floats(rows, 0, "epsilon", path)
    n = len(rows)
    height = np.full(n, np.nan)
    global_max = np.zeros(n, dtype=bool)
    splitting = np.full(n, np.nan)
    errors = []
    for i, cells in enumerate(rows):
        errors.append(cells[4])
        if cells[4]:
            continue  # failed grid point: value cells are empty
        height[i] = _column_floats([cells], 1, "height_at_half", path)[0]
        if cells[2] not in ("true", "false"):
            raise SchemaError(
                f"{path}: column 'global_max_at_half' row {i + 2}: "
                f"expected 'true' or 'false', found {cells[2]!r}"
            )
        global_max[i] = cells[2] == "true"
        if cells[3]:
            splitting[i] = _column_floats([cells], 3, "splitting", path)[0]
    return {"epsilon": epsilon, "height_at_half": height,
            "global_max_at_half": global_max, "splitting": splitting,
            "error": errors}


def _load_json(path: Path, required: set, what: str) -> dict:
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    missing = sorted(required - set(payload))
    if missing:
        raise SchemaError(f"{path}: {what} is missing key '{missing[0]}'")
    return payload


def load_peaks(path) -> dict:
    path = Path(path)
    payload = _load_json(path, PEAKS_KEYS, "peak report")
    for key in ("global_max_at_half", "dtc_signature"):
        if not isinstance(payload[key], bool):
            raise SchemaError(f"{path}: key '{key}' must be a boolean")
    return payload


def load_metadata(path) -> dict:
    path = Path(path)
    payload = _load_json(path, METADATA_KEYS, "metadata")
    if not isinstance(payload["resolved_config"], dict):
        raise SchemaError(f"{path}: key 'resolved_config' must be an object")
    return payload


def caption_text(metadata: dict) -> str:
    """One-line resolved-config caption for embedding under a figure."""
    config = metadata["resolved_config"]
    parts = [f"model={metadata['model']}"]
    parts += [f"{k}={config[k]}" for k in sorted(config)]
    return ", ".join(parts)
