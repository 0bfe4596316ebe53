"""Power spectra of stroboscopic series and subharmonic peak classification.

Frequencies are reported in cycles per Floquet period, on the DFT grid
k / M for a length-M series; period doubling shows up at nu = 0.5 (an exact
grid point for even M).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .errors import DomainError

WINDOWS = ("rectangular", "hann")

MIN_SAMPLES = 8


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray
    power: np.ndarray
    window: str

    @property
    def half_index(self) -> int:
        return len(self.power) // 2


@dataclass(frozen=True)
class PeakReport:
    """Summary of the spectral neighbourhood of nu = 0.5.

    satellites lists the strict local maxima with 0.4 < nu < 0.6, nu != 0.5,
    as (nu, power) pairs; splitting is the frequency gap between the
    strongest satellite below 0.5 and the strongest above, when both exist.
    """

    height_at_half: float
    global_max_at_half: bool
    satellites: tuple[tuple[float, float], ...]
    splitting: float | None


def power_spectrum(series: np.ndarray, window: str = "rectangular") -> Spectrum:
    """Mean-subtracted, optionally windowed DFT power, normalized to sum 1."""
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1:
        raise DomainError("series must be one-dimensional")
    m = len(series)
    if m < MIN_SAMPLES:
        raise DomainError(f"series must have at least {MIN_SAMPLES} samples")
    if m % 2 != 0:
        raise DomainError("series length must be even so nu = 0.5 is a grid point")
    if window not in WINDOWS:
        raise DomainError(f"window must be one of {WINDOWS}")
    x = series - series.mean()
    if window == "hann":
        x = x * np.hanning(m)
    if np.max(np.abs(x)) == 0.0:
        raise DomainError("degenerate input: series is constant")
    power = np.abs(np.fft.fft(x)) ** 2
    power /= power.sum()
    return Spectrum(frequencies=np.arange(m) / m, power=power, window=window)


def peak_report(spectrum: Spectrum) -> PeakReport:
    power = spectrum.power
    nu = spectrum.frequencies
    half = spectrum.half_index
    height = float(power[half])
    others = np.delete(power, half)
    global_max = bool(height >= np.max(others))

    satellites = []
    for k in range(1, len(power) - 1):
        if k == half or not 0.4 < nu[k] < 0.6:
            continue
        if power[k] > power[k - 1] and power[k] > power[k + 1]:
            satellites.append((float(nu[k]), float(power[k])))

    splitting = None
    below = [(p, f) for f, p in satellites if f < 0.5]
    above = [(p, f) for f, p in satellites if f > 0.5]
    if below and above:
        splitting = float(max(above)[1] - max(below)[1])
    return PeakReport(
        height_at_half=height,
        global_max_at_half=global_max,
        satellites=tuple(satellites),
        splitting=splitting,
    )


def dominant_satellite_power(report: PeakReport) -> float:
    if not report.satellites:
        return 0.0
    return max(p for _, p in report.satellites)


def dtc_signature(report: PeakReport, dominance_factor: float = 3.0) -> bool:
    """Operational crystalline criterion: nu = 0.5 is the global maximum and
    exceeds the strongest satellite by the configured factor."""
    if dominance_factor <= 0:
        raise DomainError("dominance_factor must be positive")
    if not report.global_max_at_half:
        return False
    return bool(
        report.height_at_half >= dominance_factor * dominant_satellite_power(report)
    )


# --- parameter sweeps -------------------------------------------------------


@dataclass
class SweepRow:
    value: float
    report: PeakReport | None
    dtc: bool | None
    error: str | None
    wall_time: float


@dataclass
class SweepTable:
    parameter: str
    rows: list[SweepRow]

    def heights(self) -> np.ndarray:
        return np.array(
            [r.report.height_at_half if r.report else np.nan for r in self.rows]
        )


def _run_model(config):
    # Local import: the model modules import nothing from here, so this keeps
    # the dependency one-way at module-load time.
    from .central_spin import CentralSpinConfig, floquet_run
    from .remote import RemoteConfig, floquet_run_remote
    from .spin_mech import SpinMechConfig, floquet_run_mech

    if isinstance(config, CentralSpinConfig):
        return floquet_run(config)
    if isinstance(config, SpinMechConfig):
        return floquet_run_mech(config)
    if isinstance(config, RemoteConfig):
        return floquet_run_remote(config)[0]  # sweeps report the first bath
    raise TypeError(f"unsupported config type {type(config).__name__}")


def parameter_sweep(
    config,
    parameter: str,
    values,
    window: str = "rectangular",
    dominance_factor: float = 3.0,
    max_workers: int = 1,
) -> SweepTable:
    """Rerun one model while varying a single config field.

    Each grid point is an independent pure task; failures are recorded on
    their row and never abort the sweep.  Rows come back sorted by the swept
    value regardless of execution order or worker count.
    """
    values = [float(v) for v in values]
    if not values:
        raise DomainError("sweep grid must be non-empty")
    if not hasattr(config, parameter):
        raise DomainError(f"unknown sweep parameter '{parameter}'")

    def one(value: float) -> SweepRow:
        start = time.perf_counter()
        try:
            result = _run_model(dc_replace(config, **{parameter: value}))
            report = peak_report(power_spectrum(result.magnetization, window=window))
            row = SweepRow(
                value=value,
                report=report,
                dtc=dtc_signature(report, dominance_factor),
                error=None,
                wall_time=0.0,
            )
        except Exception as exc:  # failure isolation: annotate and continue
            row = SweepRow(value=value, report=None, dtc=None,
                          error=f"{type(exc).__name__}: {exc}", wall_time=0.0)
        row.wall_time = time.perf_counter() - start
        return row

    ordered = sorted(values)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, ordered))
    else:
        rows = [one(v) for v in ordered]
    return SweepTable(parameter=parameter, rows=rows)


def epsilon_sweep(config, eps_values, **kwargs) -> SweepTable:
    """Sweep the rotation error; grid values must lie in [0, pi/2)."""
    for eps in eps_values:
        if not 0.0 <= float(eps) < np.pi / 2:
            raise DomainError("rotation-error grid values must lie in [0, pi/2)")
    return parameter_sweep(config, "rotation_error", eps_values, **kwargs)
