import numpy as np
import pytest

from dtcsim.central_spin import CentralSpinConfig
from dtcsim.errors import DomainError
from dtcsim.spectral import (
    MIN_SAMPLES,
    PeakReport,
    dominant_satellite_power,
    dtc_signature,
    epsilon_sweep,
    parameter_sweep,
    peak_report,
    power_spectrum,
)

SWEEP_CFG = CentralSpinConfig(
    n_spins=2,
    coupling=np.pi,
    drive=3.0,
    interaction_time=2.0,
    rotation_error=0.0,
    n_periods=64,
)


def test_alternating_series_is_pure_subharmonic():
    spec = power_spectrum((-1.0) ** np.arange(64))
    assert spec.frequencies[spec.half_index] == pytest.approx(0.5)
    assert spec.power[spec.half_index] == pytest.approx(1.0)
    assert np.sum(spec.power) == pytest.approx(1.0)


def test_constant_series_rejected():
    # all power sits at zero frequency; after mean subtraction nothing is left
    with pytest.raises(DomainError, match="constant"):
        power_spectrum(np.ones(32))


def test_spectrum_frequency_grid():
    spec = power_spectrum(np.sin(np.arange(40)))
    assert spec.frequencies[0] == 0.0
    assert len(spec.frequencies) == 40
    assert spec.frequencies[spec.half_index] == pytest.approx(0.5)


def test_power_spectrum_input_validation():
    with pytest.raises(DomainError):
        power_spectrum(np.ones(MIN_SAMPLES - 2))
    with pytest.raises(DomainError):
        power_spectrum(np.ones((8, 2)))
    with pytest.raises(DomainError):
        power_spectrum(np.ones(10), window="blackman")
    with pytest.raises(DomainError):
        power_spectrum(np.ones(15))  # odd length has no nu = 0.5 bin


def test_hann_window_accepted():
    # the window leaks the line into adjacent bins but 0.5 stays dominant
    spec = power_spectrum((-1.0) ** np.arange(32), window="hann")
    assert spec.window == "hann"
    assert spec.power[spec.half_index] == np.max(spec.power)
    assert spec.power[spec.half_index] > 0.5


def test_split_peak_detection():
    # period doubling modulated at delta: satellites at 0.5 +- delta/(2 pi)
    n = np.arange(256)
    delta = 2 * np.pi * 0.025
    series = np.cos(np.pi * n + delta * n)
    report = peak_report(power_spectrum(series))
    assert not report.global_max_at_half
    assert report.splitting == pytest.approx(0.05, abs=1 / 256)
    nus = [nu for nu, _ in report.satellites]
    assert any(nu < 0.5 for nu in nus) and any(nu > 0.5 for nu in nus)


def test_centered_peak_detection():
    report = peak_report(power_spectrum((-1.0) ** np.arange(128)))
    assert report.global_max_at_half
    assert report.height_at_half == pytest.approx(1.0)
    assert report.splitting is None
    assert dominant_satellite_power(report) < 1e-20


def test_dtc_signature_thresholds():
    centered = peak_report(power_spectrum((-1.0) ** np.arange(128)))
    assert dtc_signature(centered) is True
    n = np.arange(256)
    split = peak_report(power_spectrum(np.cos(np.pi * n + 0.15 * n)))
    assert dtc_signature(split) is False
    with pytest.raises(DomainError):
        dtc_signature(centered, dominance_factor=0.0)


def test_dtc_signature_dominance_factor():
    # second tone on an exact grid frequency so its line stays in one bin
    # (amplitude 1.5 splits over two conjugate bins, each 0.5625x the peak)
    n = np.arange(256)
    series = np.cos(np.pi * n) + 1.5 * np.cos(2 * np.pi * 0.55 * n)
    report = peak_report(power_spectrum(series))
    assert report.global_max_at_half
    assert dtc_signature(report, dominance_factor=1.0) is True
    assert dtc_signature(report, dominance_factor=3.0) is False


def test_parameter_sweep_orders_values_and_reports():
    table = parameter_sweep(SWEEP_CFG, "rotation_error", [0.3, 0.0, 0.15])
    assert table.parameter == "rotation_error"
    assert [r.value for r in table.rows] == [0.0, 0.15, 0.3]
    assert all(r.error is None for r in table.rows)
    heights = table.heights()
    assert heights[0] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(heights) <= 1e-12)


def test_parameter_sweep_isolates_row_failures():
    # a value outside the config's validity range must not kill the sweep
    table = parameter_sweep(SWEEP_CFG, "rotation_error", [0.0, 4.0])
    ok, bad = table.rows
    assert ok.error is None and ok.report is not None
    assert bad.error is not None and bad.report is None
    assert "ConfigError" in bad.error
    assert bad.dtc is None


def test_parameter_sweep_unknown_parameter():
    with pytest.raises(DomainError):
        parameter_sweep(SWEEP_CFG, "temperature", [0.1, 0.2])


def test_parameter_sweep_parallel_matches_serial():
    values = [0.0, 0.1, 0.2, 0.3]
    serial = parameter_sweep(SWEEP_CFG, "rotation_error", values)
    parallel = parameter_sweep(SWEEP_CFG, "rotation_error", values, max_workers=4)
    np.testing.assert_allclose(serial.heights(), parallel.heights())


def test_epsilon_sweep_domain_check():
    with pytest.raises(DomainError):
        epsilon_sweep(SWEEP_CFG, [0.0, np.pi / 2])
    with pytest.raises(DomainError):
        epsilon_sweep(SWEEP_CFG, [-0.1])


def test_peak_report_roundtrip_dataclass():
    report = PeakReport(
        height_at_half=0.9,
        global_max_at_half=True,
        satellites=[(0.45, 0.01)],
        splitting=None,
    )
    assert dominant_satellite_power(report) == 0.01
    assert dtc_signature(report) is True
