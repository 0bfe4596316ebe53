import dataclasses

import numpy as np
import pytest

from dtcsim.central_spin import (
    CentralSpinConfig,
    build_hamiltonian,
    cross_validate_backends,
    extracted_mixing_amplitude,
    first_order_mixing_factors,
    floquet_operator,
    floquet_run,
    linear_error_amplitude,
)
from dtcsim.collective import unitarity_defect
from dtcsim.errors import CapacityError, ConfigError, DomainError

BASE = dict(
    n_spins=4,
    coupling=3.0,
    drive=3.0,
    interaction_time=2.0,
    rotation_error=0.1,
    n_periods=64,
)


def make(**overrides):
    return CentralSpinConfig(**{**BASE, **overrides})


def test_config_validation_messages():
    with pytest.raises(ConfigError, match="n_periods must be even"):
        make(n_periods=7)
    with pytest.raises(ConfigError):
        make(n_spins=0)
    with pytest.raises(ConfigError):
        make(rotation_error=-0.1)
    with pytest.raises(ConfigError):
        make(rotation_error=np.pi)
    with pytest.raises(ConfigError):
        make(backend="exact")
    with pytest.raises(ConfigError):
        make(interaction_time=-1.0)
    with pytest.raises(ConfigError):
        make(readout="site0")
    with pytest.raises(ConfigError):
        make(ancilla_init=(1.0, 1.0))


def test_site_resolved_couplings_need_full_backend():
    with pytest.raises(ConfigError):
        make(coupling=(1.0, 2.0, 3.0, 4.0), backend="collective")
    cfg = make(coupling=(1.0, 2.0, 3.0, 4.0), backend="full")
    np.testing.assert_allclose(cfg.coupling_list(), [1.0, 2.0, 3.0, 4.0])


def test_coupling_list_length_checked():
    with pytest.raises(ConfigError):
        make(coupling=(1.0, 2.0), backend="full")


def test_full_backend_capacity():
    with pytest.raises(CapacityError):
        floquet_run(make(n_spins=16, backend="full"))


def test_hamiltonian_hermitian_both_backends():
    for backend in ("collective", "full"):
        h = build_hamiltonian(make(backend=backend))
        np.testing.assert_allclose(h, h.conj().T, atol=1e-12)


def test_floquet_operator_unitary():
    u = floquet_operator(make())
    assert unitarity_defect(u) < 1e-12


def test_perfect_flip_alternates_exactly():
    # zero rotation error: normalized readout flips sign every period
    res = floquet_run(make(rotation_error=0.0, n_periods=32))
    expected = (-1.0) ** np.arange(32)
    np.testing.assert_allclose(res.magnetization, expected, atol=1e-10)


def test_series_starts_fully_polarized():
    res = floquet_run(make())
    assert res.magnetization[0] == pytest.approx(1.0)
    assert res.magnetization.shape == (BASE["n_periods"],)
    assert res.ancilla_z.shape == (BASE["n_periods"],)


def test_final_state_normalized():
    res = floquet_run(make())
    assert np.linalg.norm(res.final_state) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(4))
def test_backend_equivalence_random_parameters(seed):
    rng = np.random.default_rng(seed)
    cfg = make(
        n_spins=int(rng.integers(1, 7)),
        coupling=float(rng.uniform(0.5, 4.0)),
        drive=float(rng.uniform(0.0, 4.0)),
        interaction_time=float(rng.uniform(0.1, 3.0)),
        rotation_error=float(rng.uniform(0.0, 0.5)),
        n_periods=32,
    )
    report = cross_validate_backends(cfg)
    assert report.max_deviation < 1e-8


def test_cross_validation_reports_both_series():
    report = cross_validate_backends(make(n_periods=16))
    assert report.collective_series.shape == (16,)
    assert report.full_series.shape == (16,)


def test_cross_validation_rejects_nonuniform_coupling():
    cfg = make(coupling=(1.0, 2.0, 3.0, 4.0), backend="full")
    with pytest.raises(ConfigError):
        cross_validate_backends(cfg)


def test_collective_fast_path_matches_dense_construction():
    # uniform coupling exercises the analytic per-level blocks; the same
    # physics routed through the dense product basis must agree
    cfg_fast = make(n_spins=5, coupling=2.0)
    cfg_dense = make(n_spins=5, coupling=(2.0,) * 5, backend="full")
    fast = floquet_run(cfg_fast).magnetization
    dense = floquet_run(cfg_dense).magnetization
    np.testing.assert_allclose(fast, dense, atol=1e-10)


def test_large_bath_runs_in_collective_backend():
    cfg = make(n_spins=400, coupling=np.pi, drive=3.0, interaction_time=2.0,
               rotation_error=0.05 * np.pi, n_periods=16)
    res = floquet_run(cfg)
    assert res.magnetization.shape == (16,)
    assert res.magnetization[0] == pytest.approx(1.0)


def test_per_spin_readout_selects_one_site():
    cfg = make(n_spins=3, coupling=(1.0, 2.0, 3.0), backend="full",
               readout=2, rotation_error=0.0, n_periods=8)
    res = floquet_run(cfg)
    np.testing.assert_allclose(res.magnetization, (-1.0) ** np.arange(8),
                               atol=1e-10)


def test_linear_error_amplitude_value_and_domain():
    assert linear_error_amplitude(2.0, 4, 0.1) == pytest.approx(0.2)
    # leading order does not depend on the level label
    assert linear_error_amplitude(-1.0, 4, 0.1) == linear_error_amplitude(3.0, 4, 0.1)
    with pytest.raises(DomainError):
        linear_error_amplitude(0.0, -1, 0.1)
    with pytest.raises(DomainError):
        linear_error_amplitude(0.0, 4, -0.1)


@pytest.mark.parametrize("backend", ["collective", "full"])
def test_extracted_mixing_tracks_linear_growth(backend):
    # frozen interaction: one-flip weight grows as n_periods * eps / 2
    # (even period counts; odd ones park the bath near the opposite pole)
    eps = 1e-3
    cfg = make(
        drive=0.0,
        interaction_time=0.0,
        rotation_error=eps,
        n_periods=16,
        backend=backend,
    )
    for periods in (2, 4, 8):
        amp = extracted_mixing_amplitude(cfg, periods)
        assert amp == pytest.approx(periods * eps / 2, rel=1e-3)


def test_first_order_mixing_factors():
    eps = 5e-4
    cfg = make(drive=0.0, interaction_time=0.0, rotation_error=eps,
               n_periods=32)
    for m in (2, 4, 8, 16):
        upper, lower = first_order_mixing_factors(cfg, m)
        assert upper == pytest.approx(m / 2, rel=1e-3)
        assert lower < upper * 1e-2  # opposite pole stays unpopulated


def test_first_order_mixing_requires_finite_error():
    with pytest.raises(DomainError):
        first_order_mixing_factors(make(rotation_error=0.0))


def test_result_carries_config():
    cfg = make()
    res = floquet_run(cfg)
    assert res.config is cfg
    assert dataclasses.is_dataclass(res)
