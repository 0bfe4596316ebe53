"""Central-spin model: one driven ancilla qubit coupled to N bath spins.

H = S^z * sum_k g_k I^z_k + omega * S^x, evolved stroboscopically: every
period the bath is rotated by theta = pi - eps about x, then the coupled
system evolves for a time tau.  With a perfect rotation (eps = 0) the bath
magnetization flips sign each period exactly; the interesting physics is how
the ancilla drive stabilizes that subharmonic response against eps > 0.

Two backends: "collective" works in the symmetric J = N/2 subspace (valid
for uniform coupling, scales to thousands of spins), "full" works in the
2^N product basis and serves as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import _kernels
from .collective import (
    CollectiveBasis,
    build_jz,
    expi_hermitian,
    product_rotation,
    product_site_sz_diag,
    product_sz_total_diag,
    rotation,
)
from .errors import CapacityError, ConfigError, DomainError

# Full-basis propagators need a dense 2^(N+1) eigendecomposition.
FULL_MAX_SPINS = 12

ANCILLA_SZ = np.diag([0.5, -0.5])
ANCILLA_SX = np.array([[0.0, 0.5], [0.5, 0.0]])

BACKENDS = ("collective", "full")
PROPAGATOR_SIGNS = ("minus", "plus")


@dataclass(frozen=True)
class CentralSpinConfig:
    """Parameters of one stroboscopic central-spin run.

    coupling may be a single float (uniform, both backends) or a per-spin
    sequence (full backend only).  readout selects the reported series:
    "collective" for <Jz>/J, or a bath-spin index for 2<I^z_k>; None picks
    the backend's natural default (collective readout on the collective
    backend, spin 0 on the full backend).
    """

    n_spins: int
    coupling: float | tuple[float, ...]
    drive: float
    interaction_time: float
    rotation_error: float
    n_periods: int
    backend: str = "collective"
    readout: str | int | None = None
    ancilla_init: tuple[complex, complex] = (1.0 + 0.0j, 0.0 + 0.0j)
    propagator_sign: str = "minus"

    def __post_init__(self):
        if self.n_spins < 1:
            raise ConfigError("n_spins must be at least 1")
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}")
        if self.propagator_sign not in PROPAGATOR_SIGNS:
            raise ConfigError(f"propagator_sign must be one of {PROPAGATOR_SIGNS}")
        if not 0.0 <= self.rotation_error < np.pi:
            raise ConfigError("rotation_error must lie in [0, pi)")
        if self.interaction_time < 0.0:
            raise ConfigError("interaction_time must be non-negative")
        if self.n_periods < 2:
            raise ConfigError("n_periods must be at least 2")
        if self.n_periods % 2 != 0:
            raise ConfigError("n_periods must be even")
        if isinstance(self.coupling, (list, tuple, np.ndarray)):
            object.__setattr__(self, "coupling", tuple(float(g) for g in self.coupling))
            if len(self.coupling) != self.n_spins:
                raise ConfigError("per-spin coupling list must have n_spins entries")
            if self.backend == "collective" and not self._is_uniform():
                raise ConfigError(
                    "collective backend requires a uniform coupling; "
                    "use backend='full' for per-spin values"
                )
        if isinstance(self.readout, int):
            if not 0 <= self.readout < self.n_spins:
                raise ConfigError("readout spin index out of range")
        elif self.readout not in (None, "collective"):
            raise ConfigError("readout must be 'collective' or a spin index")
        norm = abs(self.ancilla_init[0]) ** 2 + abs(self.ancilla_init[1]) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError("ancilla_init must be normalized")

    def _is_uniform(self) -> bool:
        if not isinstance(self.coupling, tuple):
            return True
        return all(g == self.coupling[0] for g in self.coupling)

    def uniform_coupling(self) -> float:
        if isinstance(self.coupling, tuple):
            if not self._is_uniform():
                raise ConfigError("operation requires a uniform coupling")
            return float(self.coupling[0])
        return float(self.coupling)

    def coupling_list(self) -> np.ndarray:
        if isinstance(self.coupling, tuple):
            return np.array(self.coupling, dtype=np.float64)
        return np.full(self.n_spins, float(self.coupling))

    def resolved_readout(self) -> str | int:
        if self.readout is not None:
            return self.readout
        return "collective" if self.backend == "collective" else 0

    @property
    def time_sign(self) -> float:
        """Sign multiplying i*t*H in the propagator exponent."""
        return -1.0 if self.propagator_sign == "minus" else 1.0


@dataclass
class FloquetResult:
    """Stroboscopic record of one run; entry n is taken after n full periods."""

    magnetization: np.ndarray
    ancilla_z: np.ndarray | None
    final_state: np.ndarray | None
    config: object
    extras: dict = field(default_factory=dict)


def _check_full_capacity(n_spins: int):
    if n_spins > FULL_MAX_SPINS:
        raise CapacityError(
            f"full backend limited to {FULL_MAX_SPINS} spins, got {n_spins}"
        )


def build_hamiltonian(config: CentralSpinConfig) -> np.ndarray:
    """Static Hamiltonian on ancilla (x) bath, in the configured backend."""
    if config.backend == "collective":
        basis = CollectiveBasis(config.n_spins)
        g = config.uniform_coupling()
        bath_z = g * build_jz(basis)
        eye = np.eye(basis.dim)
    else:
        _check_full_capacity(config.n_spins)
        gs = config.coupling_list()
        diag = np.zeros(2 ** config.n_spins)
        for site, g in enumerate(gs):
            diag += g * product_site_sz_diag(config.n_spins, site)
        bath_z = np.diag(diag)
        eye = np.eye(bath_z.shape[0])
    return np.kron(ANCILLA_SZ, bath_z) + config.drive * np.kron(ANCILLA_SX, eye)


def bath_rotation(config: CentralSpinConfig, theta: float | None = None) -> np.ndarray:
    """Per-period bath rotation exp(i*theta*sum_k I^x_k), ancilla untouched."""
    if theta is None:
        theta = np.pi - config.rotation_error
    if config.backend == "collective":
        return rotation(CollectiveBasis(config.n_spins), theta)
    _check_full_capacity(config.n_spins)
    return product_rotation(config.n_spins, theta)


def _collective_propagator_blocks(n_spins: int, g: float, drive: float,
                                  phase: float) -> np.ndarray:
    """exp(i*phase*H) assembled from per-level 2x2 ancilla blocks.

    Uniform coupling keeps H block diagonal over bath levels m:
    each block is (g*m)*S^z + drive*S^x, exponentiated analytically.
    O(N) instead of O(N^3); keeps N ~ 10^3 sweeps in the seconds range.
    """
    m = CollectiveBasis(n_spins).m_labels
    fz = 0.5 * g * m
    fx = 0.5 * drive
    omega = np.hypot(fz, fx)
    half = np.abs(phase) * omega
    # sin(x)/x stays finite at omega = 0 (np.sinc is sin(pi x)/(pi x))
    sinc = np.abs(phase) * np.sinc(half / np.pi)
    sgn = np.sign(phase) if phase != 0 else 1.0
    dim = m.size
    out = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    diag_up = np.cos(half) + 1j * sgn * sinc * fz
    off = 1j * sgn * sinc * fx
    idx = np.arange(dim)
    out[idx, idx] = diag_up
    out[dim + idx, dim + idx] = np.conj(diag_up)
    out[idx, dim + idx] = off
    out[dim + idx, idx] = off
    return out


@lru_cache(maxsize=4)
def _propagator_cached(n_spins, coupling, drive, tau, backend, time_sign):
    if backend == "collective" and not isinstance(coupling, tuple):
        return _collective_propagator_blocks(n_spins, coupling, drive, time_sign * tau)
    config = CentralSpinConfig(
        n_spins=n_spins,
        coupling=coupling,
        drive=drive,
        interaction_time=tau,
        rotation_error=0.0,
        n_periods=2,
        backend=backend,
    )
    h = build_hamiltonian(config)
    return expi_hermitian(h, time_sign * tau)


def propagator(config: CentralSpinConfig) -> np.ndarray:
    """Interaction propagator exp(-i*tau*H) (or +i with propagator_sign='plus')."""
    return _propagator_cached(
        config.n_spins,
        config.coupling,
        config.drive,
        config.interaction_time,
        config.backend,
        config.time_sign,
    )


def floquet_operator(config: CentralSpinConfig) -> np.ndarray:
    """One full period: bath rotation first, then the interaction propagator."""
    prop = propagator(config)
    rot = bath_rotation(config)
    d = rot.shape[0]
    out = np.empty_like(prop)
    for a in range(2):  # right-multiply by 1_anc (x) rot, block by block
        out[:, a * d:(a + 1) * d] = prop[:, a * d:(a + 1) * d] @ rot
    return out


def _bath_dim(config: CentralSpinConfig) -> int:
    if config.backend == "collective":
        return config.n_spins + 1
    return 2 ** config.n_spins


def _initial_state(config: CentralSpinConfig) -> np.ndarray:
    d = _bath_dim(config)
    bath = np.zeros(d, dtype=np.complex128)
    bath[0] = 1.0  # fully polarized m = +J (all spins up)
    anc = np.array(config.ancilla_init, dtype=np.complex128)
    return np.kron(anc, bath)


def _magnetization_weights(config: CentralSpinConfig) -> np.ndarray:
    readout = config.resolved_readout()
    n = config.n_spins
    if config.backend == "collective":
        # On symmetric states a single-spin readout equals the collective one,
        # so both options share the same weights here.
        basis = CollectiveBasis(n)
        w = basis.m_labels / basis.total_spin
    elif readout == "collective":
        w = product_sz_total_diag(n) / (n / 2.0)
    else:
        w = 2.0 * product_site_sz_diag(n, int(readout))
    return np.concatenate([w, w])


def _ancilla_weights(config: CentralSpinConfig) -> np.ndarray:
    d = _bath_dim(config)
    return np.concatenate([np.ones(d), -np.ones(d)])


def floquet_run(config: CentralSpinConfig) -> FloquetResult:
    """Run n_periods of the protocol, recording readout after each period.

    Record n is the state after n full periods (record 0 is the initial
    state), so a perfect protocol gives magnetization (-1)^n exactly.
    """
    step = floquet_operator(config)
    psi0 = _initial_state(config)
    weights = np.vstack([_magnetization_weights(config), _ancilla_weights(config)])
    series, final = _kernels.evolve_series(step, psi0, weights, config.n_periods)
    return FloquetResult(
        magnetization=series[0],
        ancilla_z=series[1],
        final_state=final,
        config=config,
    )


# --- first-order error growth ----------------------------------------------


def linear_error_amplitude(m: float, n_periods: int, eps: float) -> float:
    """First-order per-spin mixing amplitude after n_periods faulty rotations.

    Without any interaction, each bath spin accumulates a rotation deficit of
    eps per period, so the amplitude for one designated spin to have flipped
    out of the level m grows as n_periods * eps / 2.  The leading-order value
    is independent of m.
    """
    if n_periods < 0:
        raise DomainError("n_periods must be non-negative")
    if eps < 0:
        raise DomainError("eps must be non-negative")
    return n_periods * eps / 2.0


def _state_after(config: CentralSpinConfig, n_periods: int) -> np.ndarray:
    step = floquet_operator(config)
    psi0 = _initial_state(config)
    states = _kernels.evolve_states(step, psi0, n_periods + 1)
    return states[-1]


def extracted_mixing_amplitude(config: CentralSpinConfig, n_periods: int | None = None) -> float:
    """Measured per-spin amplitude on the one-flip level after n_periods.

    In the full backend this is the overlap with the product state where only
    the readout spin is flipped; in the collective backend the equivalent
    |<J-1|psi>| / sqrt(N) (the symmetric level spreads a single flip over N
    sites).  The ancilla factor is traced out via the norm.
    """
    m_steps = config.n_periods if n_periods is None else n_periods
    psi = _state_after(config, m_steps)
    d = _bath_dim(config)
    block = psi.reshape(2, d)
    if config.backend == "collective":
        basis = CollectiveBasis(config.n_spins)
        idx = basis.m_index(basis.total_spin - 1)
        return float(np.linalg.norm(block[:, idx]) / np.sqrt(config.n_spins))
    readout = config.resolved_readout()
    site = int(readout) if isinstance(readout, int) else 0
    return float(np.linalg.norm(block[:, 1 << site]))


def first_order_mixing_factors(
    config: CentralSpinConfig, n_periods: int | None = None
) -> tuple[float, float]:
    """Growth factors of the first-order mixing out of the polarized level.

    Returns (upper, lower): the per-spin amplitudes found on the levels just
    below +J and just above -J after n_periods, divided by the rotation
    error.  Requires a uniform coupling and a small eps > 0 (the extraction
    is a finite-difference in eps; recommended eps <= 1e-3).
    """
    eps = config.rotation_error
    if eps == 0.0:
        raise DomainError("mixing factors are extracted at small eps > 0, not eps = 0")
    cfg = config if config.backend == "collective" else replace(config, backend="collective")
    cfg.uniform_coupling()  # raises on per-spin couplings
    m_steps = cfg.n_periods if n_periods is None else n_periods
    psi = _state_after(cfg, m_steps)
    basis = CollectiveBasis(cfg.n_spins)
    block = psi.reshape(2, basis.dim)
    scale = eps * np.sqrt(cfg.n_spins)
    upper = np.linalg.norm(block[:, basis.m_index(basis.total_spin - 1)]) / scale
    lower = np.linalg.norm(block[:, basis.m_index(1 - basis.total_spin)]) / scale
    return float(upper), float(lower)


# --- backend cross-validation ----------------------------------------------


@dataclass
class BackendComparison:
    max_deviation: float
    collective_series: np.ndarray
    full_series: np.ndarray


def cross_validate_backends(config: CentralSpinConfig) -> BackendComparison:
    """Run both backends on the same parameters and compare readout series.

    The collective run uses the Dicke representation; the full run uses the
    independently constructed product basis.  A uniform coupling is required
    (otherwise the symmetric subspace is not preserved).
    """
    config.uniform_coupling()
    _check_full_capacity(config.n_spins)
    res_c = floquet_run(replace(config, backend="collective"))
    res_f = floquet_run(replace(config, backend="full"))
    dev = float(np.max(np.abs(res_c.magnetization - res_f.magnetization)))
    return BackendComparison(dev, res_c.magnetization, res_f.magnetization)
