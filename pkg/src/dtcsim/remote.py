"""Two spin baths synchronized through a flip-flop-coupled ancilla pair.

H = S^z_1 sum_k g_k1 I^z_k1 + S^z_2 sum_k g_k2 I^z_k2
    + J (S^+_1 S^-_2 + S^-_1 S^+_2)

The exchange term conserves the total ancilla magnetization, so the pair
sectors {|00>}, {|01>, |10>}, {|11>} never mix.  Starting the pair in |01>
makes both ancillas effectively time dependent, which stabilizes the
subharmonic response of both baths simultaneously; |00> is an exchange
eigenstate, leaving each bath with a frozen, undriven ancilla (no
stabilization).

Hilbert-space order: ancilla pair (4) (x) bath 1 (x) bath 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .central_spin import ANCILLA_SZ, FloquetResult
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

FULL_REMOTE_MAX_DIM = 2 ** 16

ANCILLA_SPLUS = np.array([[0.0, 1.0], [0.0, 0.0]])

PAIR_STATES = ("00", "01", "10", "11")

BACKENDS = ("collective", "full")


@dataclass(frozen=True)
class RemoteConfig:
    """Parameters of one two-bath synchronization run.

    couplings holds one uniform value per bath (per-spin lists are allowed
    on the full backend).  ancilla_init is one of "00", "01", "10", "11"
    (qubit 1 first; "0" is the S^z = +1/2 state).
    """

    bath_sizes: tuple[int, int]
    couplings: tuple[float | tuple[float, ...], float | tuple[float, ...]]
    flip_flop: float
    interaction_time: float
    rotation_error: float
    n_periods: int
    ancilla_init: str = "00"
    backend: str = "collective"

    def __post_init__(self):
        object.__setattr__(self, "bath_sizes", tuple(int(n) for n in self.bath_sizes))
        if len(self.bath_sizes) != 2 or min(self.bath_sizes) < 1:
            raise ConfigError("bath_sizes must be two positive integers")
        if len(self.couplings) != 2:
            raise ConfigError("couplings must have one entry per bath")
        norm = []
        for g, n in zip(self.couplings, self.bath_sizes):
            if isinstance(g, (list, tuple, np.ndarray)):
                g = tuple(float(x) for x in g)
                if len(g) != n:
                    raise ConfigError("per-spin coupling list must match its bath size")
                if self.backend == "collective" and any(x != g[0] for x in g):
                    raise ConfigError("collective backend requires uniform couplings")
            else:
                g = float(g)
            norm.append(g)
        object.__setattr__(self, "couplings", tuple(norm))
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}")
        if not 0.0 <= self.rotation_error < np.pi:
            raise ConfigError("rotation_error must lie in [0, pi)")
        if self.interaction_time < 0:
            raise ConfigError("interaction_time must be non-negative")
        if self.n_periods < 2:
            raise ConfigError("n_periods must be at least 2")
        if self.n_periods % 2 != 0:
            raise ConfigError("n_periods must be even")
        if self.ancilla_init not in PAIR_STATES:
            raise ConfigError(f"ancilla_init must be one of {PAIR_STATES}")

    def uniform_coupling(self, bath: int) -> float:
        g = self.couplings[bath]
        if isinstance(g, tuple):
            if any(x != g[0] for x in g):
                raise ConfigError("operation requires uniform couplings")
            return float(g[0])
        return float(g)

    def coupling_list(self, bath: int) -> np.ndarray:
        g = self.couplings[bath]
        if isinstance(g, tuple):
            return np.array(g, dtype=np.float64)
        return np.full(self.bath_sizes[bath], float(g))


def _bath_dims(config: RemoteConfig) -> tuple[int, int]:
    if config.backend == "collective":
        return config.bath_sizes[0] + 1, config.bath_sizes[1] + 1
    return 2 ** config.bath_sizes[0], 2 ** config.bath_sizes[1]


def _bath_z_diag(config: RemoteConfig, bath: int) -> np.ndarray:
    """Diagonal of sum_k g_k I^z_k for one bath, in its own factor."""
    n = config.bath_sizes[bath]
    if config.backend == "collective":
        return config.uniform_coupling(bath) * CollectiveBasis(n).m_labels
    gs = config.coupling_list(bath)
    diag = np.zeros(2 ** n)
    for site, g in enumerate(gs):
        diag += g * product_site_sz_diag(n, site)
    return diag


def build_hamiltonian_remote(config: RemoteConfig) -> np.ndarray:
    d1, d2 = _bath_dims(config)
    dim = 4 * d1 * d2
    if dim > FULL_REMOTE_MAX_DIM:
        raise CapacityError(
            f"joint dimension {dim} exceeds the remote-model limit {FULL_REMOTE_MAX_DIM}"
        )
    sz1 = np.kron(ANCILLA_SZ, np.eye(2))
    sz2 = np.kron(np.eye(2), ANCILLA_SZ)
    exchange = np.kron(ANCILLA_SPLUS, ANCILLA_SPLUS.T)
    exchange = exchange + exchange.T
    z1 = np.kron(_bath_z_diag(config, 0), np.ones(d2))
    z2 = np.kron(np.ones(d1), _bath_z_diag(config, 1))
    h = np.kron(sz1, np.diag(z1)) + np.kron(sz2, np.diag(z2))
    h += config.flip_flop * np.kron(exchange, np.eye(d1 * d2))
    return h


def _pair_state(label: str) -> np.ndarray:
    v0 = np.array([1.0, 0.0], dtype=np.complex128)
    v1 = np.array([0.0, 1.0], dtype=np.complex128)
    single = {"0": v0, "1": v1}
    return np.kron(single[label[0]], single[label[1]])


def _initial_state(config: RemoteConfig) -> np.ndarray:
    d1, d2 = _bath_dims(config)
    bath1 = np.zeros(d1, dtype=np.complex128)
    bath1[0] = 1.0
    bath2 = np.zeros(d2, dtype=np.complex128)
    bath2[0] = 1.0
    return np.kron(_pair_state(config.ancilla_init), np.kron(bath1, bath2))


def _bath_rotations(config: RemoteConfig) -> np.ndarray:
    theta = np.pi - config.rotation_error
    if config.backend == "collective":
        r1 = rotation(CollectiveBasis(config.bath_sizes[0]), theta)
        r2 = rotation(CollectiveBasis(config.bath_sizes[1]), theta)
    else:
        r1 = product_rotation(config.bath_sizes[0], theta)
        r2 = product_rotation(config.bath_sizes[1], theta)
    return np.kron(r1, r2)


def floquet_operator_remote(config: RemoteConfig) -> np.ndarray:
    """One period: rotate both baths by pi - eps, then evolve exp(-i tau H)."""
    h = build_hamiltonian_remote(config)
    prop = expi_hermitian(h, -config.interaction_time)
    rot = _bath_rotations(config)
    d = rot.shape[0]
    out = np.empty_like(prop)
    for a in range(4):
        out[:, a * d:(a + 1) * d] = prop[:, a * d:(a + 1) * d] @ rot
    return out


def _remote_weights(config: RemoteConfig) -> np.ndarray:
    d1, d2 = _bath_dims(config)
    if config.backend == "collective":
        w1 = CollectiveBasis(config.bath_sizes[0]).m_labels / (config.bath_sizes[0] / 2.0)
        w2 = CollectiveBasis(config.bath_sizes[1]).m_labels / (config.bath_sizes[1] / 2.0)
    else:
        w1 = product_sz_total_diag(config.bath_sizes[0]) / (config.bath_sizes[0] / 2.0)
        w2 = product_sz_total_diag(config.bath_sizes[1]) / (config.bath_sizes[1] / 2.0)
    mag1 = np.tile(np.kron(w1, np.ones(d2)), 4)
    mag2 = np.tile(np.kron(np.ones(d1), w2), 4)
    anc1 = np.repeat([1.0, 1.0, -1.0, -1.0], d1 * d2)
    anc2 = np.repeat([1.0, -1.0, 1.0, -1.0], d1 * d2)
    return np.vstack([mag1, mag2, anc1, anc2])


def floquet_run_remote(config: RemoteConfig) -> tuple[FloquetResult, FloquetResult]:
    """Run the two-bath protocol; one FloquetResult per bath (the joint
    final state is attached to both)."""
    step = floquet_operator_remote(config)
    psi0 = _initial_state(config)
    series, final = _kernels.evolve_series(step, psi0, _remote_weights(config), config.n_periods)
    res1 = FloquetResult(magnetization=series[0], ancilla_z=series[2],
                         final_state=final, config=config)
    res2 = FloquetResult(magnetization=series[1], ancilla_z=series[3],
                         final_state=final, config=config)
    return res1, res2


def ancilla_sector_populations(state: np.ndarray, config: RemoteConfig) -> np.ndarray:
    """Populations of the total-ancilla-magnetization sectors (+1, 0, -1)."""
    d1, d2 = _bath_dims(config)
    blocks = np.abs(state.reshape(4, d1 * d2)) ** 2
    per_pair = blocks.sum(axis=1)
    return np.array([per_pair[0], per_pair[1] + per_pair[2], per_pair[3]])


def sync_metric(result_1: FloquetResult, result_2: FloquetResult) -> float:
    """Pearson correlation of the two bath magnetization series."""
    s1 = np.asarray(result_1.magnetization, dtype=np.float64)
    s2 = np.asarray(result_2.magnetization, dtype=np.float64)
    if s1.shape != s2.shape:
        raise DomainError("series must have equal length")
    if np.std(s1) == 0.0 or np.std(s2) == 0.0:
        raise DomainError("sync metric undefined for zero-variance series")
    return float(np.corrcoef(s1, s2)[0, 1])
