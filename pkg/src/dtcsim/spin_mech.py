"""Spin ensemble coupled to one mechanical mode.

H = omega0 * a^dag a + g * Jz (x) (a + a^dag): the mode mediates an
effective all-to-all Ising interaction among the spins.  Because H is block
diagonal over the collective levels m, the propagator has an exact closed
form per block: a collective-phase factor times a conditional displacement
of the mode.  The closed form is checked element by element against a
brute-force matrix exponential of the full spin (x) Fock Hamiltonian.

Conventions: the closed-form kernel is taken in the frame co-rotating with
the free mode, i.e. it equals exp(+i*t*omega0*n) * exp(-i*t*H).  At the
decoupling times omega0*t = 2*pi*k the two frames coincide and the mode
returns exactly to its initial state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import factorial

import numpy as np

from . import _kernels
from .central_spin import FloquetResult
from .collective import CollectiveBasis, build_jz, expi_hermitian, rotation
from .errors import CapacityError, ConfigError, CutoffError, DomainError

# Dense expm of the joint spin (x) Fock space beyond this is impractical.
BRUTE_FORCE_MAX_DIM = 4096
# Hard ceiling for the automatic cutoff doubling.
FOCK_CUTOFF_CAP = 4096


@dataclass(frozen=True)
class SpinMechConfig:
    """Parameters of one stroboscopic spin-mechanical run.

    boson_init is "vacuum" or a complex coherent amplitude; boson_reset
    replaces the mode by a fresh copy of boson_init after every period
    (density-matrix evolution, for sensitivity studies).
    """

    n_spins: int
    coupling: float
    mode_frequency: float
    interaction_time: float
    rotation_error: float
    n_periods: int
    fock_cutoff: int = 32
    boson_init: str | complex = "vacuum"
    boson_reset: bool = False

    def __post_init__(self):
        if self.n_spins < 1:
            raise ConfigError("n_spins must be at least 1")
        if self.mode_frequency <= 0:
            raise ConfigError("mode_frequency must be positive")
        if self.interaction_time < 0:
            raise ConfigError("interaction_time must be non-negative")
        if not 0.0 <= self.rotation_error < np.pi:
            raise ConfigError("rotation_error must lie in [0, pi)")
        if self.n_periods < 2:
            raise ConfigError("n_periods must be at least 2")
        if self.n_periods % 2 != 0:
            raise ConfigError("n_periods must be even")
        if self.fock_cutoff < 4:
            raise ConfigError("fock_cutoff must be at least 4")
        if isinstance(self.boson_init, str) and self.boson_init != "vacuum":
            raise ConfigError("boson_init must be 'vacuum' or a coherent amplitude")

    def init_amplitude(self) -> complex:
        return 0j if self.boson_init == "vacuum" else complex(self.boson_init)


def interaction_phase(mode_frequency: float, t: float) -> float:
    """f(t) = (1 - sinc(omega0 t)) / omega0 with the unnormalized sinc.

    The quadratic collective phase accumulated over one interaction window
    is t * f(t) * (g m)^2 per level m.
    """
    if mode_frequency <= 0:
        raise DomainError("mode_frequency must be positive")
    # np.sinc is sin(pi x)/(pi x); rescale to the unnormalized convention.
    return (1.0 - np.sinc(mode_frequency * t / np.pi)) / mode_frequency


def displacement_amplitude(mode_frequency: float, t: float) -> complex:
    """alpha0(t) = (1 - exp(i omega0 t)) / omega0, the per-unit-(g m) mode
    displacement; zero exactly at the decoupling times omega0 t = 2 pi k."""
    if mode_frequency <= 0:
        raise DomainError("mode_frequency must be positive")
    return (1.0 - np.exp(1j * mode_frequency * t)) / mode_frequency


def annihilation(fock_cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, fock_cutoff + 1)), 1)


def number_diag(fock_cutoff: int) -> np.ndarray:
    return np.arange(fock_cutoff + 1, dtype=np.float64)


def displacement_operator(beta: complex, fock_cutoff: int) -> np.ndarray:
    """D(beta) = exp(beta a^dag - beta* a) on the truncated Fock space.

    Exponentiated through the Hermitian eigendecomposition of the truncated
    generator, so the result is exactly unitary at any cutoff (truncation
    shows up as deviation from the infinite-dimensional matrix elements near
    the cutoff, not as norm loss).
    """
    a = annihilation(fock_cutoff)
    generator = beta * a.conj().T - np.conj(beta) * a
    return expi_hermitian(-1j * generator, 1.0)


def coherent_state(alpha: complex, fock_cutoff: int) -> np.ndarray:
    state = np.zeros(fock_cutoff + 1, dtype=np.complex128)
    state[0] = 1.0
    for n in range(1, fock_cutoff + 1):
        state[n] = state[n - 1] * alpha / np.sqrt(n)
    return state / np.linalg.norm(state)


def max_branch_displacement(config: SpinMechConfig) -> float:
    """Largest |g m alpha0| over the collective levels, plus any initial
    coherent offset; the cutoff adequacy rule bounds its square by n_max/4."""
    alpha0 = displacement_amplitude(config.mode_frequency, config.interaction_time)
    branch = abs(config.coupling) * (config.n_spins / 2.0) * abs(alpha0)
    return branch + abs(config.init_amplitude())


def cutoff_is_adequate(config: SpinMechConfig) -> bool:
    return max_branch_displacement(config) ** 2 <= config.fock_cutoff / 4.0


def resolve_cutoff(config: SpinMechConfig) -> SpinMechConfig:
    """Double fock_cutoff until the adequacy rule holds (or give up)."""
    cfg = config
    while not cutoff_is_adequate(cfg):
        if cfg.fock_cutoff * 2 > FOCK_CUTOFF_CAP:
            raise CutoffError(
                f"fock_cutoff {cfg.fock_cutoff} inadequate for branch displacement "
                f"{max_branch_displacement(cfg):.3f} and the cap is {FOCK_CUTOFF_CAP}"
            )
        cfg = replace(cfg, fock_cutoff=cfg.fock_cutoff * 2)
    return cfg


def closed_form_unitary(config: SpinMechConfig) -> np.ndarray:
    """Block-diagonal interaction kernel in the co-rotating mode frame.

    Block m carries the collective phase exp(+i t f(t) (g m)^2) times the
    conditional displacement D(g m alpha0).  Equals
    exp(+i t omega0 n) exp(-i t H) on the truncated space.
    """
    if not cutoff_is_adequate(config):
        raise CutoffError(
            f"fock_cutoff {config.fock_cutoff} too small for branch displacement "
            f"{max_branch_displacement(config):.3f}; raise it or use resolve_cutoff"
        )
    basis = CollectiveBasis(config.n_spins)
    t = config.interaction_time
    f = interaction_phase(config.mode_frequency, t)
    alpha0 = displacement_amplitude(config.mode_frequency, t)
    nf = config.fock_cutoff + 1
    out = np.zeros((basis.dim * nf, basis.dim * nf), dtype=np.complex128)
    for i, m in enumerate(basis.m_labels):
        lam = config.coupling * m
        block = np.exp(1j * t * f * lam ** 2) * displacement_operator(lam * alpha0, config.fock_cutoff)
        out[i * nf:(i + 1) * nf, i * nf:(i + 1) * nf] = block
    return out


def build_hamiltonian_mech(config: SpinMechConfig) -> np.ndarray:
    basis = CollectiveBasis(config.n_spins)
    nf = config.fock_cutoff + 1
    a = annihilation(config.fock_cutoff)
    h_mode = config.mode_frequency * np.diag(number_diag(config.fock_cutoff))
    h = np.kron(np.eye(basis.dim), h_mode)
    h += config.coupling * np.kron(build_jz(basis), a + a.conj().T)
    return h


def brute_force_unitary(config: SpinMechConfig) -> np.ndarray:
    """exp(-i t H) on the truncated joint space, via eigendecomposition.

    This is the oracle route: it never uses the closed-form structure.
    """
    dim = (config.n_spins + 1) * (config.fock_cutoff + 1)
    if dim > BRUTE_FORCE_MAX_DIM:
        raise CapacityError(
            f"joint dimension {dim} exceeds the brute-force limit {BRUTE_FORCE_MAX_DIM}"
        )
    h = build_hamiltonian_mech(config)
    return expi_hermitian(h, -config.interaction_time)


def mode_frame_phases(config: SpinMechConfig) -> np.ndarray:
    """Diagonal of exp(+i t omega0 n) on the joint space."""
    phases = np.exp(1j * config.interaction_time * config.mode_frequency
                    * number_diag(config.fock_cutoff))
    return np.tile(phases, config.n_spins + 1)


def closed_vs_brute_deviation(config: SpinMechConfig, max_occupation: int) -> float:
    """Max elementwise deviation between the closed form and the frame-adjusted
    brute force, restricted to Fock occupations <= max_occupation on both sides."""
    closed = closed_form_unitary(config)
    brute = mode_frame_phases(config)[:, None] * brute_force_unitary(config)
    nf = config.fock_cutoff + 1
    keep = np.tile(np.arange(nf) <= max_occupation, config.n_spins + 1)
    diff = closed[np.ix_(keep, keep)] - brute[np.ix_(keep, keep)]
    return float(np.max(np.abs(diff)))


# --- stroboscopic protocol ---------------------------------------------------


def _initial_joint_state(config: SpinMechConfig) -> np.ndarray:
    basis = CollectiveBasis(config.n_spins)
    spin = basis.level_state(basis.total_spin)
    mode = coherent_state(config.init_amplitude(), config.fock_cutoff)
    return np.kron(spin, mode)


def _joint_step(config: SpinMechConfig, kernel: str = "closed") -> np.ndarray:
    if kernel == "closed":
        # undo the co-rotating frame so both kernels iterate the same lab
        # propagator exp(-i t H); at the decoupling times omega0 t = 2 pi k
        # the frame factor is the identity
        interaction = mode_frame_phases(config).conj()[:, None] * closed_form_unitary(config)
    elif kernel == "brute":
        interaction = brute_force_unitary(config)
    else:
        raise ValueError("kernel must be 'closed' or 'brute'")
    rot = rotation(CollectiveBasis(config.n_spins), np.pi - config.rotation_error)
    nf = config.fock_cutoff + 1
    step = np.empty_like(interaction)
    # right-multiply by rot (x) 1_mode without forming the Kronecker product
    blocks = interaction.reshape(interaction.shape[0], config.n_spins + 1, nf)
    step_blocks = np.einsum("dmn,mk->dkn", blocks, rot)
    step[:] = step_blocks.reshape(interaction.shape)
    return step


def _mech_weights(config: SpinMechConfig) -> np.ndarray:
    basis = CollectiveBasis(config.n_spins)
    nf = config.fock_cutoff + 1
    mag = np.repeat(basis.m_labels / basis.total_spin, nf)
    occ = np.tile(number_diag(config.fock_cutoff), basis.dim)
    return np.vstack([mag, occ])


def floquet_run_mech(config: SpinMechConfig, kernel: str = "closed") -> FloquetResult:
    """Rotate the spins by pi - eps, then apply the interaction kernel, once
    per period; record <Jz>/J after each period.  The mode is traced out of
    the readout (Jz is diagonal, so no reduced density matrix is needed).

    The Fock cutoff is raised automatically (doubling) until adequate; the
    config echoed on the result carries the cutoff actually used.  extras
    holds the mode occupation series.
    """
    config = resolve_cutoff(config)
    if config.boson_reset:
        return _run_with_reset(config, kernel)
    step = _joint_step(config, kernel)
    psi0 = _initial_joint_state(config)
    series, final = _kernels.evolve_series(step, psi0, _mech_weights(config), config.n_periods)
    return FloquetResult(
        magnetization=series[0],
        ancilla_z=None,
        final_state=final,
        config=config,
        extras={"mode_occupation": series[1]},
    )


def _run_with_reset(config: SpinMechConfig, kernel: str) -> FloquetResult:
    basis = CollectiveBasis(config.n_spins)
    nf = config.fock_cutoff + 1
    step = _joint_step(config, kernel)
    mode0 = coherent_state(config.init_amplitude(), config.fock_cutoff)
    rho_spin = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    rho_spin[0, 0] = 1.0
    mag_w = basis.m_labels / basis.total_spin
    occ0 = abs(config.init_amplitude()) ** 2
    mags = np.empty(config.n_periods)
    occs = np.full(config.n_periods, occ0)
    for n in range(config.n_periods):
        mags[n] = float(np.sum(mag_w * np.real(np.diag(rho_spin))))
        if n + 1 == config.n_periods:
            break
        joint = np.kron(rho_spin, np.outer(mode0, mode0.conj()))
        joint = step @ joint @ step.conj().T
        reshaped = joint.reshape(basis.dim, nf, basis.dim, nf)
        occs[n + 1] = float(np.real(np.einsum("inin,n->", reshaped, number_diag(config.fock_cutoff))))
        rho_spin = np.trace(reshaped, axis1=1, axis2=3)
    return FloquetResult(
        magnetization=mags,
        ancilla_z=None,
        final_state=None,
        config=config,
        extras={"mode_occupation": occs},
    )


def reduced_spin_density(state: np.ndarray, n_spins: int, fock_cutoff: int) -> np.ndarray:
    """Trace the mode out of a joint pure state."""
    block = state.reshape(n_spins + 1, fock_cutoff + 1)
    return block @ block.conj().T


# --- first-order leakage ------------------------------------------------------


def predicted_leakage_amplitude(
    n_spins: int, coupling: float, t: float, n_periods: int, eps: float
) -> float:
    """Heuristic first-order leakage amplitude after n_periods:
    eps * sin^2(N g t (1 + M)) / sin^2(N g t).

    The expression is indeterminate (0/0) where sin(N g t) vanishes; those
    points must be probed numerically instead.
    """
    arg = n_spins * coupling * t
    denom = np.sin(arg)
    if abs(denom) < 1e-9:
        raise DomainError(
            "leakage formula is indeterminate (0/0) at N*g*t = k*pi; "
            "probe the protocol numerically near this point"
        )
    if n_periods < 0:
        raise DomainError("n_periods must be non-negative")
    return float(eps * np.sin(arg * (1 + n_periods)) ** 2 / denom ** 2)


def extracted_leakage_series(
    config: SpinMechConfig, periods: np.ndarray, kernel: str = "brute"
) -> np.ndarray:
    """Per-spin first-order mixing amplitude |<J-1|psi(M)>|/sqrt(N) at the
    requested period counts, from direct evolution (mode traced via norm)."""
    config = resolve_cutoff(config)
    periods = np.asarray(periods, dtype=int)
    step = _joint_step(config, kernel)
    psi0 = _initial_joint_state(config)
    states = _kernels.evolve_states(step, psi0, int(periods.max()) + 1)
    basis = CollectiveBasis(config.n_spins)
    idx = basis.m_index(basis.total_spin - 1)
    nf = config.fock_cutoff + 1
    out = np.empty(len(periods))
    for k, m_count in enumerate(periods):
        block = states[m_count].reshape(basis.dim, nf)
        out[k] = np.linalg.norm(block[idx]) / np.sqrt(config.n_spins)
    return out
