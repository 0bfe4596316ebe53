"""Collective spin-J algebra and product-basis embeddings.

Uniform couplings keep the dynamics inside the symmetric (maximal-J)
subspace of N spin-1/2 particles, so the bath can be represented in the
N+1 dimensional collective basis instead of the 2^N product basis.  This
module provides both representations plus the exact embedding between
them; the two are built through independent routes on purpose, so they can
cross-validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import CapacityError

# 2^N state vectors get large quickly; beyond this the embedding refuses.
EMBED_MAX_SPINS = 14


@dataclass(frozen=True)
class CollectiveBasis:
    """Symmetric subspace of n_spins spin-1/2 particles (total spin J = N/2).

    Basis states are labelled by the magnetization quantum number m, ordered
    descending from +J to -J.  All public output refers to states by m, never
    by raw index.
    """

    n_spins: int

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be at least 1")

    @property
    def total_spin(self) -> float:
        return self.n_spins / 2.0

    @property
    def dim(self) -> int:
        return self.n_spins + 1

    @property
    def m_labels(self) -> np.ndarray:
        j = self.total_spin
        return j - np.arange(self.dim)

    def m_index(self, m: float) -> int:
        idx = int(round(self.total_spin - m))
        if idx < 0 or idx >= self.dim or abs(self.m_labels[idx] - m) > 1e-12:
            raise ValueError(f"m={m} is not a level of J={self.total_spin}")
        return idx

    def level_state(self, m: float) -> np.ndarray:
        """Unit vector on the collective level with magnetization m."""
        state = np.zeros(self.dim, dtype=np.complex128)
        state[self.m_index(m)] = 1.0
        return state


def build_jz(basis: CollectiveBasis) -> np.ndarray:
    return np.diag(basis.m_labels.astype(np.float64))


def build_jplus(basis: CollectiveBasis) -> np.ndarray:
    j = basis.total_spin
    m = basis.m_labels[1:]  # J+ maps level m to m+1
    amp = np.sqrt(j * (j + 1) - m * (m + 1))
    return np.diag(amp, 1)


def build_jx(basis: CollectiveBasis) -> np.ndarray:
    jp = build_jplus(basis)
    return (jp + jp.T) / 2.0


def expi_hermitian(matrix: np.ndarray, coefficient: float | complex = 1.0) -> np.ndarray:
    """exp(1j * coefficient * matrix) for Hermitian `matrix`.

    Uses the eigendecomposition, so the result is unitary to rounding
    accuracy regardless of the norm of the exponent (never a truncated
    series).
    """
    w, v = np.linalg.eigh(matrix)
    phases = np.exp(1j * coefficient * w)
    return (v * phases) @ v.conj().T


@lru_cache(maxsize=16)
def _jx_eigensystem(n_spins: int):
    jx = build_jx(CollectiveBasis(n_spins))
    w, v = np.linalg.eigh(jx)
    return w, v


def rotation(basis: CollectiveBasis, theta: float) -> np.ndarray:
    """Collective rotation exp(i * theta * Jx) about the x axis."""
    w, v = _jx_eigensystem(basis.n_spins)
    phases = np.exp(1j * theta * w)
    return (v * phases) @ v.conj().T


# --- product (full) basis -------------------------------------------------
#
# Product-basis index convention: bit k of the index set means spin k points
# down.  Index 0 is the all-up state, which embeds the m = +J level.


def _check_embeddable(n_spins: int):
    if n_spins > EMBED_MAX_SPINS:
        raise CapacityError(
            f"product basis limited to {EMBED_MAX_SPINS} spins, got {n_spins}"
        )


@lru_cache(maxsize=16)
def down_counts(n_spins: int) -> np.ndarray:
    """Number of down spins for every product-basis index."""
    _check_embeddable(n_spins)
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n_spins):
        counts = np.concatenate([counts, counts + 1])
    return counts


def product_sz_total_diag(n_spins: int) -> np.ndarray:
    """Diagonal of sum_k I^z_k in the product basis."""
    return (n_spins - 2 * down_counts(n_spins)) / 2.0


def product_site_sz_diag(n_spins: int, site: int) -> np.ndarray:
    """Diagonal of I^z at one site (+1/2 up, -1/2 down)."""
    _check_embeddable(n_spins)
    idx = np.arange(2 ** n_spins)
    down = (idx >> site) & 1
    return 0.5 - down.astype(np.float64)


def product_rotation(n_spins: int, theta: float) -> np.ndarray:
    """exp(i * theta * sum_k I^x_k): a Kronecker power of the 2x2 rotation.

    Built from the analytic single-spin rotation, independently of the
    collective route, so the two serve as oracles for each other.
    """
    _check_embeddable(n_spins)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    single = np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)
    full = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n_spins):
        full = np.kron(full, single)
    return full


def embed_full(basis: CollectiveBasis, state: np.ndarray) -> np.ndarray:
    """Expand a collective-basis state into the 2^N product basis.

    Each level m is the normalized symmetric superposition of all product
    states with J - m down spins.
    """
    state = np.asarray(state, dtype=np.complex128)
    if state.shape != (basis.dim,):
        raise ValueError(f"state must have shape ({basis.dim},)")
    n = basis.n_spins
    _check_embeddable(n)
    counts = down_counts(n)
    norms = np.array([np.sqrt(comb(n, int(k))) for k in range(n + 1)])
    return state[counts] / norms[counts]


# --- invariant checkers ----------------------------------------------------


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def unitarity_defect(u: np.ndarray) -> float:
    eye = np.eye(u.shape[0])
    return float(np.max(np.abs(u.conj().T @ u - eye)))
