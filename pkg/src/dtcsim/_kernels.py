"""Stroboscopic evolution kernels.

The per-period hot loop (a dense matrix-vector product plus diagonal
expectation values) is compiled with numba when available.  Set
``DTCSIM_PURE_NUMPY=1`` to force the plain numpy path; both paths share the
same source so they compute identical quantities.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    numba = None
    HAS_NUMBA = False

PURE_NUMPY = os.environ.get("DTCSIM_PURE_NUMPY", "") == "1"


def _evolve_series_py(step, psi, weights, n_records):
    n_obs = weights.shape[0]
    series = np.empty((n_obs, n_records))
    for n in range(n_records):
        prob = psi.real ** 2 + psi.imag ** 2
        series[:, n] = weights @ prob
        if n + 1 < n_records:
            psi = step @ psi
    return series, psi


def _evolve_states_py(step, psi, n_records):
    states = np.empty((n_records, psi.shape[0]), dtype=np.complex128)
    states[0] = psi
    for n in range(1, n_records):
        states[n] = step @ states[n - 1]
    return states


if HAS_NUMBA:
    _evolve_series_nb = numba.njit(cache=True)(_evolve_series_py)
    _evolve_states_nb = numba.njit(cache=True)(_evolve_states_py)


def use_numba() -> bool:
    return HAS_NUMBA and not PURE_NUMPY


def _as_c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def evolve_series(step, psi0, weights, n_records):
    """Apply `step` per period, recording diagonal expectation values.

    `weights` holds one row per observable; record n is taken after n
    applications of `step` (record 0 is the initial state).  Returns the
    (n_obs, n_records) series and the state at the last record.
    """
    step = _as_c128(step)
    psi0 = _as_c128(psi0)
    weights = np.ascontiguousarray(np.atleast_2d(weights), dtype=np.float64)
    if use_numba():
        return _evolve_series_nb(step, psi0, weights, n_records)
    return _evolve_series_py(step, psi0, weights, n_records)


def evolve_states(step, psi0, n_records):
    """Like evolve_series but keeps every stroboscopic state (records x dim)."""
    step = _as_c128(step)
    psi0 = _as_c128(psi0)
    if use_numba():
        return _evolve_states_nb(step, psi0, n_records)
    return _evolve_states_py(step, psi0, n_records)
