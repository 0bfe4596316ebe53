"""Timing comparison of the two evolution-kernel lanes.

The hot loop (repeated matrix-vector steps with per-period readout) ships in
two functionally identical implementations: a numba-compiled lane and a pure
numpy lane (selected globally via DTCSIM_PURE_NUMPY=1).  This script times
both on the same workloads.

Usage: python benchmarks/bench_kernels.py [--dims 64,256,1024] [--periods 256]
"""

import argparse
import time

import numpy as np

from dtcsim import _kernels


def random_workload(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    step, _ = np.linalg.qr(a)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi = (psi / np.linalg.norm(psi)).astype(np.complex128)
    weights = rng.normal(size=(2, dim))
    return step.astype(np.complex128), psi, weights


def time_lane(fn, step, psi, weights, n_periods, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(step, psi.copy(), weights, n_periods)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="64,256,1024",
                        help="comma-separated state dimensions")
    parser.add_argument("--periods", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    dims = [int(d) for d in args.dims.split(",")]

    rng = np.random.default_rng(7)
    print(f"numba available: {_kernels.HAS_NUMBA}")
    if not _kernels.HAS_NUMBA:
        print("numba lane unavailable; timing the numpy lane only")
    header = f"{'dim':>6s} {'periods':>8s} {'numpy [ms]':>12s}"
    if _kernels.HAS_NUMBA:
        header += f" {'numba [ms]':>12s} {'speedup':>8s}"
    print(header)

    for dim in dims:
        step, psi, weights = random_workload(dim, rng)
        if _kernels.HAS_NUMBA:
            # trigger compilation outside the timed region
            _kernels._evolve_series_nb(step, psi.copy(), weights, 2)
        t_py = time_lane(_kernels._evolve_series_py, step, psi, weights,
                         args.periods, args.repeats)
        row = f"{dim:6d} {args.periods:8d} {t_py * 1e3:12.2f}"
        if _kernels.HAS_NUMBA:
            t_nb = time_lane(_kernels._evolve_series_nb, step, psi, weights,
                             args.periods, args.repeats)
            row += f" {t_nb * 1e3:12.2f} {t_py / t_nb:8.2f}"
        print(row)

        s_py, _ = _kernels._evolve_series_py(step, psi.copy(), weights, 16)
        if _kernels.HAS_NUMBA:
            s_nb, _ = _kernels._evolve_series_nb(step, psi.copy(), weights, 16)
            assert np.allclose(s_py, s_nb, atol=1e-10), "lane mismatch"


if __name__ == "__main__":
    main()
