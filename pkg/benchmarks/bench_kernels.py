"""Benchmark the jit-compiled kernels against the pure-numpy fallback.

Times the two hot kernels (RK4 propagation, Jacobi eigenvalues) on
realistic workloads and prints a table with the speedup of the numba
backend over the numpy one. Both kernel modules are imported directly,
so the MOEBIUS_HARVEST_BACKEND environment variable plays no role here.
"""

import argparse
import time

import numpy as np

from moebius_harvest import Boundary, RingSpec, SystemSpec
from moebius_harvest import kernels_numba, kernels_numpy
from moebius_harvest.ring import site_hamiltonian
from moebius_harvest.system import assemble_momentum_generator

KERNELS = (("numpy", kernels_numpy), ("numba", kernels_numba))


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def rk4_workload(n_steps):
    system = SystemSpec(ring=RingSpec(8, 1.0, 0.6, Boundary.MOEBIUS),
                        photon_omega=-6.0, acceptor_energy=-6.0,
                        photon_coupling_j=1.0, acceptor_coupling_xi=1.0,
                        charge_sep_gamma=0.3, fluorescence_kappa=0.3)
    generator = assemble_momentum_generator(system)
    psi0 = np.zeros(generator.dimension, dtype=np.complex128)
    psi0[0] = 1.0
    stride = n_steps  # sample only the endpoints
    capacity = n_steps // stride + 3
    times = np.zeros(capacity)
    amps = np.zeros((capacity, generator.dimension), dtype=np.complex128)
    etas = np.zeros(capacity)
    losses = np.zeros(capacity)

    def run(kernels):
        return kernels.rk4_propagate(generator.matrix, psi0, 0.002, n_steps,
                                     stride, 0.6, 0.6, 0.0, times, amps,
                                     etas, losses)

    return run


def jacobi_workload(n_sites):
    ring = RingSpec(n_sites, 1.0, 0.3, Boundary.MOEBIUS)
    base = site_hamiltonian(ring).astype(np.complex128)
    tol = 1e-12 * float(np.linalg.norm(base))

    def run(kernels):
        return kernels.jacobi_eigenvalues(base.copy(), tol, 64)

    return run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200_000,
                        help="RK4 steps per timed run (default 200000)")
    parser.add_argument("--n-sites", type=int, default=64,
                        help="ring size for the eigensolver run (default 64)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions, best one reported")
    args = parser.parse_args(argv)

    workloads = (
        (f"rk4_propagate ({args.steps} steps, dim 10)",
         rk4_workload(args.steps)),
        (f"jacobi_eigenvalues ({args.n_sites}x{args.n_sites})",
         jacobi_workload(args.n_sites)),
    )

    print(f"{'kernel':<42} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, run in workloads:
        timings = {}
        for name, kernels in KERNELS:
            run(kernels)  # warmup (jit compilation, caches)
            timings[name] = best_of(args.repeats, lambda: run(kernels))
        speedup = timings["numpy"] / timings["numba"]
        print(f"{label:<42} {timings['numpy']:>9.4f}s {timings['numba']:>9.4f}s "
              f"{speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
