"""Backend selection and kernel interchangeability."""

import os
import subprocess
import sys

import numpy as np
import pytest

import moebius_harvest
from moebius_harvest import Boundary, RingSpec, SystemSpec
from moebius_harvest import kernels_numba, kernels_numpy
from moebius_harvest.backend import (ENV_VAR, RK4_NON_FINITE,
                                     RK4_RAN_ALL_STEPS,
                                     RK4_RESIDUAL_BELOW_TOL)
from moebius_harvest.linalg import dense_hermitian_eigenvalues
from moebius_harvest.ring import site_hamiltonian
from moebius_harvest.system import assemble_momentum_generator


def _kernel_modules():
    return (("numpy", kernels_numpy), ("numba", kernels_numba))


def _run_rk4(kernels, mat, psi0, dt, n_steps, stride, two_gamma, two_kappa,
             residual_tol=0.0):
    capacity = n_steps // stride + 3
    times = np.zeros(capacity)
    amps = np.zeros((capacity, psi0.size), dtype=np.complex128)
    etas = np.zeros(capacity)
    losses = np.zeros(capacity)
    result = kernels.rk4_propagate(mat, psi0, dt, n_steps, stride, two_gamma,
                                   two_kappa, residual_tol, times, amps, etas,
                                   losses)
    n_samples = result[0]
    return result, times[:n_samples], amps[:n_samples], etas[:n_samples]


def _reference_generator():
    system = SystemSpec(ring=RingSpec(8, 1.0, 0.6, Boundary.MOEBIUS),
                        photon_omega=-6.0, acceptor_energy=-6.0,
                        photon_coupling_j=1.0, acceptor_coupling_xi=1.0,
                        charge_sep_gamma=0.3, fluorescence_kappa=0.3)
    return assemble_momentum_generator(system)


def test_backend_name_is_published():
    assert moebius_harvest.BACKEND in ("numba", "numpy")


def test_rk4_kernels_agree_between_backends():
    generator = _reference_generator()
    psi0 = np.zeros(generator.dimension, dtype=np.complex128)
    psi0[0] = 1.0
    outputs = {}
    for name, kernels in _kernel_modules():
        result, times, amps, etas = _run_rk4(
            kernels, generator.matrix, psi0, 0.01, 2000, 50, 0.6, 0.6)
        outputs[name] = (result, times, amps, etas)
    res_np, t_np, a_np, e_np = outputs["numpy"]
    res_nb, t_nb, a_nb, e_nb = outputs["numba"]
    assert res_np[0] == res_nb[0]
    assert res_np[1] == res_nb[1] == RK4_RAN_ALL_STEPS
    assert np.array_equal(t_np, t_nb)
    assert np.max(np.abs(a_np - a_nb)) < 1e-13
    assert np.max(np.abs(e_np - e_nb)) < 1e-13
    assert res_np[2] == pytest.approx(res_nb[2], abs=1e-13)
    assert res_np[4] == pytest.approx(res_nb[4], abs=1e-13)


def test_rk4_kernels_stop_on_residual():
    generator = _reference_generator()
    psi0 = np.zeros(generator.dimension, dtype=np.complex128)
    psi0[0] = 1.0
    for _, kernels in _kernel_modules():
        result, times, _, _ = _run_rk4(kernels, generator.matrix, psi0, 0.01,
                                       20000, 50, 0.6, 0.6, residual_tol=1e-4)
        assert result[1] == RK4_RESIDUAL_BELOW_TOL
        assert result[4] <= 1e-4
        assert times[-1] < 200.0
        # the terminating step is recorded even off the stride
        assert times[-1] == result[5]


def test_rk4_kernels_flag_non_finite_blowup():
    # dt far beyond the stability limit makes RK4 diverge to inf
    mat = np.diag(np.array([1e6 + 0.0j, -1e6 + 0.0j]))
    psi0 = np.array([1.0 + 0.0j, 0.5 + 0.0j])
    for _, kernels in _kernel_modules():
        with np.errstate(over="ignore", invalid="ignore"):
            result, _, _, _ = _run_rk4(kernels, mat, psi0, 1.0, 100, 10,
                                       0.0, 0.0)
        assert result[1] == RK4_NON_FINITE
        assert result[0] >= 1


def test_jacobi_kernels_agree_between_backends():
    ring = RingSpec(12, 1.0, 0.3, Boundary.MOEBIUS)
    base = site_hamiltonian(ring).astype(np.complex128)
    tol = 1e-12 * float(np.linalg.norm(base))
    results = []
    for _, kernels in _kernel_modules():
        values, sweeps, converged = kernels.jacobi_eigenvalues(
            base.copy(), tol, 64)
        assert converged
        assert sweeps < 64
        results.append(values)
    assert np.max(np.abs(results[0] - results[1])) < 1e-12
    assert np.max(np.abs(results[0] - np.linalg.eigvalsh(base))) < 1e-10


def test_public_eigensolver_uses_the_selected_backend():
    ring = RingSpec(10, 1.0, 0.6, Boundary.PERIODIC)
    values = dense_hermitian_eigenvalues(site_hamiltonian(ring))
    assert np.max(np.abs(values - np.linalg.eigvalsh(site_hamiltonian(ring)))) \
        < 1e-10


@pytest.mark.parametrize("choice", ["numpy", "numba"])
def test_env_var_forces_backend(choice):
    env = dict(os.environ, **{ENV_VAR: choice})
    probe = subprocess.run(
        [sys.executable, "-c",
         "import moebius_harvest as m; print(m.BACKEND)"],
        capture_output=True, text=True, env=env, timeout=180)
    assert probe.returncode == 0
    assert probe.stdout.strip() == choice


def test_env_var_rejects_unknown_backend():
    env = dict(os.environ, **{ENV_VAR: "fortran"})
    probe = subprocess.run(
        [sys.executable, "-c", "import moebius_harvest"],
        capture_output=True, text=True, env=env, timeout=180)
    assert probe.returncode != 0
    assert ENV_VAR in probe.stderr
    assert "fortran" in probe.stderr
