"""Jit-compiled twins of the kernels in `kernels_numpy`.

Same signatures, same status codes, same math; only the execution engine
differs. Kept import-safe on machines without numba by raising ImportError
here and letting `backend` fall back.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _matvec_neg_i(mat, v, out):
    n = mat.shape[0]
    for i in range(n):
        acc = 0.0 + 0.0j
        for j in range(n):
            acc += mat[i, j] * v[j]
        out[i] = -1j * acc


@njit(cache=True)
def _loss_pair(v, two_gamma, two_kappa):
    g = two_gamma * (v[1].real * v[1].real + v[1].imag * v[1].imag)
    acc = 0.0
    for i in range(2, v.shape[0]):
        acc += v[i].real * v[i].real + v[i].imag * v[i].imag
    return g, two_kappa * acc


@njit(cache=True)
def rk4_propagate(mat, psi0, dt, n_steps, stride, two_gamma, two_kappa,
                  residual_tol, times, amps, etas, losses):
    dim = mat.shape[0]
    psi = psi0.astype(np.complex128)
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    work = np.empty(dim, np.complex128)
    eta = 0.0
    loss = 0.0
    norm2 = 0.0
    for i in range(dim):
        norm2 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    times[0] = 0.0
    amps[0, :] = psi
    etas[0] = eta
    losses[0] = loss
    ns = 1
    status = 0
    t = 0.0
    sixth = dt / 6.0
    half = 0.5 * dt
    for step in range(1, n_steps + 1):
        _matvec_neg_i(mat, psi, k1)
        g1, l1 = _loss_pair(psi, two_gamma, two_kappa)
        for i in range(dim):
            work[i] = psi[i] + half * k1[i]
        _matvec_neg_i(mat, work, k2)
        g2, l2 = _loss_pair(work, two_gamma, two_kappa)
        for i in range(dim):
            work[i] = psi[i] + half * k2[i]
        _matvec_neg_i(mat, work, k3)
        g3, l3 = _loss_pair(work, two_gamma, two_kappa)
        for i in range(dim):
            work[i] = psi[i] + dt * k3[i]
        _matvec_neg_i(mat, work, k4)
        g4, l4 = _loss_pair(work, two_gamma, two_kappa)
        norm2 = 0.0
        for i in range(dim):
            psi[i] = psi[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            norm2 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
        eta += sixth * (g1 + 2.0 * (g2 + g3) + g4)
        loss += sixth * (l1 + 2.0 * (l2 + l3) + l4)
        t = step * dt
        if norm2 != norm2:
            status = 2
        elif norm2 < residual_tol:
            status = 1
        if status != 0 or step % stride == 0 or step == n_steps:
            times[ns] = t
            amps[ns, :] = psi
            etas[ns] = eta
            losses[ns] = loss
            ns += 1
        if status != 0:
            break
    return ns, status, eta, loss, norm2, t


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    off2 = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off2 += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return math.sqrt(off2)


@njit(cache=True)
def _sorted_diag(a):
    n = a.shape[0]
    d = np.empty(n, np.float64)
    for i in range(n):
        d[i] = a[i, i].real
    return np.sort(d)


@njit(cache=True)
def jacobi_eigenvalues(a, tol_off, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _off_norm(a) <= tol_off:
            return _sorted_diag(a), sweep, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                # component-wise: complex-by-complex division squares r in
                # the denominator and overflows once r is subnormal
                phase = complex(apq.real / r, apq.imag / r)
                tau = (a[p, p].real - a[q, q].real) / (2.0 * r)
                if tau != tau or abs(tau) == np.inf:
                    # r subnormal against the diagonal: drop the pivot
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if abs(tau) > 1e12:
                    t = 0.5 / tau
                elif tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                pc = phase.conjugate()
                ms_phase = -s * phase
                ms_pc = -s * pc
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip + (s * pc) * aiq
                    a[i, q] = ms_phase * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api + (s * phase) * aqi
                    a[q, i] = ms_pc * api + c * aqi
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
    converged = _off_norm(a) <= tol_off
    return _sorted_diag(a), max_sweeps, converged
