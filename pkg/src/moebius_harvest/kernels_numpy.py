"""Pure-numpy compute kernels.

Reference implementations of the two hot loops: fixed-step RK4 propagation of
i dpsi/dt = M psi with loss-integral accumulators, and cyclic complex Jacobi
eigenvalue sweeps.  `kernels_numba` holds jit-compiled twins with identical
signatures and semantics; `backend` selects one pair at import time.

RK4 status codes: 0 = ran all steps, 1 = squared norm fell below the residual
tolerance, 2 = non-finite values appeared.
"""

import numpy as np


def _loss_pair(v: np.ndarray, two_gamma: float, two_kappa: float) -> tuple[float, float]:
    # index 1 is the acceptor, indices >= 2 the donors; index 0 (photon) is lossless
    g = two_gamma * (v[1].real * v[1].real + v[1].imag * v[1].imag)
    tail = v[2:]
    return g, two_kappa * float(np.sum(tail.real * tail.real + tail.imag * tail.imag))


def rk4_propagate(mat, psi0, dt, n_steps, stride, two_gamma, two_kappa,
                  residual_tol, times, amps, etas, losses):
    """Classical RK4 with the two loss quadratures advanced by the same stages.

    Samples are recorded at step 0, every `stride` steps, and at the
    terminating step; output arrays need capacity n_steps // stride + 3.
    Returns (n_samples, status, eta, loss, norm2, t_end).
    """
    psi = psi0.astype(np.complex128, copy=True)
    eta = 0.0
    loss = 0.0
    norm2 = float(np.sum(psi.real * psi.real + psi.imag * psi.imag))
    times[0] = 0.0
    amps[0] = psi
    etas[0] = eta
    losses[0] = loss
    ns = 1
    status = 0
    t = 0.0
    sixth = dt / 6.0
    half = 0.5 * dt
    for step in range(1, n_steps + 1):
        k1 = -1j * (mat @ psi)
        g1, l1 = _loss_pair(psi, two_gamma, two_kappa)
        s = psi + half * k1
        k2 = -1j * (mat @ s)
        g2, l2 = _loss_pair(s, two_gamma, two_kappa)
        s = psi + half * k2
        k3 = -1j * (mat @ s)
        g3, l3 = _loss_pair(s, two_gamma, two_kappa)
        s = psi + dt * k3
        k4 = -1j * (mat @ s)
        g4, l4 = _loss_pair(s, two_gamma, two_kappa)
        psi += sixth * (k1 + 2.0 * (k2 + k3) + k4)
        eta += sixth * (g1 + 2.0 * (g2 + g3) + g4)
        loss += sixth * (l1 + 2.0 * (l2 + l3) + l4)
        t = step * dt
        norm2 = float(np.sum(psi.real * psi.real + psi.imag * psi.imag))
        if norm2 != norm2:
            status = 2
        elif norm2 < residual_tol:
            status = 1
        if status != 0 or step % stride == 0 or step == n_steps:
            times[ns] = t
            amps[ns] = psi
            etas[ns] = eta
            losses[ns] = loss
            ns += 1
        if status != 0:
            break
    return ns, status, eta, loss, norm2, t


def jacobi_eigenvalues(a, tol_off, max_sweeps):
    """Cyclic complex Jacobi. Diagonalizes the Hermitian matrix `a` in place.

    Stops once the off-diagonal Frobenius norm drops to tol_off.
    Returns (eigenvalues ascending, sweeps_used, converged).
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _off_norm(a) <= tol_off:
            return np.sort(np.diagonal(a).real.copy()), sweep, True
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
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                pc = phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + (s * pc) * col_q
                a[:, q] = (-s * phase) * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + (s * phase) * row_q
                a[q, :] = (-s * pc) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    converged = _off_norm(a) <= tol_off
    return np.sort(np.diagonal(a).real.copy()), max_sweeps, converged


def _off_norm(a: np.ndarray) -> float:
    # Sum only the off-diagonal entries: subtracting the diagonal from the
    # total cancels catastrophically once the matrix is nearly diagonal.
    mag2 = a.real * a.real + a.imag * a.imag
    np.fill_diagonal(mag2, 0.0)
    return float(np.sqrt(np.sum(mag2)))
