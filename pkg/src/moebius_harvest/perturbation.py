"""Second-order multi-scale solution of the photon-seeded dynamics.

Treating J and xi as one small parameter, secular growth is absorbed into
renormalized complex frequencies (one per retained level): the photon and
acceptor poles pick up band sums, each collective mode picks up its two
back-action terms. Amplitudes are then sums of decaying exponentials with
constant coefficients, and the transfer efficiency integral has a closed
form. First-order frequency shifts vanish identically because every
coupling links levels of different unperturbed energy.

Conventions: eps_A' = eps_A - i*Gamma; band poles are eps_k - i*kappa for
the +energy (A) modes and -(eps_k + i*kappa) for the -energy (B) modes.
Amplitude ordering matches the momentum-basis generator: (photon, acceptor,
A modes, B modes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DivergentIntegralError
from .ring import mode_table
from .system import SystemSpec

RESONANCE_GUARD = 1e-9


@dataclass(frozen=True)
class RenormalizedFrequencies:
    omega_b: complex
    omega_a: complex
    omega_ak: np.ndarray
    omega_bk: np.ndarray


@dataclass(frozen=True)
class PerturbationSolution:
    """Frequencies, constant coefficients, and couplings of the mode sums."""

    freqs: RenormalizedFrequencies
    const_a_b: complex
    const_a_a: complex
    const_b_ak: np.ndarray
    const_b_bk: np.ndarray
    j_ak: np.ndarray
    j_bk: np.ndarray
    xi_ak: np.ndarray
    xi_bk: np.ndarray
    photon_omega: float
    acceptor_pole: complex
    den_photon_a: np.ndarray
    den_photon_b: np.ndarray
    den_acceptor_a: np.ndarray
    den_acceptor_b: np.ndarray
    cross_sum: complex


@dataclass(frozen=True)
class WignerWeisskopfRates:
    lamb_shift: float
    decay_rate: float


def _coupling_data(system: SystemSpec):
    table = mode_table(system.ring)
    eps = table.energies
    j_ak = system.photon_coupling_j * table.h_a
    j_bk = system.photon_coupling_j * table.h_b
    xi_ak = system.acceptor_coupling_xi * table.h_a
    xi_bk = system.acceptor_coupling_xi * table.h_b
    return eps, j_ak, j_bk, xi_ak, xi_bk


def _guard(name: str, values) -> None:
    smallest = float(np.min(np.abs(values)))
    if smallest < RESONANCE_GUARD:
        raise DegenerateInputError(
            f"{name} resonance denominator |{smallest:.3e}| is below "
            f"{RESONANCE_GUARD}; the perturbative formulas are singular there "
            f"(kappa > 0 keeps band denominators complex)")


def renormalized_frequencies(system: SystemSpec) -> RenormalizedFrequencies:
    """Complex poles of photon, acceptor, and each collective mode."""
    eps, j_ak, j_bk, xi_ak, xi_bk = _coupling_data(system)
    omega = system.photon_omega
    eps_a = system.acceptor_energy - 1j * system.charge_sep_gamma
    em = eps - 1j * system.fluorescence_kappa
    ep = eps + 1j * system.fluorescence_kappa
    den_photon_a = omega - em
    den_photon_b = omega + ep
    den_acceptor_a = eps_a - em
    den_acceptor_b = eps_a + ep
    _guard("photon-band", den_photon_a)
    _guard("photon-band", den_photon_b)
    _guard("acceptor-band", den_acceptor_a)
    _guard("acceptor-band", den_acceptor_b)
    ja2 = np.abs(j_ak) ** 2
    jb2 = np.abs(j_bk) ** 2
    xa2 = np.abs(xi_ak) ** 2
    xb2 = np.abs(xi_bk) ** 2
    omega_b = omega + np.sum(ja2 / den_photon_a + jb2 / den_photon_b)
    omega_a = eps_a + np.sum(xa2 / den_acceptor_a + xb2 / den_acceptor_b)
    omega_ak = em - xa2 / den_acceptor_a - ja2 / den_photon_a
    omega_bk = -ep - xb2 / den_acceptor_b - jb2 / den_photon_b
    return RenormalizedFrequencies(complex(omega_b), complex(omega_a),
                                   omega_ak, omega_bk)


def perturbation_constants(system: SystemSpec,
                           freqs: RenormalizedFrequencies | None = None
                           ) -> PerturbationSolution:
    """Constant coefficients of the photon-seeded amplitude mode sums."""
    if freqs is None:
        freqs = renormalized_frequencies(system)
    eps, j_ak, j_bk, xi_ak, xi_bk = _coupling_data(system)
    omega = system.photon_omega
    eps_a = system.acceptor_energy - 1j * system.charge_sep_gamma
    em = eps - 1j * system.fluorescence_kappa
    ep = eps + 1j * system.fluorescence_kappa
    den_photon_a = omega - em
    den_photon_b = omega + ep
    den_acceptor_a = eps_a - em
    den_acceptor_b = eps_a + ep
    _guard("photon-acceptor", np.array([omega - eps_a]))
    cross_sum = complex(np.sum(j_ak * np.conj(xi_ak) / den_photon_a
                               + j_bk * np.conj(xi_bk) / den_photon_b))
    const_a_b = 1.0 - np.sum(np.abs(j_ak) ** 2 / den_photon_a ** 2
                             + np.abs(j_bk) ** 2 / den_photon_b ** 2)
    const_a_a = (-np.sum(j_ak * np.conj(xi_ak) / (den_photon_a * den_acceptor_a)
                         + j_bk * np.conj(xi_bk) / (den_photon_b * den_acceptor_b))
                 - cross_sum / (omega - eps_a))
    const_b_ak = -j_ak / den_photon_a
    const_b_bk = -j_bk / den_photon_b
    return PerturbationSolution(
        freqs=freqs,
        const_a_b=complex(const_a_b),
        const_a_a=complex(const_a_a),
        const_b_ak=const_b_ak,
        const_b_bk=const_b_bk,
        j_ak=j_ak,
        j_bk=j_bk,
        xi_ak=xi_ak,
        xi_bk=xi_bk,
        photon_omega=omega,
        acceptor_pole=complex(eps_a),
        den_photon_a=den_photon_a,
        den_photon_b=den_photon_b,
        den_acceptor_a=den_acceptor_a,
        den_acceptor_b=den_acceptor_b,
        cross_sum=cross_sum,
    )


def _exponential_parts(solution: PerturbationSolution):
    """Coefficient vectors of (photon, acceptor) over the pole set.

    Pole ordering: omega_b, omega_a, omega_ak..., omega_bk....
    """
    f = solution.freqs
    photon = np.concatenate([
        [solution.const_a_b, 0.0],
        solution.const_b_ak * np.conj(solution.j_ak) / (-solution.den_photon_a),
        solution.const_b_bk * np.conj(solution.j_bk) / (-solution.den_photon_b),
    ])
    acceptor = np.concatenate([
        [solution.const_a_b * solution.cross_sum
         / (solution.photon_omega - solution.acceptor_pole),
         solution.const_a_a],
        solution.const_b_ak * np.conj(solution.xi_ak) / (-solution.den_acceptor_a),
        solution.const_b_bk * np.conj(solution.xi_bk) / (-solution.den_acceptor_b),
    ])
    poles = np.concatenate([[f.omega_b, f.omega_a], f.omega_ak, f.omega_bk])
    return photon, acceptor, poles


def perturbative_amplitudes(solution: PerturbationSolution, t: float):
    """Amplitude vector (photon, acceptor, A modes, B modes) at one time."""
    from .propagate import AmplitudeState

    return AmplitudeState(float(t), amplitude_series(solution,
                                                     np.array([float(t)]))[0])


def amplitude_series(solution: PerturbationSolution, times) -> np.ndarray:
    """Amplitudes on a time grid; rows are times, columns the level ordering."""
    t = np.asarray(times, dtype=float)
    photon_c, acceptor_c, poles = _exponential_parts(solution)
    f = solution.freqs
    phases = np.exp(-1j * np.outer(t, poles))
    half = solution.j_ak.size
    out = np.empty((t.size, 2 + 2 * half), dtype=np.complex128)
    out[:, 0] = phases @ photon_c
    out[:, 1] = phases @ acceptor_c
    e_b = phases[:, 0]
    e_ak = np.exp(-1j * np.outer(t, f.omega_ak))
    e_bk = np.exp(-1j * np.outer(t, f.omega_bk))
    feed_a = solution.const_a_b * solution.j_ak / solution.den_photon_a
    feed_b = solution.const_a_b * solution.j_bk / solution.den_photon_b
    out[:, 2:2 + half] = (e_ak * solution.const_b_ak[None, :]
                          + np.outer(e_b, feed_a))
    out[:, 2 + half:] = (e_bk * solution.const_b_bk[None, :]
                         + np.outer(e_b, feed_b))
    return out


def efficiency_from_exponentials(coefficients, poles, gamma: float) -> float:
    """2*gamma * integral_0^inf |sum_i c_i exp(-i W_i t)|^2 dt, closed form.

    Every pole must decay (Im W < 0), otherwise the integral diverges.
    """
    c = np.asarray(coefficients, dtype=np.complex128)
    w = np.asarray(poles, dtype=np.complex128)
    if c.shape != w.shape or c.ndim != 1:
        raise DivergentIntegralError(
            "coefficients and poles must be matching 1-d arrays")
    if np.any(w.imag >= 0):
        raise DivergentIntegralError(
            "every pole must have Im < 0 for the yield integral to converge")
    denom = 1j * (w[:, None] - np.conj(w)[None, :])
    total = np.sum(c[:, None] * np.conj(c)[None, :] / denom)
    return float(2.0 * gamma * total.real)


def perturbative_efficiency(solution: PerturbationSolution, gamma: float) -> float:
    """Closed-form transfer efficiency of the perturbative acceptor amplitude."""
    _, acceptor_c, poles = _exponential_parts(solution)
    return efficiency_from_exponentials(acceptor_c, poles, gamma)


def ww_rates(system: SystemSpec,
             lorentzian_width: float | None = None) -> WignerWeisskopfRates:
    """Second-order photon level shift and decay rate from the band sums.

    By default band poles carry the system's fluorescence rate; passing
    lorentzian_width broadens them by that width instead (continuum
    estimates for large rings).
    """
    width = (system.fluorescence_kappa if lorentzian_width is None
             else lorentzian_width)
    if not width >= 0:
        raise DegenerateInputError(
            f"lorentzian_width: must be non-negative (got {lorentzian_width!r})")
    eps, j_ak, j_bk, _, _ = _coupling_data(system)
    omega = system.photon_omega
    den_a = omega - (eps - 1j * width)
    den_b = omega + (eps + 1j * width)
    _guard("photon-band", den_a)
    _guard("photon-band", den_b)
    sigma = np.sum(np.abs(j_ak) ** 2 / den_a + np.abs(j_bk) ** 2 / den_b)
    return WignerWeisskopfRates(lamb_shift=float(sigma.real),
                                decay_rate=float(-sigma.imag))
