"""Norm-draining propagation of effective generators.

Integrates i d(psi)/dt = M psi with classical fixed-step RK4. The two loss
channels (charge separation on the acceptor, fluorescence on the donors) are
accumulated by the same RK4 stages, so at every sample

    eta(t) + loss(t) + ||psi(t)||^2 = ||psi(0)||^2

up to integration error. A run at step dt is accepted only after a re-run at
dt/2 reproduces the final yield to 1e-8; the finer run is the one returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import backend
from .errors import ConfigurationError, NumericalError
from .system import EffectiveGenerator

REFINE_TOL = 1e-8
MAX_REFINEMENTS = 6
STABILITY_LIMIT = 0.1
NONCONVERGED_RESIDUAL = 1e-3
INITIAL_NORM_SLACK = 1e-9
_GENERATOR_ATOL = 1e-12


@dataclass(frozen=True)
class PropagationConfig:
    step_dt: float = 0.002
    t_max: float = 200.0
    residual_tol: float = 1e-8
    sample_stride: int = 1

    def __post_init__(self):
        if not (isinstance(self.step_dt, (int, float))
                and np.isfinite(self.step_dt) and self.step_dt > 0):
            raise ConfigurationError(
                f"step_dt: must be a positive number (got {self.step_dt!r})")
        if not (isinstance(self.t_max, (int, float))
                and np.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigurationError(
                f"t_max: must be a positive number (got {self.t_max!r})")
        if not (isinstance(self.residual_tol, (int, float))
                and self.residual_tol >= 0):
            raise ConfigurationError(
                f"residual_tol: must be non-negative (got {self.residual_tol!r})")
        if isinstance(self.sample_stride, bool) \
                or not isinstance(self.sample_stride, (int, np.integer)) \
                or self.sample_stride < 1:
            raise ConfigurationError(
                f"sample_stride: must be an integer >= 1 (got {self.sample_stride!r})")


class Termination(Enum):
    RESIDUAL_BELOW_TOL = "residual_below_tol"
    T_MAX_REACHED = "t_max_reached"


@dataclass(frozen=True)
class AmplitudeState:
    time: float
    amplitudes: np.ndarray

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class Trajectory:
    labels: tuple[str, ...]
    times: np.ndarray
    amplitudes: np.ndarray
    eta_series: np.ndarray
    loss_series: np.ndarray
    eta_accumulated: float
    fluorescence_loss: float
    terminated_by: Termination

    @property
    def samples(self) -> list[AmplitudeState]:
        return [AmplitudeState(float(t), a)
                for t, a in zip(self.times, self.amplitudes)]

    @property
    def residual_norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[-1]) ** 2))


@dataclass(frozen=True)
class EfficiencyResult:
    eta: float
    fluorescence_loss: float
    residual: float
    terminated_by: Termination
    converged: bool


def photon_initial_state(generator: EffectiveGenerator) -> AmplitudeState:
    """Unit amplitude on the photon mode, the standard initial condition."""
    psi = np.zeros(generator.dimension, dtype=np.complex128)
    psi[0] = 1.0
    return AmplitudeState(0.0, psi)


def _decay_rates(mat: np.ndarray) -> tuple[float, float]:
    """Read (2*Gamma, 2*kappa) off the diagonal, checking generator shape.

    The loss bookkeeping is only meaningful for generators whose
    anti-Hermitian part is a negative-semidefinite diagonal with a lossless
    photon row and one uniform donor rate, which is what every assembler in
    this package produces.
    """
    scale = max(1.0, float(np.max(np.abs(mat))))
    off = mat - np.diag(np.diagonal(mat))
    if float(np.max(np.abs(off - off.conj().T))) > _GENERATOR_ATOL * scale:
        raise ConfigurationError(
            "generator: off-diagonal part must be Hermitian")
    diag_im = np.diagonal(mat).imag
    if abs(diag_im[0]) > _GENERATOR_ATOL * scale:
        raise ConfigurationError("generator: photon row must be lossless")
    if np.any(diag_im > _GENERATOR_ATOL * scale):
        raise ConfigurationError(
            "generator: diagonal imaginary parts must be non-positive (decay only)")
    gamma = -diag_im[1]
    donor_im = diag_im[2:]
    if donor_im.size and float(np.max(np.abs(donor_im - donor_im[0]))) \
            > _GENERATOR_ATOL * scale:
        raise ConfigurationError(
            "generator: donor rows must share one fluorescence rate")
    kappa = -donor_im[0] if donor_im.size else 0.0
    return 2.0 * max(gamma, 0.0), 2.0 * max(kappa, 0.0)


def _run_once(mat, psi0, dt, n_steps, stride, two_gamma, two_kappa, residual_tol):
    capacity = n_steps // stride + 3
    dim = mat.shape[0]
    times = np.empty(capacity, dtype=np.float64)
    amps = np.empty((capacity, dim), dtype=np.complex128)
    etas = np.empty(capacity, dtype=np.float64)
    losses = np.empty(capacity, dtype=np.float64)
    ns, status, eta, loss, norm2, t_end = backend.rk4_propagate(
        mat, psi0, dt, n_steps, stride, two_gamma, two_kappa,
        residual_tol, times, amps, etas, losses)
    if status == backend.RK4_NON_FINITE:
        raise NumericalError(
            f"propagation produced non-finite amplitudes near t = {t_end:.6g}")
    return ns, status, eta, loss, times, amps, etas, losses


def propagate(generator: EffectiveGenerator, initial: AmplitudeState,
              config: PropagationConfig | None = None) -> Trajectory:
    """Propagate an initial state, refining the step until the yield settles.

    Starts from config.step_dt (pre-halved if the stability guard
    dt * max|M_ij| < 0.1 demands it) and halves the step until two successive
    resolutions agree on the accumulated yield to 1e-8; each halving doubles
    the sample stride so sample times stay fixed. More than six halvings in
    either loop is a NumericalError.
    """
    config = config or PropagationConfig()
    mat = np.ascontiguousarray(generator.matrix, dtype=np.complex128)
    psi0 = np.asarray(initial.amplitudes, dtype=np.complex128)
    if psi0.shape != (mat.shape[0],):
        raise ConfigurationError(
            f"initial state dimension {psi0.shape} does not match the "
            f"generator dimension {mat.shape[0]}")
    if float(np.sum(np.abs(psi0) ** 2)) > 1.0 + INITIAL_NORM_SLACK:
        raise ConfigurationError("initial state norm must not exceed 1")
    two_gamma, two_kappa = _decay_rates(mat)

    dt = float(config.step_dt)
    stride = int(config.sample_stride)
    max_el = float(np.max(np.abs(mat)))
    halvings = 0
    while dt * max_el >= STABILITY_LIMIT:
        if halvings == MAX_REFINEMENTS:
            raise NumericalError(
                f"stability guard dt * max|M| < {STABILITY_LIMIT} not reachable "
                f"within {MAX_REFINEMENTS} halvings of step_dt = {config.step_dt}")
        dt *= 0.5
        stride *= 2
        halvings += 1

    def run(cur_dt, cur_stride):
        n_steps = max(1, int(math.ceil(config.t_max / cur_dt - 1e-9)))
        return _run_once(mat, psi0, cur_dt, n_steps, cur_stride,
                         two_gamma, two_kappa, config.residual_tol)

    prev = run(dt, stride)
    accepted = None
    for _ in range(MAX_REFINEMENTS):
        dt *= 0.5
        stride *= 2
        cur = run(dt, stride)
        if abs(cur[2] - prev[2]) < REFINE_TOL:
            accepted = cur
            break
        prev = cur
    if accepted is None:
        raise NumericalError(
            f"accumulated yield did not stabilize to {REFINE_TOL} within "
            f"{MAX_REFINEMENTS} step halvings")

    ns, status, eta, loss, times, amps, etas, losses = accepted
    terminated = (Termination.RESIDUAL_BELOW_TOL
                  if status == backend.RK4_RESIDUAL_BELOW_TOL
                  else Termination.T_MAX_REACHED)
    return Trajectory(
        labels=generator.labels,
        times=times[:ns] + initial.time,
        amplitudes=amps[:ns].copy(),
        eta_series=etas[:ns].copy(),
        loss_series=losses[:ns].copy(),
        eta_accumulated=float(eta),
        fluorescence_loss=float(loss),
        terminated_by=terminated,
    )


def acceptor_population(trajectory: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """(times, |acceptor amplitude|^2) at the trajectory's sampling stride."""
    if trajectory.times.size == 0:
        raise ConfigurationError("trajectory has no samples")
    pop = np.abs(trajectory.amplitudes[:, 1]) ** 2
    return trajectory.times.copy(), pop


def transfer_efficiency(generator: EffectiveGenerator,
                        config: PropagationConfig | None = None,
                        initial: AmplitudeState | None = None) -> EfficiencyResult:
    """Accumulated charge-separation yield from a photon-seeded run.

    A run that hits t_max with more than 1e-3 of the norm still in flight is
    flagged non-converged; its eta is a valid lower bound.
    """
    config = config or PropagationConfig()
    est_steps = int(math.ceil(config.t_max / config.step_dt))
    stride = max(config.sample_stride, est_steps // 512 + 1)
    run_config = replace(config, sample_stride=stride)
    traj = propagate(generator, initial or photon_initial_state(generator),
                     run_config)
    residual = traj.residual_norm2
    converged = not (traj.terminated_by is Termination.T_MAX_REACHED
                     and residual > NONCONVERGED_RESIDUAL)
    return EfficiencyResult(
        eta=traj.eta_accumulated,
        fluorescence_loss=traj.fluorescence_loss,
        residual=residual,
        terminated_by=traj.terminated_by,
        converged=converged,
    )
