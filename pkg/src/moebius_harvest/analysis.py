"""Parameter sweeps, efficiency optimization, and tail fits.

All sweeps walk their grids in deterministic row-major order (dimerization
outer, detuning inner) and evaluate points independently, so concurrent
evaluation plus an index merge reproduces the sequential result exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import sqrt

import numpy as np

from .errors import (ConfigurationError, DegenerateInputError,
                     DivergentIntegralError, DomainError)
from .perturbation import perturbation_constants, perturbative_efficiency
from .propagate import PropagationConfig, transfer_efficiency
from .ring import RingSpec, mode_table
from .system import SystemSpec, assemble_momentum_generator

COARSE_POINTS = 33
PARAMETER_TOL = 1e-4
TAIL_WINDOW = (0.6, 0.95)
MIN_TAIL_SAMPLES = 10


class SweepParameter(Enum):
    DETUNING = "detuning"
    DIMERIZATION_DELTA = "dimerization_delta"
    KAPPA = "kappa"


@dataclass(frozen=True)
class SweepResult:
    axis_names: tuple[str, ...]
    grid: tuple[tuple[float, ...], ...]
    eta_values: np.ndarray
    converged_flags: np.ndarray

    @property
    def argmax_index(self) -> int:
        # np.argmax returns the first maximum, i.e. the lowest grid index
        return int(np.argmax(self.eta_values))

    @property
    def argmax(self) -> tuple[tuple[float, ...], float]:
        i = self.argmax_index
        return self.grid[i], float(self.eta_values[i])


@dataclass(frozen=True)
class OptimizationResult:
    parameter: SweepParameter
    argmax: float
    eta: float
    converged: bool
    evaluations: int


@dataclass(frozen=True)
class TailFit:
    rate: float
    r_squared: float


def _check_grid(name: str, grid) -> np.ndarray:
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ConfigurationError(
            f"{name}: must be a non-empty 1-d grid of finite numbers")
    return arr


def system_at(template: SystemSpec, delta: float, detuning: float) -> SystemSpec:
    """Template with the ring's dimerization and the photon detuning replaced.

    Detuning is measured from the acceptor level: omega = eps_A + detuning.
    """
    ring = replace(template.ring, dimerization_delta=float(delta))
    return replace(template, ring=ring,
                   photon_omega=template.acceptor_energy + float(detuning))


def sweep_detuning(template: SystemSpec, delta_grid, detuning_grid,
                   config: PropagationConfig | None = None) -> SweepResult:
    """Transfer efficiency over the (delta, detuning) product grid.

    Points whose propagation hits t_max with norm left in flight are flagged
    non-converged but do not abort the sweep.
    """
    deltas = _check_grid("delta_grid", delta_grid)
    detunings = _check_grid("detuning_grid", detuning_grid)
    config = config or PropagationConfig()
    grid: list[tuple[float, float]] = []
    etas: list[float] = []
    flags: list[bool] = []
    for d in deltas:
        for det in detunings:
            eta, ok = _exact_point(template, float(d), float(det), config)
            grid.append((float(d), float(det)))
            etas.append(eta)
            flags.append(ok)
    return SweepResult(("delta", "detuning"), tuple(grid),
                       np.array(etas), np.array(flags))


def _exact_point(template: SystemSpec, delta: float, detuning: float,
                 config: PropagationConfig) -> tuple[float, bool]:
    generator = assemble_momentum_generator(system_at(template, delta, detuning))
    result = transfer_efficiency(generator, config)
    return result.eta, result.converged


def sweep_detuning_perturbative(template: SystemSpec, delta_grid,
                                detuning_grid) -> SweepResult:
    """Same grid walk with the closed-form perturbative efficiency.

    Degenerate points (resonant real denominators, non-decaying poles) are
    flagged with eta = nan instead of aborting.
    """
    deltas = _check_grid("delta_grid", delta_grid)
    detunings = _check_grid("detuning_grid", detuning_grid)
    grid: list[tuple[float, float]] = []
    etas: list[float] = []
    flags: list[bool] = []
    for d in deltas:
        for det in detunings:
            system = system_at(template, float(d), float(det))
            try:
                solution = perturbation_constants(system)
                eta = perturbative_efficiency(solution,
                                              system.charge_sep_gamma)
                ok = True
            except (DegenerateInputError, DivergentIntegralError):
                eta = float("nan")
                ok = False
            grid.append((float(d), float(det)))
            etas.append(eta)
            flags.append(ok)
    return SweepResult(("delta", "detuning"), tuple(grid),
                       np.array(etas), np.array(flags))


def _with_parameter(template: SystemSpec, parameter: SweepParameter,
                    value: float) -> SystemSpec:
    if parameter is SweepParameter.DETUNING:
        return replace(template,
                       photon_omega=template.acceptor_energy + value)
    if parameter is SweepParameter.DIMERIZATION_DELTA:
        return replace(template,
                       ring=replace(template.ring, dimerization_delta=value))
    return replace(template, fluorescence_kappa=value)


def golden_section_maximize(fn, lo: float, hi: float,
                            tol: float = PARAMETER_TOL) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal function.

    Shrinks [lo, hi] to width tol and returns (midpoint, fn(midpoint)).
    Ties keep the left subinterval, so the search is deterministic.
    """
    if not hi > lo:
        raise ConfigurationError(f"bracket: need lo < hi (got [{lo}, {hi}])")
    invphi = (sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = fn(c)
    fd = fn(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def maximize_efficiency(template: SystemSpec, parameter: SweepParameter,
                        bracket: tuple[float, float],
                        config: PropagationConfig | None = None
                        ) -> OptimizationResult:
    """Coarse scan (33 points) plus golden-section refinement of eta.

    The refinement bracket is the coarse cell around the best scan point;
    the parameter is located to 1e-4. A flagged (non-converged) efficiency
    at any evaluated point flags the optimum as a whole.
    """
    if not isinstance(parameter, SweepParameter):
        raise ConfigurationError(
            f"parameter: expected a SweepParameter (got {parameter!r})")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ConfigurationError(
            f"bracket: need finite lo < hi (got [{lo}, {hi}])")
    config = config or PropagationConfig()
    state = {"converged": True, "evaluations": 0}

    def f(x: float) -> float:
        system = _with_parameter(template, parameter, float(x))
        result = transfer_efficiency(assemble_momentum_generator(system), config)
        state["evaluations"] += 1
        state["converged"] = state["converged"] and result.converged
        return result.eta

    xs = np.linspace(lo, hi, COARSE_POINTS)
    ys = np.array([f(x) for x in xs])
    best = int(np.argmax(ys))
    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, COARSE_POINTS - 1)]
    x_opt, y_opt = golden_section_maximize(f, float(a), float(b), PARAMETER_TOL)
    return OptimizationResult(parameter=parameter, argmax=float(x_opt),
                              eta=float(y_opt), converged=state["converged"],
                              evaluations=state["evaluations"])


def default_tail_window(t_end: float) -> tuple[float, float]:
    """Late-time fit window (0.6, 0.95) * t_end."""
    return TAIL_WINDOW[0] * t_end, TAIL_WINDOW[1] * t_end


def tail_decay_fit(times, values, window: tuple[float, float]) -> TailFit:
    """Least-squares exponential rate of a positive series within a window.

    Fits log(values) linearly in time over window = (t0, t1); returns the
    decay rate (minus the slope) and the r^2 of the log fit. The window must
    hold at least 10 samples, all positive.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise DomainError("times and values must be matching 1-d arrays")
    t0, t1 = float(window[0]), float(window[1])
    if not t0 < t1:
        raise DomainError(f"window: need t0 < t1 (got [{t0}, {t1}])")
    mask = (t >= t0) & (t <= t1)
    if int(np.count_nonzero(mask)) < MIN_TAIL_SAMPLES:
        raise DomainError(
            f"window [{t0:.6g}, {t1:.6g}] holds {int(np.count_nonzero(mask))} "
            f"samples; at least {MIN_TAIL_SAMPLES} are required")
    tw = t[mask]
    vw = v[mask]
    if np.any(vw <= 0) or not np.all(np.isfinite(vw)):
        raise DomainError("values inside the window must be positive and finite")
    y = np.log(vw)
    slope, intercept = np.polyfit(tw, y, 1)
    pred = slope * tw + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot > 0:
        r2 = 1.0 - ss_res / ss_tot
    else:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    return TailFit(rate=float(-slope), r_squared=float(r2))


def coupling_report(ring: RingSpec) -> np.ndarray:
    """Rows (k, |h_A|, |h_B|) for every mode, ascending in momentum."""
    table = mode_table(ring)
    return np.column_stack([table.momenta, np.abs(table.h_a), np.abs(table.h_b)])
