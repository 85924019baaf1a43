"""Self-check suite: cross-validated oracles runnable from the CLI.

Each check recomputes one structural identity of the model through two
independent routes and reports the worst deviation against a fixed
tolerance. The suite is the programmatic counterpart of `validate` on the
command line: all checks passing means the analytic spectrum, the collective
-mode transform, the reduced periodic-ring model, the perturbative closed
forms, and the propagator agree with each other on reference systems.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import dense_hermitian_eigenvalues
from .perturbation import (perturbation_constants, amplitude_series,
                           perturbative_efficiency, ww_rates)
from .propagate import PropagationConfig, photon_initial_state, propagate
from .ring import Boundary, RingSpec, band_energy, mode_table, momentum_grid, \
    site_hamiltonian
from .system import (SystemSpec, assemble_momentum_generator,
                     assemble_site_generator, extended_transform,
                     pbc_effective_generator)

FIG3_PROPAGATION = PropagationConfig(step_dt=0.002, t_max=50.0,
                                     sample_stride=10)


def _fig3_system(delta: float, boundary: Boundary = Boundary.MOEBIUS
                 ) -> SystemSpec:
    return SystemSpec(ring=RingSpec(8, 1.0, delta, boundary),
                      photon_omega=-6.0, acceptor_energy=-6.0,
                      photon_coupling_j=1.0, acceptor_coupling_xi=1.0,
                      charge_sep_gamma=0.3, fluorescence_kappa=0.3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    metric: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.metric <= self.tolerance

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        relation = "<=" if self.passed else ">"
        return (f"{verdict} {self.name} (deviation {self.metric:.3e} "
                f"{relation} {self.tolerance:.1e})")


def check_spectrum_vs_dense() -> CheckResult:
    worst = 0.0
    for n in (8, 12):
        for delta in (0.0, 0.6):
            for boundary in Boundary:
                ring = RingSpec(n, 1.0, delta, boundary)
                eps = band_energy(ring, momentum_grid(n))
                analytic = np.sort(np.concatenate([eps, -eps]))
                dense = dense_hermitian_eigenvalues(site_hamiltonian(ring))
                worst = max(worst, float(np.max(np.abs(analytic - dense))))
    return CheckResult("spectrum-vs-dense", worst, 1e-10)


def check_transform_unitarity() -> CheckResult:
    worst = 0.0
    for ring in (RingSpec(8, 1.0, 0.6, Boundary.MOEBIUS),
                 RingSpec(12, 1.0, 0.3, Boundary.PERIODIC)):
        w = mode_table(ring).transform_w
        gram = w @ w.conj().T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(ring.n_sites)))))
    return CheckResult("transform-unitarity", worst, 1e-12)


def check_coupling_sum_rule() -> CheckResult:
    worst = 0.0
    for delta in (0.0, 0.6):
        table = mode_table(RingSpec(200, 1.0, delta, Boundary.MOEBIUS))
        total = float(np.sum(np.abs(table.h_a) ** 2
                             + np.abs(table.h_b) ** 2))
        worst = max(worst, abs(total - 200.0))
    return CheckResult("coupling-sum-rule", worst, 1e-9)


def check_conservation_closure() -> CheckResult:
    generator = assemble_momentum_generator(_fig3_system(0.6))
    trajectory = propagate(generator, photon_initial_state(generator),
                           FIG3_PROPAGATION)
    closure = (trajectory.eta_accumulated + trajectory.fluorescence_loss
               + trajectory.residual_norm2)
    return CheckResult("conservation-closure", abs(closure - 1.0), 1e-6)


def check_pbc_reduction() -> CheckResult:
    system = _fig3_system(0.0, Boundary.PERIODIC)
    full = assemble_momentum_generator(system)
    reduced = pbc_effective_generator(system)
    full_traj = propagate(full, photon_initial_state(full), FIG3_PROPAGATION)
    red_traj = propagate(reduced, photon_initial_state(reduced),
                         FIG3_PROPAGATION)
    samples = min(full_traj.times.size, red_traj.times.size)
    diff = np.abs(full_traj.amplitudes[:samples, :2]
                  - red_traj.amplitudes[:samples, :2])
    return CheckResult("pbc-reduction", float(np.max(diff)), 1e-8)


def check_ww_pbc_identity() -> CheckResult:
    system = _fig3_system(0.6, Boundary.PERIODIC)
    rates = ww_rates(system)
    n = system.ring.n_sites
    j = system.photon_coupling_j
    omega = system.photon_omega
    kappa = system.fluorescence_kappa
    closed = (n * j ** 2 * kappa
              / ((omega - 2.0 * system.ring.hopping_g) ** 2 + kappa ** 2))
    return CheckResult("ww-pbc-identity", abs(rates.decay_rate - closed),
                       1e-10)


def _simpson(values: np.ndarray, dt: float) -> float:
    if values.size % 2 == 0:
        raise ValueError("Simpson rule needs an odd sample count")
    return float(dt / 3.0 * (values[0] + values[-1]
                             + 4.0 * np.sum(values[1:-1:2])
                             + 2.0 * np.sum(values[2:-2:2])))


def check_perturbative_quadrature() -> CheckResult:
    system = replace(_fig3_system(0.6), photon_omega=-3.0,
                     acceptor_energy=-3.0, charge_sep_gamma=1.0,
                     fluorescence_kappa=1.0)
    solution = perturbation_constants(system)
    closed = perturbative_efficiency(solution, system.charge_sep_gamma)
    dt = 0.002
    times = np.arange(0.0, 40.0 + dt / 2, dt)
    if times.size % 2 == 0:
        times = times[:-1]
    acceptor = amplitude_series(solution, times)[:, 1]
    quadrature = 2.0 * system.charge_sep_gamma \
        * _simpson(np.abs(acceptor) ** 2, dt)
    return CheckResult("perturbative-quadrature",
                       abs(quadrature - closed) / abs(closed), 1e-6)


def check_basis_equivalence() -> CheckResult:
    system = _fig3_system(0.3)
    site = assemble_site_generator(system)
    momentum = assemble_momentum_generator(system)
    site_traj = propagate(site, photon_initial_state(site), FIG3_PROPAGATION)
    mom_traj = propagate(momentum, photon_initial_state(momentum),
                         FIG3_PROPAGATION)
    u = extended_transform(mode_table(system.ring))
    samples = min(site_traj.times.size, mom_traj.times.size)
    mapped = site_traj.amplitudes[:samples] @ u.T
    amp_diff = float(np.max(np.abs(mapped - mom_traj.amplitudes[:samples])))
    eta_diff = abs(site_traj.eta_accumulated - mom_traj.eta_accumulated)
    return CheckResult("basis-equivalence", max(amp_diff, eta_diff), 1e-8)


ALL_CHECKS = (
    check_spectrum_vs_dense,
    check_transform_unitarity,
    check_coupling_sum_rule,
    check_conservation_closure,
    check_pbc_reduction,
    check_ww_pbc_identity,
    check_perturbative_quadrature,
    check_basis_equivalence,
)


def run_all() -> list[CheckResult]:
    """Run every self-check and return the results in suite order."""
    return [check() for check in ALL_CHECKS]


def report(results) -> tuple[str, bool]:
    """One PASS/FAIL line per check plus the overall verdict."""
    lines = [result.line() for result in results]
    return "\n".join(lines) + "\n", all(r.passed for r in results)
