"""Light harvesting by a dimerized ring with Moebius boundary conditions.

A single optical excitation is shared between a photon mode, a ring of N
donors with alternating hoppings g(1 +- delta), and a central acceptor that
harvests it at rate Gamma while the donors fluoresce at rate kappa. The
package provides the analytic two-band spectrum and collective-mode
transform of the ring, non-Hermitian propagation of the coupled system, the
transfer efficiency 2*Gamma*integral |alpha_A|^2 dt, second-order
perturbative closed forms (including Wigner-Weisskopf rates), sweep and
optimization drivers, and a CLI that reproduces each published figure.
"""

from .errors import (MoebiusHarvestError, ConfigurationError,
                     ValidationError, NumericalError, DegenerateInputError,
                     DivergentIntegralError, DomainError)
from .units import (DEFAULT_XI_PER_PS, time_to_ps, time_from_ps,
                    energy_to_per_ps, energy_from_per_ps)
from .ring import (Boundary, RingSpec, ModeEntry, ModeTable, momentum_grid,
                   band_energy, band_phase, band_gap, site_hamiltonian,
                   gauge_phases, mode_table)
from .linalg import dense_hermitian_eigenvalues
from .system import (Basis, SystemSpec, EffectiveGenerator,
                     assemble_site_generator, assemble_momentum_generator,
                     pbc_effective_generator, extended_transform)
from .propagate import (PropagationConfig, Termination, AmplitudeState,
                        Trajectory, EfficiencyResult, photon_initial_state,
                        propagate, acceptor_population, transfer_efficiency)
from .perturbation import (RenormalizedFrequencies, PerturbationSolution,
                           WignerWeisskopfRates, renormalized_frequencies,
                           perturbation_constants, perturbative_amplitudes,
                           amplitude_series, efficiency_from_exponentials,
                           perturbative_efficiency, ww_rates)
from .analysis import (SweepParameter, SweepResult, OptimizationResult,
                       TailFit, system_at, sweep_detuning,
                       sweep_detuning_perturbative, golden_section_maximize,
                       maximize_efficiency, default_tail_window,
                       tail_decay_fit, coupling_report)
from .config import RunConfig, SweepGrid, parse_config, config_from_data
from .csvio import emit_csv, emit_json
from .backend import BACKEND

__version__ = "0.1.0"

__all__ = [
    "MoebiusHarvestError", "ConfigurationError", "ValidationError",
    "NumericalError", "DegenerateInputError", "DivergentIntegralError",
    "DomainError",
    "DEFAULT_XI_PER_PS", "time_to_ps", "time_from_ps", "energy_to_per_ps",
    "energy_from_per_ps",
    "Boundary", "RingSpec", "ModeEntry", "ModeTable", "momentum_grid",
    "band_energy", "band_phase", "band_gap", "site_hamiltonian",
    "gauge_phases", "mode_table",
    "dense_hermitian_eigenvalues",
    "Basis", "SystemSpec", "EffectiveGenerator", "assemble_site_generator",
    "assemble_momentum_generator", "pbc_effective_generator",
    "extended_transform",
    "PropagationConfig", "Termination", "AmplitudeState", "Trajectory",
    "EfficiencyResult", "photon_initial_state", "propagate",
    "acceptor_population", "transfer_efficiency",
    "RenormalizedFrequencies", "PerturbationSolution",
    "WignerWeisskopfRates", "renormalized_frequencies",
    "perturbation_constants", "perturbative_amplitudes", "amplitude_series",
    "efficiency_from_exponentials", "perturbative_efficiency", "ww_rates",
    "SweepParameter", "SweepResult", "OptimizationResult", "TailFit",
    "system_at", "sweep_detuning", "sweep_detuning_perturbative",
    "golden_section_maximize", "maximize_efficiency", "default_tail_window",
    "tail_decay_fit", "coupling_report",
    "RunConfig", "SweepGrid", "parse_config", "config_from_data",
    "emit_csv", "emit_json",
    "BACKEND",
    "__version__",
]
