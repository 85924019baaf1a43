"""Command-line surface: figure pipelines, summaries, and self-checks.

Subcommands map one-to-one onto the published result set: `spectrum` (band
energies over the mode grid), `dynamics` (acceptor population traces),
`sweep` (efficiency vs detuning), `perturb` (the perturbative counterpart),
`couplings` (collective-mode coupling strengths), plus `efficiency` (single
-point summary), `pbc-compare` (full vs reduced periodic-ring model), and
`validate` (oracle suite). Exit codes: 0 success, 2 configuration error,
3 numerical non-convergence, 4 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import sweep_detuning, sweep_detuning_perturbative
from .config import RunConfig, config_from_data, parse_config
from .csvio import emit_csv, emit_json
from .errors import (ConfigurationError, MoebiusHarvestError, NumericalError,
                     ValidationError)
from .propagate import photon_initial_state, propagate, transfer_efficiency
from .ring import band_energy, mode_table, momentum_grid
from .system import assemble_momentum_generator, pbc_effective_generator
from .units import time_to_ps
from . import validate as validate_suite

BUNDLED_CONFIGS = ("fig2", "fig3", "fig3_pbc", "fig4a", "fig4b", "fig5",
                   "fig6")
PBC_COMPARE_TOL = 1e-8

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

# (argparse dest, config block, config key)
_OVERRIDES = (
    ("delta", "system", "delta"),
    ("kappa", "system", "kappa"),
    ("gamma", "system", "gamma"),
    ("omega", "system", "omega"),
    ("epsilon_a", "system", "epsilon_a"),
    ("coupling_j", "system", "coupling_j"),
    ("n_sites", "system", "n_sites"),
    ("hopping_g", "system", "hopping_g"),
    ("boundary", "system", "boundary"),
    ("t_max", "propagation", "t_max"),
    ("step_dt", "propagation", "step_dt"),
    ("sample_stride", "propagation", "sample_stride"),
    ("residual_tol", "propagation", "residual_tol"),
)


def load_config_text(spec: str) -> str:
    """Read a config file path, falling back to the bundled names."""
    path = Path(spec)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    name = spec[:-5] if spec.endswith(".json") else spec
    if name in BUNDLED_CONFIGS:
        resource = resources.files(__package__) / "configs" / f"{name}.json"
        return resource.read_text(encoding="utf-8")
    raise ConfigurationError(
        f"--config {spec}: no such file or bundled configuration "
        f"(bundled: {', '.join(BUNDLED_CONFIGS)})")


def _apply_overrides(data, args) -> None:
    if not isinstance(data, dict):
        return
    for dest, block, key in _OVERRIDES:
        value = getattr(args, dest, None)
        if value is None:
            continue
        target = data.get(block)
        if target is None:
            target = {}
            data[block] = target
        if isinstance(target, dict):
            target[key] = value


def _load_run_config(args) -> RunConfig:
    import json

    text = load_config_text(args.config)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"config syntax: {exc.msg} (line {exc.lineno}, "
            f"column {exc.colno})") from exc
    _apply_overrides(data, args)
    return config_from_data(data)


def _write_output(out_path, text: str) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _cmd_spectrum(args) -> int:
    config = _load_run_config(args)
    ring = config.system.ring
    grid = momentum_grid(ring.n_sites)
    energies = band_energy(ring, grid)
    rows = [(m, grid[m], energies[m]) for m in range(grid.size)]
    _write_output(args.out, emit_csv(("m", "k", "eps_k"), rows))
    return EXIT_OK


def _cmd_couplings(args) -> int:
    config = _load_run_config(args)
    table = mode_table(config.system.ring)
    rows = [(entry.index_m, entry.momentum_k, abs(entry.coupling_h_a),
             abs(entry.coupling_h_b)) for entry in table.entries]
    _write_output(args.out, emit_csv(("m", "k", "abs_h_a", "abs_h_b"), rows))
    return EXIT_OK


def _cmd_dynamics(args) -> int:
    config = _load_run_config(args)
    generator = assemble_momentum_generator(config.system)
    trajectory = propagate(generator, photon_initial_state(generator),
                           config.propagation)
    populations = np.abs(trajectory.amplitudes) ** 2
    rows = []
    for i, t in enumerate(trajectory.times):
        p = populations[i]
        rows.append((t, time_to_ps(float(t), config.xi_scale_per_ps),
                     p[0], p[1], float(np.sum(p[2:])), float(np.sum(p)),
                     trajectory.eta_series[i], trajectory.loss_series[i]))
    header = ("t_xi", "t_ps", "p_photon", "p_acceptor", "p_donors", "norm2",
              "eta_cum", "loss_cum")
    _write_output(args.out, emit_csv(header, rows))
    return EXIT_OK


def _cmd_efficiency(args) -> int:
    config = _load_run_config(args)
    generator = assemble_momentum_generator(config.system)
    result = transfer_efficiency(generator, config.propagation)
    payload = {
        "eta": result.eta,
        "fluorescence_loss": result.fluorescence_loss,
        "residual": result.residual,
        "terminated_by": result.terminated_by.value,
        "converged": result.converged,
    }
    _write_output(args.out, emit_json(payload))
    if not result.converged:
        print("efficiency: propagation hit t_max with residual norm "
              f"{result.residual:.3e}; eta is a lower bound", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _sweep_rows(result) -> list[tuple]:
    return [(point[0], point[1], float(result.eta_values[i]),
             bool(result.converged_flags[i]))
            for i, point in enumerate(result.grid)]


def _cmd_sweep(args) -> int:
    config = _load_run_config(args)
    result = sweep_detuning(config.system, config.sweep.delta_values,
                            config.sweep.detuning_grid, config.propagation)
    header = ("delta", "detuning", "eta", "converged")
    _write_output(args.out, emit_csv(header, _sweep_rows(result)))
    return EXIT_OK


def _cmd_perturb(args) -> int:
    config = _load_run_config(args)
    result = sweep_detuning_perturbative(config.system,
                                         config.sweep.delta_values,
                                         config.sweep.detuning_grid)
    header = ("delta", "detuning", "eta", "converged")
    _write_output(args.out, emit_csv(header, _sweep_rows(result)))
    return EXIT_OK


def _cmd_pbc_compare(args) -> int:
    config = _load_run_config(args)
    full = assemble_momentum_generator(config.system)
    reduced = pbc_effective_generator(config.system)
    full_traj = propagate(full, photon_initial_state(full),
                          config.propagation)
    red_traj = propagate(reduced, photon_initial_state(reduced),
                         config.propagation)
    samples = min(full_traj.times.size, red_traj.times.size)
    pa_full = np.abs(full_traj.amplitudes[:samples, 1]) ** 2
    pa_red = np.abs(red_traj.amplitudes[:samples, 1]) ** 2
    worst = float(np.max(np.abs(pa_full - pa_red)))
    passed = worst < PBC_COMPARE_TOL
    payload = {
        "max_abs_pa_difference": worst,
        "tolerance": PBC_COMPARE_TOL,
        "samples": int(samples),
        "pass": passed,
    }
    _write_output(args.out, emit_json(payload))
    if not passed:
        print(f"pbc-compare: max |P_a| difference {worst:.3e} exceeds "
              f"{PBC_COMPARE_TOL:.1e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_validate(args) -> int:
    results = validate_suite.run_all()
    text, passed = validate_suite.report(results)
    _write_output(args.out, text)
    return EXIT_OK if passed else EXIT_VALIDATION


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True,
                        help="path to a JSON config, or a bundled name "
                             f"({', '.join(BUNDLED_CONFIGS)})")
    parser.add_argument("--out", help="output file (default: stdout)")
    group = parser.add_argument_group(
        "overrides", "take precedence over config values; "
                     "applied before validation")
    group.add_argument("--delta", type=float, help="dimerization")
    group.add_argument("--kappa", type=float, help="fluorescence rate")
    group.add_argument("--gamma", type=float, help="charge separation rate")
    group.add_argument("--omega", type=float, help="photon frequency")
    group.add_argument("--epsilon-a", type=float, dest="epsilon_a",
                       help="acceptor energy")
    group.add_argument("--coupling-j", type=float, dest="coupling_j",
                       help="photon-donor coupling")
    group.add_argument("--n-sites", type=int, dest="n_sites",
                       help="ring size")
    group.add_argument("--hopping-g", type=float, dest="hopping_g",
                       help="nearest-neighbor hopping")
    group.add_argument("--boundary", choices=("moebius", "periodic"),
                       help="ring boundary condition")
    group.add_argument("--t-max", type=float, dest="t_max",
                       help="propagation horizon")
    group.add_argument("--step-dt", type=float, dest="step_dt",
                       help="integrator step")
    group.add_argument("--sample-stride", type=int, dest="sample_stride",
                       help="steps between stored samples")
    group.add_argument("--residual-tol", type=float, dest="residual_tol",
                       help="early-stop threshold on the residual norm")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moebius-harvest",
        description="Simulate light harvesting by a dimerized ring with "
                    "Moebius or periodic boundary conditions.")
    commands = parser.add_subparsers(dest="command", required=True)

    specs = (
        ("spectrum", _cmd_spectrum, "band energies over the mode grid (CSV)"),
        ("couplings", _cmd_couplings,
         "collective-mode coupling strengths (CSV)"),
        ("dynamics", _cmd_dynamics, "population trajectory (CSV)"),
        ("efficiency", _cmd_efficiency, "transfer-efficiency summary (JSON)"),
        ("sweep", _cmd_sweep, "efficiency over the detuning grid (CSV)"),
        ("perturb", _cmd_perturb,
         "perturbative efficiency over the detuning grid (CSV)"),
        ("pbc-compare", _cmd_pbc_compare,
         "full vs reduced periodic-ring dynamics (JSON)"),
    )
    for name, handler, description in specs:
        sub = commands.add_parser(name, help=description)
        _add_config_arguments(sub)
        sub.set_defaults(func=handler)

    sub = commands.add_parser("validate",
                              help="run the oracle self-check suite")
    sub.add_argument("--out", help="output file (default: stdout)")
    sub.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # Downstream consumer (head, less) closed the stream; not an error.
        try:
            sys.stdout.close()
        except OSError:
            pass
        return EXIT_OK
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except MoebiusHarvestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
