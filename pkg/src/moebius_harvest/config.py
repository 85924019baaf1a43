"""Run-configuration files: strict JSON schema, units, and defaults.

A configuration is a JSON object with the blocks

    {
      "units": "xi" | "per_ps",        optional, default "xi"
      "xi_scale_per_ps": 10.0,         optional, default 10.0
      "system": { ... },               required
      "propagation": { ... },          optional
      "sweep": { ... }                 optional
    }

All internal quantities are measured in multiples of the donor-acceptor
coupling: energies and rates in units of xi, times in units of 1/xi. With
units = "per_ps" the file instead carries energies/rates in 1/ps and times
in ps; they are converted on load using xi_scale_per_ps (xi expressed in
1/ps). Unknown keys are rejected at every level, and every diagnostic names
the offending dotted key and the violated constraint.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .propagate import PropagationConfig
from .ring import Boundary, RingSpec
from .system import SystemSpec
from .units import DEFAULT_XI_PER_PS, energy_from_per_ps, time_from_ps

UNITS_XI = "xi"
UNITS_PER_PS = "per_ps"
XI_CONSISTENCY_RTOL = 1e-12

TOP_KEYS = ("units", "xi_scale_per_ps", "system", "propagation", "sweep")
SYSTEM_KEYS = ("n_sites", "hopping_g", "delta", "boundary", "omega",
               "epsilon_a", "coupling_j", "xi", "gamma", "kappa")
SYSTEM_REQUIRED = ("n_sites", "hopping_g", "delta", "boundary")
PROPAGATION_KEYS = ("step_dt", "t_max", "residual_tol", "sample_stride")
SWEEP_KEYS = ("delta_values", "detuning_start", "detuning_stop",
              "detuning_count")


@dataclass(frozen=True)
class SweepGrid:
    """Product grid for efficiency sweeps: dimerizations x detunings."""

    delta_values: tuple[float, ...] = (0.0, 0.6)
    detuning_start: float = -4.0
    detuning_stop: float = 4.0
    detuning_count: int = 81

    def __post_init__(self):
        if not self.delta_values:
            raise ConfigurationError(
                "sweep.delta_values: must be a non-empty list")
        for value in self.delta_values:
            if not -1.0 <= value <= 1.0:
                raise ConfigurationError(
                    f"sweep.delta_values = {value}: must lie in [-1, 1]")
        if self.detuning_count < 1:
            raise ConfigurationError(
                f"sweep.detuning_count = {self.detuning_count}: "
                "must be an integer >= 1")

    @property
    def detuning_grid(self) -> np.ndarray:
        return np.linspace(self.detuning_start, self.detuning_stop,
                           self.detuning_count)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration in internal units."""

    system: SystemSpec
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    units: str = UNITS_XI
    xi_scale_per_ps: float = DEFAULT_XI_PER_PS


def _require_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigurationError(f"{path}: must be a JSON object "
                                 f"(got {type(value).__name__})")
    return value


def _reject_unknown(data: dict, allowed, path: str) -> None:
    for key in data:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise ConfigurationError(
                f"{where}: unknown key (allowed: {', '.join(allowed)})")


def _finite_real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real) \
            or not np.isfinite(value):
        raise ConfigurationError(
            f"{path} = {value!r}: must be a finite real number")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigurationError(f"{path} = {value!r}: must be an integer")
    return int(value)


def _boundary(value, path: str) -> Boundary:
    names = ", ".join(repr(b.value) for b in Boundary)
    if not isinstance(value, str):
        raise ConfigurationError(f"{path} = {value!r}: must be one of {names}")
    try:
        return Boundary(value)
    except ValueError:
        raise ConfigurationError(
            f"{path} = {value!r}: must be one of {names}") from None


class _UnitScale:
    """Converters from file units to internal units."""

    def __init__(self, units: str, xi_per_ps: float):
        self.per_ps = units == UNITS_PER_PS
        self.xi_per_ps = xi_per_ps

    def energy(self, value: float) -> float:
        return energy_from_per_ps(value, self.xi_per_ps) if self.per_ps \
            else value

    def time(self, value: float) -> float:
        return time_from_ps(value, self.xi_per_ps) if self.per_ps else value


def _parse_system(data: dict, scale: _UnitScale) -> SystemSpec:
    system = _require_object(data, "system")
    _reject_unknown(system, SYSTEM_KEYS, "system")
    for key in SYSTEM_REQUIRED:
        if key not in system:
            raise ConfigurationError(f"system.{key}: required key is missing")

    n_sites = _integer(system["n_sites"], "system.n_sites")
    if n_sites < 4 or n_sites % 2:
        raise ConfigurationError(
            f"system.n_sites = {n_sites}: must be an even integer >= 4")
    hopping = scale.energy(_finite_real(system["hopping_g"],
                                        "system.hopping_g"))
    if not hopping > 0:
        raise ConfigurationError(
            f"system.hopping_g = {hopping}: must be positive")
    delta = _finite_real(system["delta"], "system.delta")
    if not -1.0 <= delta <= 1.0:
        raise ConfigurationError(
            f"system.delta = {delta}: must lie in [-1, 1]")
    boundary = _boundary(system["boundary"], "system.boundary")

    rates = {}
    defaults = {"omega": 0.0, "epsilon_a": 0.0, "coupling_j": 0.0,
                "xi": 1.0, "gamma": 0.0, "kappa": 0.0}
    for key, default in defaults.items():
        if key in system:
            rates[key] = scale.energy(_finite_real(system[key],
                                                   f"system.{key}"))
        else:
            rates[key] = default
    for key in ("coupling_j", "xi", "gamma", "kappa"):
        if rates[key] < 0:
            raise ConfigurationError(
                f"system.{key} = {rates[key]}: must be non-negative")
    if abs(rates["xi"] - 1.0) > XI_CONSISTENCY_RTOL:
        raise ConfigurationError(
            f"system.xi = {rates['xi']}: must equal 1 in internal units "
            "(all energies and rates are measured in multiples of xi)")

    try:
        ring = RingSpec(n_sites=n_sites, hopping_g=hopping,
                        dimerization_delta=delta, boundary=boundary)
        return SystemSpec(ring=ring,
                          photon_omega=rates["omega"],
                          acceptor_energy=rates["epsilon_a"],
                          photon_coupling_j=rates["coupling_j"],
                          acceptor_coupling_xi=rates["xi"],
                          charge_sep_gamma=rates["gamma"],
                          fluorescence_kappa=rates["kappa"])
    except ConfigurationError as exc:
        raise ConfigurationError(f"system.{exc}") from exc


def _parse_propagation(data: dict, scale: _UnitScale) -> PropagationConfig:
    block = _require_object(data, "propagation")
    _reject_unknown(block, PROPAGATION_KEYS, "propagation")
    kwargs = {}
    if "step_dt" in block:
        kwargs["step_dt"] = scale.time(_finite_real(block["step_dt"],
                                                    "propagation.step_dt"))
    if "t_max" in block:
        kwargs["t_max"] = scale.time(_finite_real(block["t_max"],
                                                  "propagation.t_max"))
    if "residual_tol" in block:
        kwargs["residual_tol"] = _finite_real(block["residual_tol"],
                                              "propagation.residual_tol")
    if "sample_stride" in block:
        kwargs["sample_stride"] = _integer(block["sample_stride"],
                                           "propagation.sample_stride")
    try:
        return PropagationConfig(**kwargs)
    except ConfigurationError as exc:
        raise ConfigurationError(f"propagation.{exc}") from exc


def _parse_sweep(data: dict, scale: _UnitScale) -> SweepGrid:
    block = _require_object(data, "sweep")
    _reject_unknown(block, SWEEP_KEYS, "sweep")
    kwargs = {}
    if "delta_values" in block:
        values = block["delta_values"]
        if not isinstance(values, list):
            raise ConfigurationError(
                f"sweep.delta_values = {values!r}: must be a list of numbers")
        kwargs["delta_values"] = tuple(
            _finite_real(v, "sweep.delta_values") for v in values)
    if "detuning_start" in block:
        kwargs["detuning_start"] = scale.energy(
            _finite_real(block["detuning_start"], "sweep.detuning_start"))
    if "detuning_stop" in block:
        kwargs["detuning_stop"] = scale.energy(
            _finite_real(block["detuning_stop"], "sweep.detuning_stop"))
    if "detuning_count" in block:
        kwargs["detuning_count"] = _integer(block["detuning_count"],
                                            "sweep.detuning_count")
    return SweepGrid(**kwargs)


def config_from_data(data) -> RunConfig:
    """Validate a parsed JSON tree and convert it to internal units."""
    top = _require_object(data, "config")
    _reject_unknown(top, TOP_KEYS, "")

    units = top.get("units", UNITS_XI)
    if units not in (UNITS_XI, UNITS_PER_PS):
        raise ConfigurationError(
            f"units = {units!r}: must be {UNITS_XI!r} or {UNITS_PER_PS!r}")
    xi_scale = _finite_real(top.get("xi_scale_per_ps", DEFAULT_XI_PER_PS),
                            "xi_scale_per_ps")
    if not xi_scale > 0:
        raise ConfigurationError(
            f"xi_scale_per_ps = {xi_scale}: must be positive")
    scale = _UnitScale(units, xi_scale)

    if "system" not in top:
        raise ConfigurationError("system: required block is missing")
    system = _parse_system(top["system"], scale)
    propagation = _parse_propagation(top.get("propagation", {}), scale)
    sweep = _parse_sweep(top.get("sweep", {}), scale)
    return RunConfig(system=system, propagation=propagation, sweep=sweep,
                     units=units, xi_scale_per_ps=xi_scale)


def parse_config(text: str) -> RunConfig:
    """Parse JSON text into a validated RunConfig."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"config syntax: {exc.msg} (line {exc.lineno}, "
            f"column {exc.colno})") from exc
    return config_from_data(data)
