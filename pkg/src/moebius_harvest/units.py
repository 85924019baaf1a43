"""Unit conversions.

Internally every energy and rate is a dimensionless multiple of the
donor-acceptor coupling strength, and times are measured in units of its
inverse. Physical values enter only through the scale factor below, which
converts to and from laboratory picosecond units.
"""

DEFAULT_XI_PER_PS = 10.0


def time_to_ps(t: float, xi_per_ps: float = DEFAULT_XI_PER_PS) -> float:
    return t / xi_per_ps


def time_from_ps(t_ps: float, xi_per_ps: float = DEFAULT_XI_PER_PS) -> float:
    return t_ps * xi_per_ps


def energy_to_per_ps(e: float, xi_per_ps: float = DEFAULT_XI_PER_PS) -> float:
    return e * xi_per_ps


def energy_from_per_ps(e_per_ps: float, xi_per_ps: float = DEFAULT_XI_PER_PS) -> float:
    return e_per_ps / xi_per_ps
