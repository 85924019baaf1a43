"""Compute-kernel backend selection.

Two interchangeable kernel modules ship with the package: `kernels_numba`
(jit-compiled, the default) and `kernels_numpy` (pure numpy). The environment
variable MOEBIUS_HARVEST_BACKEND picks one at import time:

    auto   prefer numba, fall back to numpy if numba is missing (default)
    numba  require the jit kernels, fail if numba cannot be imported
    numpy  force the pure-numpy kernels

The flag selects an execution engine only. Interfaces, schemas, and results
are backend-independent up to floating-point rounding.
"""

import os

from .errors import ConfigurationError

ENV_VAR = "MOEBIUS_HARVEST_BACKEND"


def _select():
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ConfigurationError(
            f"{ENV_VAR}: must be one of auto, numba, numpy (got {choice!r})")
    if choice in ("auto", "numba"):
        try:
            from . import kernels_numba
            return "numba", kernels_numba
        except ImportError:
            if choice == "numba":
                raise
    from . import kernels_numpy
    return "numpy", kernels_numpy


BACKEND, _kernels = _select()

rk4_propagate = _kernels.rk4_propagate
jacobi_eigenvalues = _kernels.jacobi_eigenvalues

RK4_RAN_ALL_STEPS = 0
RK4_RESIDUAL_BELOW_TOL = 1
RK4_NON_FINITE = 2
