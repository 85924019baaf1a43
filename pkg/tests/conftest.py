"""Shared fixtures: one-off kernel warmup and reference system builders.

The warmup runs each compute kernel once before any test, so jit compilation
cost (a property of the toolchain, not of the algorithms) never lands inside
a runtime-bounded assertion.
"""

import numpy as np
import pytest

from moebius_harvest import (Boundary, PropagationConfig, RingSpec,
                             SystemSpec, assemble_momentum_generator,
                             dense_hermitian_eigenvalues,
                             photon_initial_state, propagate,
                             site_hamiltonian)


@pytest.fixture(scope="session", autouse=True)
def _kernel_warmup():
    ring = RingSpec(4, 1.0, 0.3, Boundary.MOEBIUS)
    dense_hermitian_eigenvalues(site_hamiltonian(ring))
    system = SystemSpec(ring=ring, photon_omega=-1.0, acceptor_energy=-1.0,
                        photon_coupling_j=0.5, acceptor_coupling_xi=1.0,
                        charge_sep_gamma=0.2, fluorescence_kappa=0.2)
    generator = assemble_momentum_generator(system)
    propagate(generator, photon_initial_state(generator),
              PropagationConfig(step_dt=0.01, t_max=1.0))


def fig3_system(delta: float, boundary: Boundary = Boundary.MOEBIUS,
                **overrides) -> SystemSpec:
    """N = 8 reference system: omega = eps_A = -6, J = xi = 1, Gamma = 0.3."""
    params = dict(photon_omega=-6.0, acceptor_energy=-6.0,
                  photon_coupling_j=1.0, acceptor_coupling_xi=1.0,
                  charge_sep_gamma=0.3, fluorescence_kappa=0.3)
    params.update(overrides)
    return SystemSpec(ring=RingSpec(8, 1.0, delta, boundary), **params)


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
