"""Photon + acceptor + donor-ring systems and their effective generators.

Every generator in the package shares one index convention: 0 photon,
1 acceptor, 2.. donors (site amplitudes, collective modes, or the reduced
bright mode). Coupling blocks are Hermitian; decay enters only on the
diagonal, -i*Gamma on the acceptor and -i*kappa on each donor row, so the
anti-Hermitian part is diagonal and negative semidefinite.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .ring import Boundary, ModeTable, RingSpec, mode_table, site_hamiltonian


class Basis(Enum):
    SITE = "site"
    MOMENTUM = "momentum"
    PBC_EFFECTIVE = "pbc_effective"


@dataclass(frozen=True)
class SystemSpec:
    """One ring coupled to a photon mode and a charge-separating acceptor.

    All energies and rates are multiples of the donor-acceptor coupling
    unit; acceptor_coupling_xi is therefore 1 in any configuration-file
    driven run and is only varied programmatically (joint weak-coupling
    scaling of J and xi).
    """

    ring: RingSpec
    photon_omega: float = 0.0
    acceptor_energy: float = 0.0
    photon_coupling_j: float = 0.0
    acceptor_coupling_xi: float = 1.0
    charge_sep_gamma: float = 0.0
    fluorescence_kappa: float = 0.0

    def __post_init__(self):
        if not isinstance(self.ring, RingSpec):
            raise ConfigurationError(
                f"ring: expected a RingSpec (got {self.ring!r})")
        for name in ("photon_omega", "acceptor_energy", "photon_coupling_j",
                     "acceptor_coupling_xi", "charge_sep_gamma",
                     "fluorescence_kappa"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real) \
                    or not np.isfinite(value):
                raise ConfigurationError(
                    f"{name}: must be a finite real number (got {value!r})")
        for name in ("photon_coupling_j", "acceptor_coupling_xi",
                     "charge_sep_gamma", "fluorescence_kappa"):
            if getattr(self, name) < 0:
                raise ConfigurationError(
                    f"{name}: must be non-negative (got {getattr(self, name)})")


@dataclass(frozen=True)
class EffectiveGenerator:
    """Matrix M of i d(psi)/dt = M psi together with its basis bookkeeping."""

    basis: Basis
    matrix: np.ndarray
    labels: tuple[str, ...]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def assemble_site_generator(system: SystemSpec) -> EffectiveGenerator:
    """(N+2)-dimensional generator in the site basis.

    The photon couples with strength J to every donor site and the acceptor
    with strength xi; the donor block is the ring hopping matrix with
    -i*kappa added to its diagonal.
    """
    n = system.ring.n_sites
    m = np.zeros((n + 2, n + 2), dtype=np.complex128)
    m[0, 0] = system.photon_omega
    m[1, 1] = system.acceptor_energy - 1j * system.charge_sep_gamma
    m[2:, 2:] = site_hamiltonian(system.ring)
    idx = np.arange(2, n + 2)
    m[idx, idx] -= 1j * system.fluorescence_kappa
    m[0, 2:] = system.photon_coupling_j
    m[2:, 0] = system.photon_coupling_j
    m[1, 2:] = system.acceptor_coupling_xi
    m[2:, 1] = system.acceptor_coupling_xi
    labels = ("photon", "acceptor") + tuple(f"d{i}" for i in range(1, n + 1))
    return EffectiveGenerator(Basis.SITE, m, labels)


def assemble_momentum_generator(system: SystemSpec) -> EffectiveGenerator:
    """(N+2)-dimensional generator in the collective-mode basis.

    Diagonal (omega, eps_A - i*Gamma, eps_k - i*kappa ..., -eps_k - i*kappa
    ...); mode rows couple to photon and acceptor through the mode's
    coupling factor times J resp. xi.
    """
    table = mode_table(system.ring)
    half = system.ring.half_cells
    n = system.ring.n_sites
    m = np.zeros((n + 2, n + 2), dtype=np.complex128)
    m[0, 0] = system.photon_omega
    m[1, 1] = system.acceptor_energy - 1j * system.charge_sep_gamma
    eps = table.energies
    diag = np.concatenate([eps, -eps]) - 1j * system.fluorescence_kappa
    idx = np.arange(2, n + 2)
    m[idx, idx] = diag
    h = np.concatenate([table.h_a, table.h_b])
    m[2:, 0] = system.photon_coupling_j * h
    m[0, 2:] = np.conj(system.photon_coupling_j * h)
    m[2:, 1] = system.acceptor_coupling_xi * h
    m[1, 2:] = np.conj(system.acceptor_coupling_xi * h)
    labels = (("photon", "acceptor")
              + tuple(f"A{i}" for i in range(half))
              + tuple(f"B{i}" for i in range(half)))
    return EffectiveGenerator(Basis.MOMENTUM, m, labels)


def pbc_effective_generator(system: SystemSpec) -> EffectiveGenerator:
    """Reduced 3-level generator for periodic rings.

    On a periodic ring only the uniform (bright) donor mode couples, with
    factor sqrt(N) and energy 2g, so photon dynamics close on the triple
    (photon, acceptor, bright mode).
    """
    if system.ring.boundary is not Boundary.PERIODIC:
        raise ConfigurationError(
            "pbc_effective_generator: ring boundary must be periodic "
            f"(got {system.ring.boundary.value})")
    root = np.sqrt(system.ring.n_sites)
    m = np.zeros((3, 3), dtype=np.complex128)
    m[0, 0] = system.photon_omega
    m[1, 1] = system.acceptor_energy - 1j * system.charge_sep_gamma
    m[2, 2] = 2.0 * system.ring.hopping_g - 1j * system.fluorescence_kappa
    m[2, 0] = m[0, 2] = system.photon_coupling_j * root
    m[2, 1] = m[1, 2] = system.acceptor_coupling_xi * root
    return EffectiveGenerator(Basis.PBC_EFFECTIVE, m, ("photon", "acceptor", "bright"))


def extended_transform(table: ModeTable) -> np.ndarray:
    """Unitary taking (photon, acceptor, site...) to (photon, acceptor, mode...).

    Photon and acceptor rows pass through; the donor block is transform_w.
    """
    n = table.ring.n_sites
    u = np.zeros((n + 2, n + 2), dtype=np.complex128)
    u[0, 0] = 1.0
    u[1, 1] = 1.0
    u[2:, 2:] = table.transform_w
    return u
