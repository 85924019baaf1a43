"""Generator assembly: site/momentum bases and the periodic 3-level reduction."""

import dataclasses

import numpy as np
import pytest

from moebius_harvest import (Basis, Boundary, ConfigurationError, RingSpec,
                             SystemSpec, assemble_momentum_generator,
                             assemble_site_generator, extended_transform,
                             mode_table, pbc_effective_generator,
                             site_hamiltonian)
from tests.conftest import fig3_system


def test_system_spec_rejects_bad_ring():
    with pytest.raises(ConfigurationError, match="ring"):
        SystemSpec(ring="not a ring")


@pytest.mark.parametrize("field", ["photon_coupling_j", "acceptor_coupling_xi",
                                   "charge_sep_gamma", "fluorescence_kappa"])
def test_system_spec_rejects_negative_rates(field):
    ring = RingSpec(8, 1.0, 0.0, Boundary.MOEBIUS)
    with pytest.raises(ConfigurationError, match=field):
        SystemSpec(ring=ring, **{field: -0.1})


def test_system_spec_rejects_non_finite():
    ring = RingSpec(8, 1.0, 0.0, Boundary.MOEBIUS)
    with pytest.raises(ConfigurationError, match="photon_omega"):
        SystemSpec(ring=ring, photon_omega=float("inf"))


def test_momentum_generator_diagonal_matches_reference_parameters():
    system = fig3_system(0.0)
    generator = assemble_momentum_generator(system)
    assert generator.basis is Basis.MOMENTUM
    assert generator.dimension == 10
    assert generator.labels[:2] == ("photon", "acceptor")
    diag = np.diagonal(generator.matrix)
    assert diag[0] == -6.0
    assert diag[1] == pytest.approx(-6.0 - 0.3j, abs=1e-15)
    eps = mode_table(system.ring).energies
    expected = np.concatenate([eps, -eps]) - 0.3j
    assert np.allclose(diag[2:], expected, atol=1e-14)


def test_generators_hermitian_without_decay():
    system = fig3_system(0.3, charge_sep_gamma=0.0, fluorescence_kappa=0.0)
    for generator in (assemble_site_generator(system),
                      assemble_momentum_generator(system)):
        m = generator.matrix
        assert np.max(np.abs(m - m.conj().T)) < 1e-12


@pytest.mark.parametrize("delta", [0.0, 0.6])
def test_anti_hermitian_part_negative_semidefinite(delta):
    system = fig3_system(delta)
    for generator in (assemble_site_generator(system),
                      assemble_momentum_generator(system)):
        m = generator.matrix
        anti = (m - m.conj().T) / 2j
        assert np.max(np.linalg.eigvalsh(anti)) <= 1e-12


def test_site_generator_structure():
    system = fig3_system(0.25, photon_coupling_j=0.7)
    m = assemble_site_generator(system).matrix
    assert np.allclose(m[0, 2:], 0.7) and np.allclose(m[2:, 0], 0.7)
    assert np.allclose(m[1, 2:], 1.0) and np.allclose(m[2:, 1], 1.0)
    assert m[0, 1] == 0.0 and m[1, 0] == 0.0
    donor = m[2:, 2:]
    expected = site_hamiltonian(system.ring) - 0.3j * np.eye(8)
    assert np.max(np.abs(donor - expected)) < 1e-15


def test_site_generator_decoupled_photon_when_j_zero():
    m = assemble_site_generator(fig3_system(0.0, photon_coupling_j=0.0)).matrix
    assert np.all(m[0, 1:] == 0) and np.all(m[1:, 0] == 0)
    assert m[0, 0] == -6.0


def test_uniform_donor_decay_in_momentum_basis():
    m = assemble_momentum_generator(fig3_system(0.45)).matrix
    assert np.allclose(np.diagonal(m)[2:].imag, -0.3, atol=1e-15)


@pytest.mark.parametrize("boundary", [Boundary.MOEBIUS, Boundary.PERIODIC])
@pytest.mark.parametrize("delta", [0.0, 0.6])
def test_basis_change_maps_site_to_momentum_generator(delta, boundary):
    system = fig3_system(delta, boundary)
    site = assemble_site_generator(system).matrix
    momentum = assemble_momentum_generator(system).matrix
    u = extended_transform(mode_table(system.ring))
    assert np.max(np.abs(u @ site @ u.conj().T - momentum)) < 1e-10


def test_site_and_momentum_generators_share_spectrum():
    system = fig3_system(0.4)
    site = np.sort_complex(np.linalg.eigvals(
        assemble_site_generator(system).matrix))
    momentum = np.sort_complex(np.linalg.eigvals(
        assemble_momentum_generator(system).matrix))
    assert np.max(np.abs(site - momentum)) < 1e-10


def test_extended_transform_is_unitary():
    u = extended_transform(mode_table(RingSpec(8, 1.0, 0.3, Boundary.MOEBIUS)))
    assert np.max(np.abs(u @ u.conj().T - np.eye(10))) < 1e-12
    assert u[0, 0] == 1.0 and u[1, 1] == 1.0


def test_pbc_effective_generator_structure():
    system = fig3_system(0.0, Boundary.PERIODIC)
    generator = pbc_effective_generator(system)
    assert generator.basis is Basis.PBC_EFFECTIVE
    assert generator.labels == ("photon", "acceptor", "bright")
    m = generator.matrix
    root8 = np.sqrt(8.0)
    assert m[0, 0] == -6.0
    assert m[1, 1] == pytest.approx(-6.0 - 0.3j, abs=1e-15)
    assert m[2, 2] == pytest.approx(2.0 - 0.3j, abs=1e-15)
    assert abs(m[0, 2]) == pytest.approx(root8, abs=1e-15)
    assert abs(m[1, 2]) == pytest.approx(root8, abs=1e-15)
    assert m[0, 1] == 0.0


def test_pbc_effective_generator_rejects_moebius():
    with pytest.raises(ConfigurationError, match="periodic"):
        pbc_effective_generator(fig3_system(0.0))


def test_pbc_effective_generator_has_no_dark_state():
    # with Gamma > 0 every eigenmode of the 3-level chain decays
    system = fig3_system(0.0, Boundary.PERIODIC, fluorescence_kappa=0.0)
    eigenvalues = np.linalg.eigvals(pbc_effective_generator(system).matrix)
    assert np.all(eigenvalues.imag < 0)


def test_pbc_matches_full_generator_restricted_to_bright_sector():
    # the 3-level matrix equals the (photon, acceptor, uniform-mode) block of
    # the momentum generator for a periodic ring
    system = fig3_system(0.3, Boundary.PERIODIC)
    full = assemble_momentum_generator(system).matrix
    table = mode_table(system.ring)
    magnitudes = np.concatenate([np.abs(table.h_a), np.abs(table.h_b)])
    bright = 2 + int(np.argmax(magnitudes))
    idx = np.array([0, 1, bright])
    block = full[np.ix_(idx, idx)]
    reduced = pbc_effective_generator(system).matrix
    assert np.max(np.abs(np.abs(block) - np.abs(reduced))) < 1e-12
