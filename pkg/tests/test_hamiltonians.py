import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iontunnel.errors import DomainError
from iontunnel.hamiltonians import (
    REGIMES,
    RegimeParams,
    build_carrier_well1,
    build_extended_LD,
    build_hamiltonian,
    build_motional,
    build_red_sideband_both,
    build_red_sideband_well1,
)
from iontunnel.hilbert import DOWN, UP, BasisState, build_basis, excitation_number, sigma_z, well_swap

W = 1.0  # eta g
ETA = 0.1
G = W / ETA
LAM1 = math.sqrt((3 - math.sqrt(5)) / 2)
LAM2 = math.sqrt((3 + math.sqrt(5)) / 2)


def params(regime, R2=0.0, R1=0.0, phi=-math.pi / 2):
    return RegimeParams(R1, R2, G, ETA, phi, regime)


def idx(b, well, level, spin):
    return b.index(BasisState(well, level, spin))


def test_motional_zero_rates_diagonal():
    b = build_basis(2)
    h = build_motional(b, 0.0, 0.0, E0_offsets=[0.5, 1.5]).matrix
    assert np.allclose(h, np.diag(np.diag(h)))


def test_motional_excited_block():
    b = build_basis(2, electronic=False)
    h = build_motional(b, 0.0, 1.0).matrix
    i, j = b.index(BasisState(1, 2)), b.index(BasisState(2, 2))
    block = h[np.ix_([i, j], [i, j])]
    vals, vecs = np.linalg.eigh(block)
    assert np.allclose(vals, [-1.0, 1.0])
    # antisymmetric then symmetric superposition
    assert np.allclose(np.abs(vecs), 1 / math.sqrt(2))
    assert vecs[0, 0] * vecs[1, 0] < 0 < vecs[0, 1] * vecs[1, 1]


def test_jc_limit_red_sideband():
    b = build_basis(2)
    h = build_red_sideband_well1(params("red_sideband_well1")).matrix
    assert abs(h[idx(b, 1, 1, UP), idx(b, 1, 2, DOWN)]) == pytest.approx(W)
    assert np.count_nonzero(np.abs(h) > 0) == 2


def test_red_sideband_no_well2_flips():
    b = build_basis(2)
    h = build_red_sideband_well1(params("red_sideband_well1", R2=0.7, R1=0.1)).matrix
    for s in b:
        for t in b:
            if s.well == 2 and t.well == 2 and s.spin != t.spin:
                assert h[b.index(s), b.index(t)] == 0


def test_red_sideband_spectrum_chi1():
    b = build_basis(2)
    h = build_red_sideband_well1(params("red_sideband_well1", R2=1.0)).matrix
    act = [idx(b, 1, 1, UP), idx(b, 1, 2, DOWN), idx(b, 2, 2, DOWN)]
    vals = np.linalg.eigvalsh(h[np.ix_(act, act)])
    assert np.allclose(vals, [-math.sqrt(2), 0.0, math.sqrt(2)], atol=1e-12)
    full = np.linalg.eigvalsh(h)
    assert np.any(np.isclose(full, math.sqrt(2) * W))


def test_carrier_pure_rabi():
    h = build_carrier_well1(params("carrier_well1")).matrix
    vals = np.linalg.eigvalsh(h)
    assert np.allclose(sorted(vals), [-G, -G, 0, 0, 0, 0, G, G])


def test_carrier_no_well2_flips():
    b = build_basis(2)
    h = build_carrier_well1(params("carrier_well1", R2=G, R1=0.2 * G)).matrix
    assert h[idx(b, 2, 1, UP), idx(b, 2, 1, DOWN)] == 0
    assert h[idx(b, 2, 2, UP), idx(b, 2, 2, DOWN)] == 0


def test_carrier_lambda_frequencies():
    h = build_carrier_well1(params("carrier_well1", R2=G)).matrix
    vals = np.abs(np.linalg.eigvalsh(h)) / G
    assert np.any(np.isclose(vals, LAM1, atol=1e-12))
    assert np.any(np.isclose(vals, LAM2, atol=1e-12))


def test_both_wells_symmetry_and_spectrum():
    b = build_basis(2)
    h = build_red_sideband_both(params("red_sideband_both", R2=1.0)).matrix
    s = well_swap(b).matrix
    assert np.allclose(s @ h, h @ s)
    # single-excitation manifold reached from the ground state; the doubly
    # excited pair only carries +-chi tunneling
    one = [i for i, v in enumerate(np.diag(excitation_number(b).matrix).real) if v == 1]
    vals = np.linalg.eigvalsh(h[np.ix_(one, one)])
    assert np.allclose(vals, [-LAM2, -LAM1, LAM1, LAM2], atol=1e-12)


def test_both_wells_decouple_without_tunneling():
    b = build_basis(2)
    h = build_red_sideband_both(params("red_sideband_both")).matrix
    w1 = [i for i, s in enumerate(b) if s.well == 1]
    w2 = [i for i, s in enumerate(b) if s.well == 2]
    assert not np.any(h[np.ix_(w1, w2)])
    assert np.allclose(h[np.ix_(w1, w1)], h[np.ix_(w2, w2)])


def test_extended_reduces_to_red_sideband():
    p = params("extended_LD", R2=0.8, R1=-0.05)
    a = build_extended_LD(p, levels=2).matrix
    b = build_red_sideband_well1(params("red_sideband_well1", R2=0.8, R1=-0.05)).matrix
    assert np.array_equal(a, b)


def test_extended_eta_zero_is_motional():
    p = RegimeParams(0.1, 0.5, G, 0.0, -math.pi / 2, "extended_LD")
    h = build_extended_LD(p, levels=3)
    m = build_motional(h.basis, 0.1, 0.5, rates=[0.1, 0.5, 0.0])
    assert np.array_equal(h.matrix, m.matrix)


def test_extended_validation():
    with pytest.raises(DomainError):
        build_extended_LD(params("extended_LD"), levels=1)
    with pytest.raises(DomainError):
        build_extended_LD(params("extended_LD"), levels=3, rates=[1.0])


def test_debye_waller_factor():
    p = params("extended_LD")
    a = build_extended_LD(p, 2).matrix
    b = build_extended_LD(p, 2, ld_scalar_factor=True).matrix
    assert np.allclose(b, a * math.exp(-ETA**2))


def test_regime_mismatch():
    with pytest.raises(DomainError):
        build_carrier_well1(params("red_sideband_well1"))
    with pytest.raises(DomainError):
        RegimeParams(0, 0, 1.0, 0.1, 0.0, "blue")
    with pytest.raises(DomainError):
        RegimeParams(0, 0, 1.0, 1.5)


def test_params_chi():
    assert params("red_sideband_well1", R2=0.5).chi == pytest.approx(0.5)
    assert params("carrier_well1", R2=G).chi == pytest.approx(1.0)


phis = st.floats(-math.pi, math.pi)
rates = st.floats(-3.0, 3.0)


@settings(max_examples=40)
@given(st.sampled_from(REGIMES), rates, rates, phis)
def test_builders_hermitian(regime, r1, r2, phi):
    h = build_hamiltonian(params(regime, r2, r1, phi), levels=3)
    assert np.allclose(h.matrix, h.matrix.conj().T, atol=0, rtol=0)


@settings(max_examples=40)
@given(st.sampled_from(("red_sideband_well1", "red_sideband_both", "extended_LD")), rates, rates, phis)
def test_sideband_conserves_excitations(regime, r1, r2, phi):
    h = build_hamiltonian(params(regime, r2, r1, phi), levels=3)
    n = excitation_number(h.basis).matrix
    assert np.allclose(h.matrix @ n, n @ h.matrix)


@settings(max_examples=40)
@given(st.sampled_from(REGIMES), rates, phis, st.floats(-math.pi, math.pi))
def test_phase_covariance(regime, r2, phi, alpha):
    # shifting the laser phase equals a rotation about sigma_z
    a = build_hamiltonian(params(regime, r2, 0.1, phi))
    b = build_hamiltonian(params(regime, r2, 0.1, phi + alpha))
    d = np.diag(np.exp(0.5j * alpha * np.diag(sigma_z(a.basis).matrix).real))
    assert np.allclose(d @ a.matrix @ d.conj().T, b.matrix, atol=1e-12)
