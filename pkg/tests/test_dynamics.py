import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from iontunnel import dynamics as dyn
from iontunnel.errors import DomainError, NumericalError
from iontunnel.experiments import regime_params
from iontunnel.hamiltonians import build_carrier_well1, build_red_sideband_both, build_red_sideband_well1
from iontunnel.hilbert import DOWN, UP, BasisState, OperatorMatrix, StateVector, build_basis

PHI = -math.pi / 2
E1_DOWN = BasisState(1, 2, DOWN)
LAM1 = math.sqrt((3 - math.sqrt(5)) / 2)
LAM2 = math.sqrt((3 + math.sqrt(5)) / 2)


def grid(t_end=10 * math.pi, n=1001, scaling="w"):
    return dyn.TimeGrid(0.0, t_end, n, scaling)


def red_oracle(chi, g, phi=PHI, initial="ground_up", R1=0.0):
    h = build_red_sideband_well1(regime_params("red_sideband_well1", chi, 0.1, 10.0, phi, R1))
    return dyn.propagate_expm(h, dyn.initial_state(initial), g, "red_sideband_well1")


def both_oracle(chi, g, phi=PHI):
    h = build_red_sideband_both(regime_params("red_sideband_both", chi, 0.1, 10.0, phi))
    return dyn.propagate_expm(h, dyn.initial_state("ground_up"), g, "red_sideband_both")


def test_zero_hamiltonian_is_constant():
    b = build_basis(2)
    h = OperatorMatrix(b, np.zeros((8, 8), dtype=complex), hermitian=True)
    psi = dyn.initial_state("excited_down")
    for traj in (dyn.propagate_expm(h, psi, grid()), dyn.propagate_ode(h, psi, grid())):
        assert np.allclose(traj.amplitudes, psi.amplitudes)


def test_two_level_rabi():
    b = build_basis(1, electronic=True)
    sx = np.zeros((4, 4), dtype=complex)
    sx[0, 1] = sx[1, 0] = 1.0
    h = OperatorMatrix(b, sx, hermitian=True)
    g = grid()
    traj = dyn.propagate_expm(h, StateVector.basis_state(b, BasisState(1, 1, UP)), g)
    assert np.allclose(traj.population(BasisState(1, 1, DOWN)), np.sin(g.times) ** 2, atol=1e-13)


def test_jc_block():
    g = grid()
    p = red_oracle(0.0, g).population(E1_DOWN)
    assert np.allclose(p, np.sin(g.times) ** 2, atol=1e-13)


def test_ode_matches_expm_on_fig1():
    g = grid()
    h = build_red_sideband_well1(regime_params("red_sideband_well1", 1.0, 0.1, 10.0))
    psi = dyn.initial_state("ground_up")
    a = dyn.propagate_expm(h, psi, g)
    b = dyn.propagate_ode(h, psi, g, tol=1e-10)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) <= 1e-8
    assert np.max(np.abs(b.norm - 1)) <= 1e-9


def test_ode_physical_time_scaling():
    g = dyn.TimeGrid(0.0, 4 * math.pi, 401, "w", rate=1e4)
    h = build_red_sideband_well1(regime_params("red_sideband_well1", 0.5, 0.1, 1e5))
    psi = dyn.initial_state("ground_up")
    a = dyn.propagate_expm(h, psi, g)
    b = dyn.propagate_ode(h, psi, g, tol=1e-9)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) <= 1e-8


@pytest.mark.parametrize("tol", [1e-13, 1e-5])
def test_ode_tolerance_range(tol):
    h = build_red_sideband_well1(regime_params("red_sideband_well1", 1.0))
    with pytest.raises(DomainError):
        dyn.propagate_ode(h, dyn.initial_state("ground_up"), grid(), tol=tol)


def test_propagator_input_checks():
    h = build_red_sideband_well1(regime_params("red_sideband_well1", 1.0))
    with pytest.raises(DomainError):
        dyn.propagate_expm(h, StateVector(h.basis, np.ones(8)), grid())
    with pytest.raises(DomainError):
        dyn.propagate_expm(h, StateVector.basis_state(build_basis(3), BasisState(1, 1, UP)), grid())
    bad = OperatorMatrix(h.basis, np.triu(np.ones((8, 8), dtype=complex)))
    with pytest.raises(NumericalError):
        dyn.propagate_expm(bad, dyn.initial_state("ground_up"), grid())


@pytest.mark.parametrize("args", [(1.0, 0.5, 10), (0.0, 1.0, 1), (0.0, 1.0, 10, "t"), (0.0, 1.0, 10, "w", 0.0)])
def test_grid_validation(args):
    with pytest.raises(DomainError):
        dyn.TimeGrid(*args)


def test_unknown_initial_state():
    with pytest.raises(DomainError):
        dyn.initial_state("ground_down")


@pytest.mark.parametrize("chi", [0.0, 0.5, 1.0, 2.0])
def test_red_sideband_closed_form_matches_oracles(chi):
    g = grid()
    cf = dyn.closed_form_red_sideband(chi, g).coefficients()
    assert np.max(np.abs(cf - red_oracle(chi, g).coefficients())) <= 1e-12
    assert np.max(np.abs(cf - oracles.red_sideband_coefficients(chi, g.times))) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(-math.pi, math.pi))
def test_red_sideband_closed_form_any_phase(chi, phi):
    g = grid(n=201)
    cf = dyn.closed_form_red_sideband(chi, g, phi).coefficients()
    assert np.max(np.abs(cf - red_oracle(chi, g, phi).coefficients())) <= 1e-10


def test_red_sideband_initial_conditions():
    for verbatim in (False, True):
        c = dyn.closed_form_red_sideband(1.3, grid(), verbatim=verbatim).coefficients()[0]
        assert np.allclose(c, [1, 0, 0, 0])


def test_red_sideband_jc_limit():
    g = grid()
    c = dyn.closed_form_red_sideband(0.0, g).coefficients()
    assert np.allclose(np.abs(c[:, 2]) ** 2, np.sin(g.times) ** 2)
    assert np.allclose(c[:, 3], 0)


def test_verbatim_red_sideband_has_opposite_c12_sign():
    # the printed +i sin form is the complex conjugate of the solution at
    # phi_L = -pi/2; populations agree, amplitudes do not
    g = grid()
    v = dyn.closed_form_red_sideband(1.0, g, verbatim=True).coefficients()
    o = red_oracle(1.0, g).coefficients()
    assert np.allclose(np.abs(v) ** 2, np.abs(o) ** 2, atol=1e-12)
    assert np.allclose(v[:, 2], -o[:, 2], atol=1e-12)
    assert np.max(np.abs(v - o)) > 1.0


def test_maxima_state():
    t = math.pi * math.sqrt(2) / 4
    o = red_oracle(1.0, dyn.TimeGrid(0.0, t, 2)).coefficients()[-1]
    assert np.allclose(o, [0.5, 0, -1j / math.sqrt(2), -0.5], atol=1e-12)


def test_carrier_lambdas():
    assert dyn.carrier_lambdas(0.0) == (0.0, 1.0)
    l1, l2 = dyn.carrier_lambdas(1.0)
    assert abs(l1 - LAM1) <= 1e-12 and abs(l2 - LAM2) <= 1e-12
    l1, l2 = dyn.carrier_lambdas(1e-6)
    assert l1 == pytest.approx(1e-12, rel=1e-6)


@pytest.mark.parametrize("chi", [0.0, 0.5, 1.0, 2.0])
def test_carrier_closed_form_matches_oracle(chi):
    g = grid(12 * math.pi, 2001, "g")
    h = build_carrier_well1(regime_params("carrier_well1", chi, 0.1, 1.0))
    o = dyn.propagate_expm(h, dyn.initial_state("excited_up"), g, "carrier_well1").population(E1_DOWN)
    cf = dyn.closed_form_carrier(chi, g)
    assert np.max(np.abs(o - cf)) <= 1e-12
    assert cf[0] == 0.0


def test_carrier_reaches_unity():
    g = grid(40.0, 8001, "g")
    assert np.allclose(dyn.closed_form_carrier(0.0, g), np.sin(g.times) ** 2, atol=1e-15)
    assert np.max(dyn.closed_form_carrier(1.0, g)) >= 0.99


def test_both_wells_lambdas():
    l1, l2 = dyn.both_wells_lambdas(1.0)
    assert abs(l1 - LAM1) <= 1e-12 and abs(l2 - LAM2) <= 1e-12
    assert dyn.both_wells_lambdas(0.0) == (1.0, 1.0)


@pytest.mark.parametrize("chi", [0.0, 0.5, 1.0, 2.0])
def test_both_wells_closed_form_matches_oracle(chi):
    g = grid()
    cf = dyn.closed_form_both_wells(chi, g).coefficients()
    assert np.max(np.abs(cf - both_oracle(chi, g).coefficients())) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(-math.pi, math.pi))
def test_both_wells_verbatim_initial_conditions(chi, phi):
    c = dyn.closed_form_both_wells(chi, grid(n=11), phi, verbatim=True).coefficients()[0]
    assert np.allclose(c, [1, 0, 0, 0], atol=1e-12)


def test_both_wells_verbatim_deviation():
    # C11, C12 and C22 of the lambda-sum form agree with the propagator;
    # the C21 bracket does not and the set is not normalised
    g = grid()
    v = dyn.closed_form_both_wells(1.0, g, verbatim=True)
    o = both_oracle(1.0, g)
    d = np.max(np.abs(v.coefficients() - o.coefficients()), axis=0)
    assert np.all(d[[0, 2, 3]] <= 1e-12)
    assert d[1] == pytest.approx(0.894069, abs=1e-5)
    assert np.max(np.abs(v.norm - 1)) > 0.1


def test_both_wells_verbatim_jc_branch():
    g = grid()
    v = dyn.closed_form_both_wells(0.0, g, verbatim=True).coefficients()
    assert np.max(np.abs(v - both_oracle(0.0, g).coefficients())) <= 1e-12


def test_alternate_initial_state_bell():
    g = grid(4 * math.pi, 4001)
    o = red_oracle(1.0, g, initial="excited_down")
    p = o.population(E1_DOWN)
    assert np.max(p) >= 1 - 1e-6
    t = math.pi / (2 * math.sqrt(2))
    s = red_oracle(1.0, dyn.TimeGrid(0.0, t, 2), initial="excited_down").state(-1)
    b = s.basis
    assert abs(s.amplitude(BasisState(1, 1, UP))) ** 2 == pytest.approx(0.5, abs=1e-12)
    assert abs(s.amplitude(BasisState(2, 2, DOWN))) ** 2 == pytest.approx(0.5, abs=1e-12)
    assert s.amplitude(BasisState(1, 2, DOWN)) == pytest.approx(0, abs=1e-12)
    assert len(b) == 8


def test_trajectory_accessors():
    g = grid(n=11)
    t = red_oracle(1.0, g)
    assert t.coefficients().shape == (11, 4)
    assert np.allclose(t.norm, 1.0)
    assert t.state(0).amplitude(BasisState(1, 1, UP)) == pytest.approx(1.0)
