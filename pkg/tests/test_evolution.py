import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _trajectories import random_slow
from twolevel.evolution import (
    amplitude_table,
    build_propagator,
    compact_propagator,
    parametrized_trajectory,
    transition_amplitude_formula,
    transition_amplitude_general,
)
from twolevel.hamiltonian import HamiltonianTrajectory, eigenframe_at
from twolevel.linalg import IDENTITY, SIGMA_X, frob_distance, unitarity_defect
from twolevel.parametrization import ParametrizationState, from_slow_params, parametrize


def zero(t):
    return np.zeros(np.shape(t))


def test_identity_at_origin(sine_bundles):
    st_ = sine_bundles(10).state
    assert frob_distance(build_propagator(st_, 0), IDENTITY) < 1e-12
    assert frob_distance(compact_propagator(st_, 0), IDENTITY) < 1e-12


def test_constant_transverse_drive():
    g = np.linspace(0, 4, 81)
    _, state = parametrize(0.8, zero, g, phi_omega=0.0)
    u = build_propagator(state)
    expect = np.cos(0.8 * g)[:, None, None] * IDENTITY - 1j * np.sin(0.8 * g)[:, None, None] * SIGMA_X
    assert np.max(frob_distance(u, expect)) < 1e-12


@given(
    st.floats(-3, 3), st.floats(-6, 6), st.floats(-20, 20), st.floats(-4, 4), st.floats(-4, 4)
)
def test_compact_form_matches_ab(chi, Theta, phi, pw, pw0):
    state = ParametrizationState(
        t=np.array([0.0, 1.0]),
        chi=np.array([0.0, chi]),
        Theta=np.array([0.0, Theta]),
        phi=np.array([pw0, phi]),
        phi_omega=np.array([pw0, pw]),
    )
    assert frob_distance(build_propagator(state, 1), compact_propagator(state, 1)) < 1e-12


@pytest.mark.parametrize("nu0T", [10, 20, 100])
def test_unitarity_and_completeness(sine_bundles, nu0T):
    b = sine_bundles(nu0T)
    u = b.propagator.u
    assert np.max(unitarity_defect(u)) < 1e-10
    table = amplitude_table(u, b.frames, b.frames[0])
    for frm in "+-":
        total = np.abs(table[(frm, "+")]) ** 2 + np.abs(table[(frm, "-")]) ** 2
        assert np.max(np.abs(total - 1)) < 1e-12
    assert table[("+", "+")][0] == pytest.approx(1)
    assert b.amplitude[0] == 0


def test_formula_vs_matrix_element_mid(sine_bundles):
    b = sine_bundles(10)
    i = len(b.t) // 2
    formula = transition_amplitude_formula(b.state, b.frames.theta[i], b.frames.theta[0], i)
    direct = transition_amplitude_general(b.propagator.u[i], b.frames[i], b.frames[0])
    assert abs(formula - direct) < 1e-10


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_formula_vs_matrix_element_random(seed):
    s, T = random_slow(np.random.default_rng(seed))
    h, state = from_slow_params(s, np.linspace(0, T, 1025))
    frames = eigenframe_at(h, state.t)
    formula = transition_amplitude_formula(state, frames.theta, frames.theta[0])
    direct = transition_amplitude_general(parametrized_trajectory(state), frames, frames[0])
    assert np.max(np.abs(formula - direct)) < 1e-10


def test_commuting_control():
    g = np.linspace(0, 20, 2001)
    h, state = parametrize(0.6, zero, g)
    frames = eigenframe_at(h, g)
    assert np.allclose(frames.theta, np.pi / 2)
    amp = transition_amplitude_formula(state, frames.theta, frames.theta[0])
    direct = transition_amplitude_general(build_propagator(state), frames, frames[0])
    assert np.max(np.abs(amp)) <= 1e-12
    assert np.max(np.abs(direct)) <= 1e-12


def test_larger_T_smaller_probability(sine_bundles):
    assert sine_bundles(100).probability.max() < sine_bundles(10).probability.max()


def test_unknown_label(sine_bundles):
    b = sine_bundles(10)
    with pytest.raises(ValueError):
        transition_amplitude_general(b.propagator, b.frames, b.frames[0], frm="0")
