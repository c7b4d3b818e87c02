import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from trifrob.darboux_egoroff import (CanonicalChart, DEState, abc_from_v, align_signs, de_flow, de_rhs,
                                     euler_combination, frame_flow, lax_identity_residual, lift_to_w,
                                     rotation_coefficients, side_matrices, v_from_gamma, v_from_state)
from trifrob.errors import CoincidentCoordinates, NonFinite, PoleAtS, SingularFrame
from trifrob.numkit import CPath

small = st.floats(-1.0, 1.0, allow_nan=False)


def test_rhs_values():
    st_ = DEState(2.0, 0.3, -0.5, 0.7)
    assert np.allclose(de_rhs(st_), [-0.5 * 0.7 / 2, 0.3 * 0.7 / (1 - 2), 0.3 * -0.5 / (2 * 1)])


def test_state_validation():
    with pytest.raises(PoleAtS):
        DEState(1.0, 0, 0, 0)
    with pytest.raises(NonFinite):
        DEState(2.0, np.inf, 0, 0)


def test_flow_matches_independent_real_integrator():
    st0 = DEState(1.5, 0.3, -0.2, 0.45)
    got = de_flow(st0, CPath.segment(1.5, 2.7), tol=1e-12)
    ref = solve_ivp(lambda s, y: [y[1] * y[2] / s, y[0] * y[2] / (1 - s), y[0] * y[1] / (s * (s - 1))],
                    (1.5, 2.7), [0.3, -0.2, 0.45], rtol=1e-12, atol=1e-14, method="DOP853")
    assert np.allclose(got.abc, ref.y[:, -1], atol=1e-10)


def test_flow_round_trip_and_pole_refusal():
    st0 = DEState(0.4 + 0.3j, 0.2j, 0.5, -0.3 + 0.1j)
    there = de_flow(st0, CPath([0.4 + 0.3j, 1.5 + 0.8j, 2.2 - 0.4j]))
    back = de_flow(there, CPath([2.2 - 0.4j, 1.5 + 0.8j, 0.4 + 0.3j]))
    assert np.allclose(back.abc, st0.abc, atol=1e-9)
    with pytest.raises(PoleAtS):
        de_flow(st0, CPath([0.4 + 0.3j, 1.0 + 0j, 2.0 + 0j]))


@settings(max_examples=30, deadline=None)
@given(small, small, small)
def test_v_is_cross_product_and_lift_is_skew(a, b, c):
    st_ = DEState(3.0, a, b, c)
    V = v_from_state(st_)
    x = np.array([0.3, -1.1, 0.7])
    assert np.allclose(V @ x, np.cross([a, b, c], x))
    assert abc_from_v(V) == (a, b, c)
    for sign in (1, -1):
        W = lift_to_w(st_, sign)
        assert np.allclose(W, -W.T)
        assert np.allclose(W[:3, :3], V)
        # W^2 = -(a^2+b^2+c^2) I on the lift
        assert np.allclose(W @ W, -(a * a + b * b + c * c) * np.eye(4))
    D = np.diag([1, 1, 1, -1])
    assert np.allclose(lift_to_w(st_, -1), D @ lift_to_w(st_, 1) @ D)


def test_side_matrices_and_lax_identity():
    u = (0.0, 1.0, 2.5 + 0.5j)
    V = v_from_state(DEState(u[2], 0.3, 0.2j, -0.4))
    Vs = side_matrices(V, u)
    for Vi in Vs:
        assert np.allclose(Vi, -Vi.T)
    assert np.allclose(sum(Vs), 0)
    # sum_i u_i V_i = V
    assert np.allclose(euler_combination(V, u, 1), V)
    assert lax_identity_residual(V, u) < 1e-14


def test_chart_validation():
    with pytest.raises(CoincidentCoordinates):
        CanonicalChart((0, 1, 1))
    with pytest.raises(NonFinite):
        CanonicalChart((0, np.nan, 1))


def test_rotation_coefficients_of_exponential_metric():
    A = np.array([[0.2, 0.5, -0.3], [0.1, 0.0, 0.4], [-0.6, 0.3, 0.2]])
    u = np.array([0.1, 0.9, -0.4 + 0.3j])
    eta = lambda v: np.exp(A @ v)
    G = rotation_coefficients(eta, u)
    r = np.sqrt(eta(u))
    ref = 0.5 * A.T * r[None, :] / r[:, None]
    np.fill_diagonal(ref, 0)
    assert np.allclose(G, ref, atol=1e-9)
    V = v_from_gamma(G, u)
    assert np.allclose(V, G @ np.diag(u) - np.diag(u) @ G)


def test_align_signs_recovers_conjugation():
    V = v_from_state(DEState(2.0, 0.3, 0.2, 0.1))
    D = np.diag([1.0, -1.0, 1.0])
    got, res = align_signs(D @ V @ D, V)
    assert res == 0 and np.array_equal(got, D)


def test_frame_flow_preserves_gram_and_conjugates_v():
    st0 = DEState(1.5, 0.3, -0.2, 0.45)
    Phi0 = np.eye(3)
    st1, Phi1 = frame_flow(st0, Phi0, CPath.segment(1.5, 2.0 + 0.3j))
    assert np.allclose(Phi1.T @ Phi1, np.eye(3), atol=1e-10)
    # V Phi = Phi * const: Phi^{-1} V Phi is preserved
    C0 = v_from_state(st0)
    C1 = np.linalg.solve(Phi1, v_from_state(st1) @ Phi1)
    assert np.allclose(C0, C1, atol=1e-9)
    with pytest.raises(SingularFrame):
        frame_flow(st0, np.zeros((3, 3)), CPath.segment(1.5, 2.0))
