import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trifrob.errors import BranchInconsistency, Degenerate, NonFinite
from trifrob.numkit import (BranchTracker, CPath, central_diff4, contour_quadrature, ellipse_loop, ode_flow,
                            partial, principal_power, quartic_roots, second_diff4)

cplx = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def test_ode_flow_exponential_along_polygon():
    path = CPath([0, 1 + 1j, 2j])
    y = ode_flow(lambda z, y: y, path, 1.0, tol=1e-12)
    assert abs(y - cmath.exp(2j)) < 1e-10


def test_ode_flow_matrix_state_keeps_shape():
    A = np.array([[0, 1], [-1, 0]], dtype=complex)
    Y = ode_flow(lambda z, Y: A @ Y, CPath.segment(0, np.pi / 2), np.eye(2), tol=1e-12)
    assert Y.shape == (2, 2)
    assert np.allclose(Y, [[0, 1], [-1, 0]], atol=1e-9)


def test_ode_flow_refuses_nonfinite_start():
    with pytest.raises(NonFinite):
        ode_flow(lambda z, y: y, CPath.segment(0, 1), np.nan)


def test_polygon_is_closed():
    assert CPath.polygon([0, 1, 1j]).end == 0


def test_quadrature_residue_of_inverse():
    loop = ellipse_loop(0, 1.0, 1.0, n=64)
    assert abs(contour_quadrature(lambda z: 1 / z, loop) - 2j * np.pi) < 1e-10


def test_quadrature_with_tracked_sqrt_changes_sheet():
    # z^{-1/2} has antiderivative 2 z^{1/2}, which ends at -2 after one turn
    br = BranchTracker(max_jump=0.5)
    loop = ellipse_loop(0, 1.0, 1.0, n=128)
    val = contour_quadrature(lambda z: 1 / br.sqrt(z, "k"), loop, tracker=br)
    assert abs(val + 4) < 1e-9


def test_branch_tracker_continues_past_cut():
    br = BranchTracker()
    vals = [br.sqrt(cmath.exp(1j * th), "s") for th in np.linspace(0, 2 * np.pi, 50)]
    assert abs(vals[-1] + 1) < 1e-12
    assert abs(principal_power(-1 + 0j, 0.5) - 1j) < 1e-15


def test_branch_tracker_rejects_large_jumps():
    br = BranchTracker(max_jump=0.5)
    br.sqrt(1.0, "x")
    with pytest.raises(BranchInconsistency):
        br.sqrt(1j, "x")


def test_branch_tracker_seed_and_snapshot():
    br = BranchTracker()
    br.seed("r", 4.0, -2.0)
    assert abs(br.sqrt(4.0, "r") + 2) < 1e-15
    snap = br.snapshot()
    br.sqrt(4 * cmath.exp(1j), "r")
    br.restore(snap)
    assert abs(br.sqrt(4.0, "r") + 2) < 1e-15


def test_difference_stencils():
    assert abs(central_diff4(np.sin, 0.3, 1e-3) - np.cos(0.3)) < 1e-11
    assert abs(second_diff4(np.exp, 0.2j, 1e-3) - np.exp(0.2j)) < 1e-7
    f = lambda x: x[0] ** 2 * x[1]
    assert abs(partial(f, np.array([1.0, 2.0]), 1, 1e-3) - 1.0) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.lists(cplx, min_size=4, max_size=4))
def test_quartic_roots_reproduce_polynomial(r):
    c = np.poly(np.array(r, dtype=complex))
    z = quartic_roots(*c)
    assert np.max(np.abs(np.poly(z) - c)) < 1e-9 * max(1.0, np.max(np.abs(c)))


def test_quartic_double_root_is_merged():
    z = np.sort_complex(quartic_roots(*np.poly([1, 1, 2, -3])))
    assert np.allclose(z, [-3, 1, 1, 2], atol=1e-10)


def test_quartic_refuses_degenerate_leading_coefficient():
    with pytest.raises(Degenerate):
        quartic_roots(0, 1, 0, 0, 1)
