import mpmath
import numpy as np
import pytest

from trifrob.darboux_egoroff import align_signs, de_rhs, rotation_coefficients, v_from_gamma, v_from_state
from trifrob.errors import BranchCut, DomainViolation, RootCollision, TrifrobError
from trifrob.hurwitz import a3, appell, elliptic, example
from trifrob.numkit import BranchTracker, central_diff4


# -- A3 -----------------------------------------------------------------------------

def test_s_of_t_anchor_and_inverse():
    assert a3.s_of_t(2.0) == 128 / 125
    for t in (2.0, 3.5, 1.3 + 0.4j):
        roots = a3.t_roots(a3.s_of_t(t))
        assert np.min(np.abs(roots - t)) < 1e-10
        assert abs(a3.t_from_s(a3.s_of_t(t), t) - t) < 1e-10


@pytest.mark.parametrize("t", [2.0, 1.5, 4.0, 2 + 1j, 0.5 + 0.5j, -3 - 0.5j])
def test_frame_is_orthonormal_and_v_is_skew(t):
    Phi = a3.a3_phi(t)
    assert a3.phi_orthonormality_defect(Phi) < 1e-12
    V = Phi @ a3.MU_HAT @ np.linalg.inv(Phi)
    assert np.max(np.abs(V + V.T)) < 1e-12
    st = a3.a3_abc(t)
    assert abs(st.casimir + 1 / 16) < 1e-12


def test_abc_solves_the_reduced_system():
    t = 2.3 + 0.2j
    s = a3.s_of_t(t)
    d = central_diff4(lambda x: a3.a3_abc(a3.t_from_s(x, t)).abc, s, 1e-4)
    assert np.max(np.abs(d - de_rhs(a3.a3_abc(t)))) < 1e-9


def test_excluded_parameters():
    for t in (1.0, -0.5, 0.0):
        with pytest.raises(DomainViolation):
            a3.a3_phi(t)


def test_quartic_critical_values_are_the_poles():
    # the critical values of the rescaled quartic are 0, 1, s (eps enters as a shift)
    r = a3.a3_radicals(2.5)
    cv = np.sort_complex(a3.critical_values(r, 0.0))
    assert np.allclose(cv, np.sort_complex([0, 1, a3.s_of_t(2.5)]), atol=1e-10)


def test_closed_form_solution_residual_and_columns():
    X = a3.a3_chi(0.37, 2.0)
    assert X.residual < 1e-8
    assert X.chi.shape == (2, 2)
    assert abs(np.linalg.det(X.chi)) > 1e-6
    assert X.all_columns().shape == (2, 4)
    with pytest.raises(RootCollision):
        a3.a3_chi(1.0, 2.0)


def test_closed_form_continuation_along_eps():
    X = a3.a3_chi(0.37, 2.0)
    start = X.chi.copy()
    for e in np.linspace(0.37, 0.6, 12)[1:]:
        X.continue_to(e)
    assert not np.allclose(X.chi, start)
    Y = a3.a3_chi(0.6, 2.0, order=X.order)
    # same labelling, continued vs freshly built: equal up to branch choices, same span
    assert np.linalg.matrix_rank(np.hstack([X.chi, Y.chi]), tol=1e-8) == 2


# -- Appell functions -------------------------------------------------------------------

@pytest.mark.parametrize("x,y", [(0.2, -0.3), (0.4j, 0.1 - 0.2j), (-0.45, 0.3 + 0.3j), (0.1, 0.1 + 1e-6)])
def test_appell_closed_forms_match_mpmath(x, y):
    g = complex(mpmath.appellf1(0.25, 0.75, 0.75, 0.5, x, y))
    f = complex(mpmath.appellf1(1.25, 0.75, 0.75, 1.5, x, y))
    assert abs(appell.appell_g(x, y) - g) < 1e-12
    assert abs(appell.appell_f(x, y) - f) < 1e-10
    assert abs(appell.appell_g_series(x, y) - g) < 1e-12


def test_appell_tracked_branches_continue():
    br = BranchTracker()
    vals = [appell.appell_g(1 + 0.5 * np.exp(1j * th), 0.2, br) for th in np.linspace(np.pi, 3 * np.pi, 80)]
    # one turn around the singular line x = 1 changes the branch
    assert abs(vals[-1] - vals[0]) > 1e-3


# -- genus one ---------------------------------------------------------------------

@pytest.mark.parametrize("s", [0.3 + 0.5j, 2 + 1j, -0.5 + 0.1j, 0.3])
def test_periods_match_carlson(s):
    assert abs(elliptic.elliptic_period_data(s).omega - elliptic.carlson_omega(s)) < 1e-12


@pytest.mark.parametrize("s", [0.5 - 0.4j, 1.5, -2.0])
def test_periods_match_carlson_up_to_sheet(s):
    assert abs(elliptic.elliptic_period_data(s).omega ** 2 - elliptic.carlson_omega(s) ** 2) < 1e-11


def test_ibar_values_and_symmetry():
    I = elliptic.elliptic_period_data(0.3).ibar
    assert abs(I - (0.41923 - 0.21682j)) < 1e-5
    assert abs(I + elliptic.elliptic_period_data(0.7, side=-1).ibar - 1) < 1e-12
    I = elliptic.elliptic_period_data(0.3 + 0.2j).ibar
    assert abs(I + elliptic.elliptic_period_data(0.7 - 0.2j).ibar - 1) < 1e-12
    half = elliptic.elliptic_period_data(0.5).ibar
    assert abs(half.real - 0.5) < 1e-12 and abs(half.imag + 0.2285) < 1e-4


@pytest.mark.parametrize("s", [0.4 + 0.5j, 2 + 1j, -0.5 + 0.3j])
def test_three_point_metric_gives_closed_form_v(s):
    G = rotation_coefficients(elliptic.eta3, (0, 1, s))
    _, res = align_signs(v_from_gamma(G, (0, 1, s)), v_from_state(elliptic.elliptic_v(s)))
    assert res < 1e-9


def test_closed_form_v_solves_reduced_system():
    s = 0.4 + 0.5j
    st = elliptic.elliptic_v(s)
    d = central_diff4(lambda x: elliptic.elliptic_v(x).abc, s, 1e-3)
    assert np.max(np.abs(d - de_rhs(st))) < 1e-9
    assert abs(st.casimir + 0.25) < 1e-12
    with pytest.raises(BranchCut):
        elliptic.elliptic_v(0.3)


def test_four_point_check():
    r = elliptic.elliptic_w_check(np.array([0, 1, 2.3 + 0.7j, -1.1 + 0.9j]))
    assert r.w_residual < 1e-9
    assert r.omega_identity_residual < 1e-9
    assert r.jbar_residual < 1e-12
    assert r.jbar_limit_residual < 1e-8


def test_cycle_refuses_crowded_or_touching_points():
    with pytest.raises(TrifrobError):
        elliptic.unit_segment_loop([0.3 + 0.001j, 0.6 - 0.001j])
    with pytest.raises(TrifrobError):
        elliptic.unit_segment_loop([1.0])


# -- registry ----------------------------------------------------------------------

def test_registry_examples():
    ex = example("a3")
    assert ex["s"] == 128 / 125 and ex["frame"].n == 3
    assert abs(ex["state"].casimir + 1 / 16) < 1e-12
    assert example("elliptic3")["eta"].shape == (3,)
    assert example("elliptic4")["eta"].shape == (4,)
    with pytest.raises(TrifrobError):
        example("nope")
