import numpy as np
import pytest
from scipy.integrate import solve_ivp

from trifrob.errors import DegeneratePolynomial, GridTooCoarse, PoleAtS, TrifrobError
from trifrob.fuchsian import (PainleveSample, ResidueSystem, build_C_D, c_to_b, d_to_b, integrate_system,
                              isomonodromy_residual, painleve_y, pvi_point_residual, pvi_residual,
                              pvi_residuals, pvi_rhs, reduce_A, reduce_B, residue_distance, residues_R,
                              wronskian_residual)
from trifrob.hurwitz import a3
from trifrob.hurwitz.registry import example
from trifrob.numkit import CPath, central_diff4

PHI = a3.a3_phi(2.0)
S = a3.s_of_t(2.0)
MU = a3.MU


def test_residues_at_infinity():
    assert np.allclose(reduce_A(PHI, MU, S).infinity, MU * np.diag([1, -1]), atol=1e-14)
    assert np.allclose(reduce_B(PHI, MU, S).infinity, MU * np.diag([-1, -2]), atol=1e-14)


def test_c_and_d_families_are_gauges_of_b():
    C, D = build_C_D(PHI, MU, S)
    B = reduce_B(PHI, MU, S)
    assert residue_distance(c_to_b(C), B) < 1e-15
    assert residue_distance(d_to_b(D), B) < 1e-15


def test_residue_system_validation():
    with pytest.raises(PoleAtS):
        reduce_B(PHI, MU, 1.0)
    with pytest.raises(TrifrobError):
        ResidueSystem(S, "Z", (np.eye(2),) * 3, MU)
    with pytest.raises(TrifrobError):
        reduce_A(np.eye(2), MU, S)


def test_integrated_solution_matches_closed_form():
    t = 2.0
    X = a3.a3_chi(0.37, t)
    B = reduce_B(PHI, MU, S)
    got = integrate_system(B, CPath.segment(0.37, 0.45 + 0.05j), X.chi)
    assert np.allclose(got, X.nearby(0.45 + 0.05j, t), atol=1e-10)
    with pytest.raises(PoleAtS):
        integrate_system(B, CPath.segment(-0.5, 0.5), X.chi)


def test_wronskian_exponents():
    t = 2.5
    X = a3.a3_chi(0.3 + 0.4j, t)
    B = reduce_B(a3.a3_phi(t), MU, a3.s_of_t(t))
    assert all(abs(np.trace(M) - MU) < 1e-14 for M in B.residues)
    assert wronskian_residual(B, lambda e: X.nearby(e, t), 0.3 + 0.4j) < 1e-9


def test_isomonodromy_closed_form_and_frozen_control():
    t0 = 2.0
    s0 = a3.s_of_t(t0)
    X = a3.a3_chi(0.37, t0)

    def sysf(s):
        return reduce_B(a3.a3_phi(a3.t_from_s(s, t0)), MU, s)

    moving = isomonodromy_residual(sysf, lambda e, s: X.nearby(e, a3.t_from_s(s, t0)), s0, 0.37)
    frozen = isomonodromy_residual(sysf, lambda e, s: X.nearby(e, t0), s0, 0.37)
    assert moving < 1e-9
    assert frozen > 0.1


def test_twisted_period_residues_sum():
    fr = example("a3")["frame"]
    nu = 0.3
    R = residues_R(fr, nu)
    assert np.allclose(-sum(R.residues), (0.5 - nu) * np.eye(3) + fr.mu_hat, atol=1e-12)
    for Ri in R.residues:
        assert np.linalg.matrix_rank(Ri, tol=1e-10) == 1


def _y(build, s):
    return painleve_y(build(a3.a3_phi(a3.t_from_s(s)), MU, s))


@pytest.mark.parametrize("build,variant", [(reduce_A, "pvimu"), (reduce_B, "okamoto")])
def test_painleve_solution_agrees_with_ode_integration(build, variant):
    s0, s1 = 1.05, 1.15
    y = lambda s: _y(build, s)
    y0, yp0 = complex(y(s0)), complex(central_diff4(y, s0, 1e-3))
    sol = solve_ivp(lambda s, Y: [Y[1], pvi_rhs(s, Y[0], Y[1], MU, variant)], (s0, s1), [y0, yp0],
                    rtol=1e-12, atol=1e-14, method="DOP853")
    assert abs(sol.y[0, -1] - y(s1)) < 1e-8


def test_painleve_grid_and_pointwise_residuals():
    s = 1.02 + 1e-3 * np.arange(181)
    sample = PainleveSample(s, np.array([_y(reduce_A, x) for x in s]))
    assert pvi_residual(sample, MU, "pvimu", tol=1e-4) < 1e-5
    r, y0, h = pvi_point_residual(lambda x: _y(reduce_B, x), 1.1, MU, "okamoto")
    assert r < 1e-4 and abs(y0 - _y(reduce_B, 1.1)) == 0 and h <= 1e-3


def test_painleve_grid_refusals():
    s = np.linspace(1.05, 1.1, 4)
    with pytest.raises(GridTooCoarse):
        pvi_residuals(PainleveSample(s, 0.5 * s), MU, "pvimu")
    s = np.array([1.05, 1.06, 1.08, 1.09, 1.1])
    with pytest.raises(GridTooCoarse):
        pvi_residuals(PainleveSample(s, 0.5 * s), MU, "pvimu")
    with pytest.raises(TrifrobError):
        pvi_rhs(1.5, 0.3, 0.1, MU, "nope")


def test_painleve_y_refuses_degenerate_polynomial():
    M = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(DegeneratePolynomial):
        painleve_y(ResidueSystem(2.0, "B", (M, M, M), MU))


def test_painleve_y_of_synthetic_system():
    # top-right entries (1, 1, -2) at s = 3:
    # (eps-1)(eps-3) + eps(eps-3) - 2 eps(eps-1) = 3 - 5 eps
    mats = [np.array([[0, b], [0, 0]], dtype=complex) for b in (1, 1, -2)]
    assert abs(painleve_y(ResidueSystem(3.0, "B", tuple(mats), MU)) - 3 / 5) < 1e-15
