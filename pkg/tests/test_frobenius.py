import json
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from trifrob.errors import OddDimension, RadicalBranch, TrifrobError
from trifrob.frobenius import (Prepotential, check_flat_pencil, check_quasihomogeneity, check_trihamiltonian,
                               check_unit, check_wwdvv, evaluate_point, pencil_shift_residual,
                               third_metric_curvature, trivial_cubic, wdvv_residual_tensor)
from trifrob.hurwitz.prepotentials import (a4_prepotential, build_a4, build_pavlyk, bundled,
                                           pavlyk_prepotential, perturbed_pavlyk_prepotential)

T = sp.symbols("t1:5")
R = sp.Rational


def _pavlyk_sympy():
    t1, t2, t3, t4 = T
    return (t1 ** 2 * t4 / 2 + t1 * t2 * t3 + t2 ** 2 * t4 / 6 - t2 * t4 ** 3 / 108 + t2 * t3 ** 2 * t4 / 12
            + R(19, 2 ** 8 * 3 ** 4 * 5) * t4 ** 5 + R(7, 2 ** 7 * 3 ** 3) * t3 ** 2 * t4 ** 3
            + t3 ** 4 * t4 / (3 * 2 ** 8)
            + (48 * t2 + 3 * t3 ** 2 + t4 ** 2) ** R(5, 2) / (2 ** 5 * 3 ** 4 * 5))


POINT = np.array([0.3, 1.7, -0.4, 0.6], dtype=complex)


def test_pavlyk_value_and_third_derivatives_match_symbolic():
    F = pavlyk_prepotential()
    Fs = _pavlyk_sympy()
    sub = dict(zip(T, [sp.nsimplify(x.real) for x in POINT]))
    assert abs(F.value(POINT) - complex(Fs.subs(sub).evalf(30))) < 1e-13
    c = F.third_derivatives(POINT)
    for idx in [(0, 0, 3), (1, 1, 1), (1, 2, 3), (3, 3, 3), (2, 2, 2), (0, 1, 2)]:
        d = sp.diff(Fs, *(T[i] for i in idx))
        assert abs(c[idx] - complex(d.subs(sub).evalf(30))) < 1e-12


def test_pavlyk_value_at_unit_t2():
    # only the radical survives at (0, 1, 0, 0): 48^{5/2}/(2^5 3^4 5) = 32 sqrt(3)/45
    assert abs(pavlyk_prepotential().value([0, 1, 0, 0]) - 32 * np.sqrt(3) / 45) < 1e-14


def test_bundled_json_matches_builders():
    assert pavlyk_prepotential().to_dict() == build_pavlyk().to_dict()
    assert a4_prepotential().to_dict() == build_a4().to_dict()
    assert perturbed_pavlyk_prepotential().to_dict() == build_pavlyk(1e-3).to_dict()


def test_json_round_trip():
    F = pavlyk_prepotential()
    G = Prepotential.from_json(F.to_json())
    assert np.allclose(G.third_derivatives(POINT), F.third_derivatives(POINT), atol=0)


def test_bundled_unknown_name():
    with pytest.raises(KeyError):
        bundled("nope")


def test_pavlyk_frobenius_structure():
    F = pavlyk_prepotential()
    P = evaluate_point(F, POINT)
    assert wdvv_residual_tensor(P.c, P.eta) < 1e-13
    assert check_unit(P) < 1e-14
    assert check_quasihomogeneity(F, 2.0, POINT) < 1e-12
    assert check_wwdvv(P) < 1e-13
    assert F.homogeneity_defects() == []


def test_pavlyk_split_spectrum():
    th = check_trihamiltonian(pavlyk_prepotential())
    assert th.ok and th.mu == Fraction(-1, 4)
    assert th.mu_hat == (Fraction(-1, 4), Fraction(-1, 4), Fraction(1, 4), Fraction(1, 4))
    assert np.array_equal(th.mu_hat_squared, np.eye(4) / 16)


def test_pavlyk_flat_pencil_and_third_metric():
    F = pavlyk_prepotential()
    pen = check_flat_pencil(F, POINT)
    assert pen.d1_eta_tilde < 1e-8 and pen.d11_eta_tilde < 1e-6 and pen.d1_U < 1e-10
    assert pencil_shift_residual(F, POINT, 0.3) < 1e-12
    assert np.max(np.abs(third_metric_curvature(F, POINT))) < 1e-6


def test_a4_is_frobenius_but_not_split():
    F = a4_prepotential()
    P = evaluate_point(F, POINT)
    assert wdvv_residual_tensor(P.c, P.eta) < 1e-13
    th = check_trihamiltonian(F)
    assert not th.ok
    assert th.mu_hat == (Fraction(-3, 10), Fraction(-1, 10), Fraction(1, 10), Fraction(3, 10))
    # the third metric is curved for a non-split spectrum
    assert np.max(np.abs(third_metric_curvature(F, POINT))) > 1e-2


def test_perturbed_pavlyk_breaks_associativity():
    F = perturbed_pavlyk_prepotential()
    P = evaluate_point(F, POINT)
    assert wdvv_residual_tensor(P.c, P.eta) > 1e-4


def test_trivial_cubic_and_odd_dimension():
    F = trivial_cubic()
    assert F.n == 2
    assert check_trihamiltonian(F).ok
    G = Prepotential(3, [((1, 2), (2, 0, 1))], (), (1, Fraction(1, 2), 0), Fraction(1),
                     ((0, 0, 1), (0, 1, 0), (1, 0, 0)))
    with pytest.raises(OddDimension):
        check_trihamiltonian(G)


def test_radical_on_cut_is_refused():
    F = pavlyk_prepotential()
    with pytest.raises(RadicalBranch):
        F.third_derivatives([0, -1, 0, 0])


def test_invalid_definitions_are_refused():
    with pytest.raises(TrifrobError):
        Prepotential(2, (), (), (Fraction(1, 2), 1), 1, ((0, 1), (1, 0)))
    with pytest.raises(TrifrobError):
        Prepotential(2, (), (), (1, 1), 1, ((0, 0), (0, 0)))
