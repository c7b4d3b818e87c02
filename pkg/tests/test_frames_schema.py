import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trifrob.darboux_egoroff import CanonicalChart
from trifrob.errors import ParseError, SingularFrame, TrifrobError
from trifrob.frames import TransitionFrame
from trifrob.schema import (complex_from_json, complex_to_json, matrix_from_json, matrix_to_json,
                            real_from_json, real_to_json)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(finite, finite)
def test_complex_round_trip(a, b):
    z = complex(a, b)
    assert complex_from_json(json.loads(json.dumps(complex_to_json(z)))) == z


def test_rationals_stay_exact():
    assert real_to_json(Fraction(-1, 4)) == "-1/4"
    assert real_from_json("-1/4") == Fraction(-1, 4)
    assert complex_from_json(["1/2", 0]) == 0.5
    for bad in ("x/y", True, None):
        with pytest.raises(ParseError):
            real_from_json(bad)


def test_matrix_round_trip_and_refusals():
    m = np.array([[1 + 2j, 3], [0.5j, -1]])
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)
    with pytest.raises(ParseError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[0, 0]]})
    with pytest.raises(ParseError):
        matrix_from_json({"rows": 2})
    with pytest.raises(ParseError):
        complex_from_json([1, 2, 3])


def test_transition_frame():
    chart = CanonicalChart((0, 1, 2))
    fr = TransitionFrame(np.eye(3), chart, [0.25, 0, -0.25], marked=1)
    assert fr.n == 3 and np.allclose(fr.mu_hat, np.diag([0.25, 0, -0.25]))
    assert np.allclose(fr.inverse(), np.eye(3)) and np.allclose(fr.gram(), np.eye(3))
    d = fr.to_json()
    assert d["marked_column"] == 2 and matrix_from_json(d["psi"]).shape == (3, 3)
    with pytest.raises(SingularFrame):
        TransitionFrame(np.zeros((3, 3)), chart, [0, 0, 0]).inverse()
    with pytest.raises(TrifrobError):
        TransitionFrame(np.eye(2), chart, [0, 0, 0])
    with pytest.raises(TrifrobError):
        TransitionFrame(np.eye(3), chart, [0, 0, 0], marked=3)
