"""Bundled four-dimensional prepotentials.

* the D4-type algebraic prepotential (degrees 1, 1, 1/2, 1/2; charge 1/2);
* a perturbed copy of it (one coefficient shifted by 1e-3) for negative tests;
* the A4 polynomial prepotential (charge 3/5), whose grading spectrum
  (-3/10, -1/10, 1/10, 3/10) is not split, so its third metric is curved.
"""
from __future__ import annotations

from fractions import Fraction as Fr
from importlib import resources

from ..frobenius import Monomial, Prepotential, RadicalTerm, antidiagonal

DATA_FILES = {
    "pavlyk": "pavlyk.json",
    "pavlyk-perturbed": "pavlyk_perturbed.json",
    "a4": "a4.json",
    "trivial2": "trivial2.json",
}


def build_pavlyk(perturb: float = 0.0) -> Prepotential:
    monos = [
        Monomial(Fr(1, 2), (2, 0, 0, 1)),
        Monomial(1, (1, 1, 1, 0)),
        Monomial(Fr(1, 6), (0, 2, 0, 1)),
        Monomial(Fr(-1, 108), (0, 1, 0, 3)),
        Monomial(Fr(1, 12), (0, 1, 2, 1)),
        Monomial(Fr(19, 2 ** 8 * 3 ** 4 * 5), (0, 0, 0, 5)),
        Monomial(Fr(7, 2 ** 7 * 3 ** 3), (0, 0, 2, 3)),
        Monomial(Fr(1, 3 * 2 ** 8), (0, 0, 4, 1)),
    ]
    if perturb:
        m = monos[3]
        monos[3] = Monomial((m.coef[0] + Fr(perturb).limit_denominator(10 ** 9), 0), m.exps)
    rad = RadicalTerm(Fr(1, 2 ** 5 * 3 ** 4 * 5),
                      (Monomial(48, (0, 1, 0, 0)), Monomial(3, (0, 0, 2, 0)), Monomial(1, (0, 0, 0, 2))),
                      Fr(5, 2))
    name = "pavlyk" if not perturb else "pavlyk-perturbed"
    return Prepotential(4, tuple(monos), (rad,), (1, 1, Fr(1, 2), Fr(1, 2)), Fr(1, 2),
                        antidiagonal(4), name)


def build_a4() -> Prepotential:
    """A4 prepotential in flat coordinates ordered by decreasing degree."""
    monos = [
        Monomial(Fr(1, 2), (2, 0, 0, 1)),
        Monomial(1, (1, 1, 1, 0)),
        Monomial(Fr(1, 6), (0, 3, 0, 0)),
        Monomial(Fr(-1, 20), (0, 2, 0, 2)),
        Monomial(Fr(-1, 10), (0, 1, 2, 1)),
        Monomial(Fr(-1, 60), (0, 0, 4, 0)),
        Monomial(Fr(1, 150), (0, 0, 2, 3)),
        Monomial(Fr(-1, 15000), (0, 0, 0, 6)),
    ]
    return Prepotential(4, tuple(monos), (), (1, Fr(4, 5), Fr(3, 5), Fr(2, 5)), Fr(3, 5),
                        antidiagonal(4), "a4")


def _load(fname: str) -> Prepotential:
    text = resources.files("trifrob.hurwitz").joinpath("data").joinpath(fname).read_text()
    return Prepotential.from_json(text)


def pavlyk_prepotential() -> Prepotential:
    return _load(DATA_FILES["pavlyk"])


def perturbed_pavlyk_prepotential() -> Prepotential:
    return _load(DATA_FILES["pavlyk-perturbed"])


def a4_prepotential() -> Prepotential:
    return _load(DATA_FILES["a4"])


def bundled(name: str) -> Prepotential:
    if name not in DATA_FILES:
        raise KeyError(f"unknown bundled prepotential {name!r}; choose from {sorted(DATA_FILES)}")
    return _load(DATA_FILES[name])
