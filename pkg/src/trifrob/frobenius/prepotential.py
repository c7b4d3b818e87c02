"""Prepotentials: polynomial terms plus radical terms Q(t)**p, differentiated exactly."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from ..errors import ParseError, RadicalBranch, TrifrobError
from ..numkit import principal_power
from ..schema import real_from_json, real_to_json

SCHEMA = "trifrob.prepotential.v1"


def _real(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def as_coef(x) -> tuple:
    """Normalize a coefficient to an exact-if-possible (re, im) pair."""
    if isinstance(x, tuple) and len(x) == 2:
        return (_real(x[0]), _real(x[1]))
    if isinstance(x, complex):
        return (float(x.real), float(x.imag))
    return (_real(x), Fraction(0))


def coef_value(c) -> complex:
    return complex(float(c[0]), float(c[1]))


def _scale(c, k):
    return (c[0] * k, c[1] * k)


@dataclass(frozen=True)
class Monomial:
    coef: tuple
    exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "coef", as_coef(self.coef))
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))
        if any(e < 0 for e in self.exps):
            raise TrifrobError("negative exponent in monomial")


@dataclass(frozen=True)
class RadicalTerm:
    """coef * Q(t)**power with Q a polynomial and power a non-integer rational."""

    coef: tuple
    base: tuple
    power: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coef", as_coef(self.coef))
        object.__setattr__(self, "base", tuple(m if isinstance(m, Monomial) else Monomial(*m)
                                               for m in self.base))
        object.__setattr__(self, "power", Fraction(self.power))
        if self.power.denominator == 1:
            raise TrifrobError("radical power must be non-integer; expand it into monomials")


class Poly:
    """Sparse polynomial in n variables with exact differentiation."""

    def __init__(self, n: int, terms: dict):
        self.n = n
        self.terms = {k: v for k, v in terms.items() if v[0] != 0 or v[1] != 0}
        if self.terms:
            self._c = np.array([coef_value(v) for v in self.terms.values()])
            self._e = np.array(list(self.terms.keys()), dtype=int).reshape(-1, n)
        else:
            self._c = np.zeros(0, complex)
            self._e = np.zeros((0, n), int)

    @classmethod
    def from_monomials(cls, n, monos: Sequence[Monomial]):
        terms: dict = {}
        for m in monos:
            if len(m.exps) != n:
                raise TrifrobError("exponent vector has wrong length")
            old = terms.get(m.exps, (Fraction(0), Fraction(0)))
            terms[m.exps] = (old[0] + m.coef[0], old[1] + m.coef[1])
        return cls(n, terms)

    def diff(self, i: int) -> "Poly":
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = _scale(c, e[i])
        return Poly(self.n, out)

    def __call__(self, t) -> complex:
        if not self.terms:
            return 0j
        t = np.asarray(t, dtype=complex)
        return complex(np.sum(self._c * np.prod(t[None, :] ** self._e, axis=1)))

    def degree_check(self, degrees) -> set:
        return {sum(Fraction(d) * k for d, k in zip(degrees, e)) for e in self.terms}


@dataclass(frozen=True)
class Prepotential:
    """Quasi-homogeneous solution candidate of the associativity equations.

    Attributes
    ----------
    n : int
        Dimension.
    monomials, radicals
        Term lists.
    degrees : tuple of Fraction
        Degrees d_alpha of the flat coordinates; ``degrees[0]`` must be 1.
    charge : Fraction
        The charge d.
    eta : tuple of tuples
        Constant metric eta_{alpha beta}.
    name : str
        Free-form label carried through serialization.
    """

    n: int
    monomials: tuple
    radicals: tuple
    degrees: tuple
    charge: Fraction
    eta: tuple
    name: str = ""

    def __post_init__(self):
        n = int(self.n)
        object.__setattr__(self, "monomials", tuple(m if isinstance(m, Monomial) else Monomial(*m)
                                                    for m in self.monomials))
        object.__setattr__(self, "radicals", tuple(r if isinstance(r, RadicalTerm) else RadicalTerm(*r)
                                                   for r in self.radicals))
        object.__setattr__(self, "degrees", tuple(Fraction(d) for d in self.degrees))
        object.__setattr__(self, "charge", Fraction(self.charge))
        object.__setattr__(self, "eta", tuple(tuple(as_coef(x) for x in row) for row in self.eta))
        if len(self.degrees) != n or len(self.eta) != n or any(len(r) != n for r in self.eta):
            raise TrifrobError("degrees and eta must match the dimension")
        if self.degrees[0] != 1:
            raise TrifrobError("the unit coordinate must have degree 1")
        E = self.eta_matrix
        if not np.allclose(E, E.T, atol=0):
            raise TrifrobError("eta must be symmetric")
        if abs(np.linalg.det(E)) < 1e-12:
            raise TrifrobError("eta is degenerate")

    # -- basic data ---------------------------------------------------------
    @cached_property
    def eta_matrix(self) -> np.ndarray:
        return np.array([[coef_value(x) for x in row] for row in self.eta])

    @cached_property
    def eta_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.eta_matrix)

    @cached_property
    def degree_array(self) -> np.ndarray:
        return np.array([float(d) for d in self.degrees])

    @cached_property
    def mu_exact(self) -> tuple:
        """Grading spectrum mu_alpha = (2 - d)/2 - d_alpha, exact."""
        return tuple((2 - self.charge) / 2 - d for d in self.degrees)

    @cached_property
    def _poly(self) -> Poly:
        return Poly.from_monomials(self.n, self.monomials)

    @cached_property
    def _radical_polys(self):
        out = []
        n = self.n
        for r in self.radicals:
            Q = Poly.from_monomials(n, r.base)
            d1 = [Q.diff(i) for i in range(n)]
            d2 = [[d1[i].diff(j) for j in range(n)] for i in range(n)]
            d3 = [[[d2[i][j].diff(k) for k in range(n)] for j in range(n)] for i in range(n)]
            out.append((coef_value(r.coef), float(r.power), Q, d1, d2, d3))
        return out

    @cached_property
    def _third_polys(self) -> dict:
        out = {}
        for a, b, c in combinations_with_replacement(range(self.n), 3):
            out[(a, b, c)] = self._poly.diff(a).diff(b).diff(c)
        return out

    # -- evaluation ---------------------------------------------------------
    @staticmethod
    def _check_cut(Q: complex) -> None:
        if Q == 0 or (Q.real <= 0 and abs(Q.imag) <= 1e-14 * abs(Q)):
            raise RadicalBranch(f"radical argument {Q} lies on the principal cut")

    def value(self, t) -> complex:
        t = np.asarray(t, dtype=complex)
        v = self._poly(t)
        for k, p, Q, *_ in self._radical_polys:
            q = Q(t)
            if q == 0 and p > 0:
                continue
            self._check_cut(q)
            v += k * principal_power(q, p)
        return v

    def third_derivatives(self, t) -> np.ndarray:
        """Totally symmetric tensor c_{abc} = d^3 F / dt^a dt^b dt^c."""
        t = np.asarray(t, dtype=complex)
        n = self.n
        c = np.zeros((n, n, n), dtype=complex)
        for (a, b, g), P in self._third_polys.items():
            c[a, b, g] = P(t)
        for k, p, Q, d1, d2, d3 in self._radical_polys:
            q = Q(t)
            self._check_cut(q)
            q1 = principal_power(q, p - 1)
            q2 = principal_power(q, p - 2)
            q3 = principal_power(q, p - 3)
            g1 = np.array([P(t) for P in d1])
            for a, b, e in combinations_with_replacement(range(n), 3):
                val = (p * (p - 1) * (p - 2) * q3 * g1[a] * g1[b] * g1[e]
                       + p * (p - 1) * q2 * (d2[a][e](t) * g1[b] + g1[a] * d2[b][e](t)
                                             + d2[a][b](t) * g1[e])
                       + p * q1 * d3[a][b][e](t))
                c[a, b, e] += k * val
        # symmetrize from the sorted entries
        for a, b, e in combinations_with_replacement(range(n), 3):
            v = c[a, b, e]
            for perm in {(a, b, e), (a, e, b), (b, a, e), (b, e, a), (e, a, b), (e, b, a)}:
                c[perm] = v
        return c

    # -- transformations ----------------------------------------------------
    def with_degrees(self, degrees, charge=None) -> "Prepotential":
        return Prepotential(self.n, self.monomials, self.radicals, degrees,
                            self.charge if charge is None else charge, self.eta, self.name)

    def with_monomials(self, monomials, name=None) -> "Prepotential":
        return Prepotential(self.n, tuple(monomials), self.radicals, self.degrees,
                            self.charge, self.eta, self.name if name is None else name)

    def homogeneity_defects(self) -> list:
        """Terms whose weighted degree differs from 3 - d (empty for a consistent F)."""
        target = 3 - self.charge
        bad = []
        for m in self.monomials:
            w = sum(d * k for d, k in zip(self.degrees, m.exps))
            if w != target and sum(m.exps) >= 3:
                bad.append(m)
        for r in self.radicals:
            ws = Poly.from_monomials(self.n, r.base).degree_check(self.degrees)
            if len(ws) != 1 or next(iter(ws)) * r.power != target:
                bad.append(r)
        return bad

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        def cj(c):
            return [real_to_json(c[0]), real_to_json(c[1])]

        def mono(m):
            return {"coefficient": cj(m.coef), "exponents": list(m.exps)}

        return {
            "schema": SCHEMA,
            "name": self.name,
            "n": self.n,
            "charge": real_to_json(self.charge),
            "degrees": [real_to_json(d) for d in self.degrees],
            "eta": [cj(x) for row in self.eta for x in row],
            "monomials": [mono(m) for m in self.monomials],
            "radicals": [{"coefficient": cj(r.coef), "base": [mono(m) for m in r.base],
                          "power": real_to_json(r.power)} for r in self.radicals],
        }

    def to_json(self) -> str:
        # one term per line keeps the bundled documents diff-friendly
        d = self.to_dict()
        lines = ["{"]
        keys = list(d)
        for i, k in enumerate(keys):
            v = d[k]
            tail = "," if i < len(keys) - 1 else ""
            if isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f'  "{k}": [')
                lines += [f"    {json.dumps(x)}" + ("," if j < len(v) - 1 else "") for j, x in enumerate(v)]
                lines.append("  ]" + tail)
            else:
                lines.append(f'  "{k}": {json.dumps(v)}{tail}')
        lines.append("}")
        return "\n".join(lines)

    @classmethod
    def from_dict(cls, d: dict) -> "Prepotential":
        try:
            if d.get("schema", SCHEMA) != SCHEMA:
                raise ParseError(f"unknown schema {d.get('schema')!r}")
            n = int(d["n"])

            def cj(v):
                if not isinstance(v, list) or len(v) != 2:
                    raise ParseError(f"coefficient must be [re, im], got {v!r}")
                return (real_from_json(v[0]), real_from_json(v[1]))

            def mono(m):
                return Monomial(cj(m["coefficient"]), tuple(int(e) for e in m["exponents"]))

            eta_flat = [cj(v) for v in d["eta"]]
            if len(eta_flat) != n * n:
                raise ParseError("eta must have n*n entries")
            eta = tuple(tuple(eta_flat[i * n:(i + 1) * n]) for i in range(n))
            charge = real_from_json(d["charge"])
            degrees = [real_from_json(x) for x in d["degrees"]]
            if not isinstance(charge, Fraction) or not all(isinstance(x, Fraction) for x in degrees):
                raise ParseError("charge and degrees must be rational strings")
            radicals = []
            for r in d.get("radicals", []):
                p = real_from_json(r["power"])
                if not isinstance(p, Fraction):
                    raise ParseError("radical power must be rational")
                radicals.append(RadicalTerm(cj(r["coefficient"]), tuple(mono(m) for m in r["base"]), p))
            return cls(n, tuple(mono(m) for m in d["monomials"]), tuple(radicals),
                       tuple(degrees), charge, eta, str(d.get("name", "")))
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError, TrifrobError) as exc:
            raise ParseError(f"malformed prepotential document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Prepotential":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise ParseError("prepotential document must be a JSON object")
        return cls.from_dict(d)


def antidiagonal(n: int, value=1) -> tuple:
    return tuple(tuple(value if i + j == n - 1 else 0 for j in range(n)) for i in range(n))


def trivial_cubic(charge=Fraction(1, 2), extra=()) -> Prepotential:
    """n = 2 prepotential t1^2 t2 / 2 plus optional extra monomials in t2."""
    charge = Fraction(charge)
    return Prepotential(2, (Monomial(Fraction(1, 2), (2, 1)),) + tuple(extra), (),
                        (Fraction(1), 1 - charge), charge, antidiagonal(2), "trivial-cubic")
