"""Closed forms of two Appell F1 functions and a double-series oracle.

    g(x, y) = F1(1/4; 3/4, 3/4; 1/2; x, y)
    f(x, y) = F1(5/4; 3/4, 3/4; 3/2; x, y)

Both closed forms are written with the square roots sqrt(1-x), sqrt(1-y) and
sqrt(x-y) as separate factors, so that each can be continued on its own by a
branch tracker.  With principal values they agree with the series near the
origin.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import NearSingular
from ..numkit import PRINCIPAL

SQRT2 = math.sqrt(2.0)
TAYLOR_RADIUS = 1e-4
SINGULAR_MARGIN = 1e-8


def _guard(x, y):
    if abs(1 - x) < SINGULAR_MARGIN or abs(1 - y) < SINGULAR_MARGIN:
        raise NearSingular(f"(x, y) = ({x}, {y}) is within {SINGULAR_MARGIN} of a singular line")


def appell_g(x: complex, y: complex, br=PRINCIPAL, key=()) -> complex:
    x, y = complex(x), complex(y)
    _guard(x, y)
    s1 = br.sqrt(1 - y, key + ("g", "s1"))
    s2 = br.sqrt(1 - x, key + ("g", "s2"))
    return (1 + 1 / (s1 * s2)) * br.power(s1 + s2, -0.5, key + ("g", "sum")) / SQRT2


def appell_f(x: complex, y: complex, br=PRINCIPAL, key=()) -> complex:
    x, y = complex(x), complex(y)
    _guard(x, y)
    s1 = br.sqrt(1 - y, key + ("f", "s1"))
    s2 = br.sqrt(1 - x, key + ("f", "s2"))
    if abs(x - y) < TAYLOR_RADIUS:
        # the closed form is even in sqrt(x - y); expand in w = (x - y)/(1 - y)
        w = (x - y) / (1 - y)
        q = br.sqrt(s1, key + ("f", "q"))
        return (1 + w / 8 + 7 * w * w / 128) / (q * s1 * s2)
    d = br.sqrt(x - y, key + ("f", "d"))
    n1 = br.sqrt(s1 + d, key + ("f", "n1"))
    n2 = br.sqrt(s1 - d, key + ("f", "n2"))
    return (n1 - n2) / (s1 * s2 * d)


def appell_f1_series(alpha, beta, beta2, gamma, x, y, terms: int = 80) -> complex:
    """Truncated double series sum (alpha)_{m+n} (beta)_m (beta2)_n / ((gamma)_{m+n} m! n!) x^m y^n."""
    k = np.arange(2 * terms)
    ratio_a = np.concatenate([[1.0], np.cumprod((alpha + k[:-1]) / (gamma + k[:-1]))])
    m = np.arange(terms)
    pb = np.concatenate([[1.0], np.cumprod((beta + m[:-1]) / (m[:-1] + 1))])
    pb2 = np.concatenate([[1.0], np.cumprod((beta2 + m[:-1]) / (m[:-1] + 1))])
    xm = complex(x) ** m
    yn = complex(y) ** m
    A = ratio_a[m[:, None] + m[None, :]]
    return complex(np.sum(A * (pb * xm)[:, None] * (pb2 * yn)[None, :]))


def appell_g_series(x, y, terms: int = 80) -> complex:
    return appell_f1_series(0.25, 0.75, 0.75, 0.5, x, y, terms)


def appell_f_series(x, y, terms: int = 80) -> complex:
    return appell_f1_series(1.25, 0.75, 0.75, 1.5, x, y, terms)
