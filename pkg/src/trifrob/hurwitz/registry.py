"""Named examples: a3, elliptic3, elliptic4."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..darboux_egoroff import CanonicalChart
from ..errors import TrifrobError


def _a3(t: complex = 2.0) -> dict:
    from . import a3
    from ..frames import TransitionFrame
    from ..fuchsian import reduce_B

    Phi = a3.a3_phi(t)
    s = a3.s_of_t(t)
    chart = CanonicalChart((0.0, 1.0, s))
    return {"name": "a3", "t": complex(t), "s": s, "chart": chart, "mu": a3.MU,
            "state": a3.a3_abc(t),
            "frame": TransitionFrame(Phi, chart, np.diag(a3.MU_HAT)),
            "system": reduce_B(Phi, a3.MU, s)}


def _elliptic3(s: complex = 0.4 + 0.5j) -> dict:
    from . import elliptic
    return {"name": "elliptic3", "s": complex(s), "chart": CanonicalChart((0.0, 1.0, s)),
            "state": elliptic.elliptic_v(s),
            "eta": elliptic.eta3((0.0, 1.0, s))}


def _elliptic4(v=(0.0, 1.0, 2.3 + 0.7j, -1.1 + 0.9j)) -> dict:
    from . import elliptic
    s, eps = elliptic.s_eps_of_v(v)
    return {"name": "elliptic4", "s": s, "eps": eps, "chart": CanonicalChart(tuple(v)),
            "state": elliptic.elliptic_v(s), "eta": elliptic.eta4(v)}


EXAMPLES: dict[str, Callable] = {"a3": _a3, "elliptic3": _elliptic3, "elliptic4": _elliptic4}


def example(name: str, *args, **kw) -> dict:
    try:
        fn = EXAMPLES[name]
    except KeyError:
        raise TrifrobError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
    return fn(*args, **kw)
