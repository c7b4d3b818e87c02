"""Command-line front end.

Every check prints one line

    CHECK <name> value=<x> tol=<t> status=PASS|FAIL

and the process exits with 0 when all checks pass, 2 when one fails and 1 on
an operational error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import GridTooCoarse, ParseError, TrifrobError

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

DEFAULT_TOLS = {
    "verify-prepotential": {"wdvv": 1e-9, "unit": 1e-12, "homogeneity": 1e-10, "pencil": 1e-6,
                            "pencil_shift": 1e-9, "curvature": 1e-6},
    "lift": {"linear": 1e-5, "euler": 1e-5, "metric": 1e-8, "diagonalization": 1e-10,
             "wdvv": 1e-6, "closure": 1e-6},
    "painleve": {"residual": 1e-4},
    "elliptic": {"W": 1e-5, "omega_identity": 1e-6, "jbar1": 1e-6, "jbar1_limit": 1e-6,
                 "symmetry": 1e-9},
    "isomonodromy": {"residual": 1e-6},
}


class Report:
    def __init__(self, out=None):
        self.lines: list[str] = []
        self.failed = False
        self.out = out

    def say(self, text: str) -> None:
        self.lines.append(text)
        print(text)

    def check(self, name: str, value: float, tol: float, passed: bool | None = None) -> bool:
        ok = (value < tol) if passed is None else passed
        self.failed |= not ok
        self.say(f"CHECK {name} value={value:.3e} tol={tol:.1e} status={'PASS' if ok else 'FAIL'}")
        return ok

    def finish(self) -> int:
        status = "FAIL" if self.failed else "PASS"
        self.say(f"SUMMARY status={status}")
        if self.out is not None:
            Path(self.out).mkdir(parents=True, exist_ok=True)
            (Path(self.out) / "report.txt").write_text("\n".join(self.lines) + "\n")
        return EXIT_FAIL if self.failed else EXIT_OK


# -- argument helpers ------------------------------------------------------------

def parse_grid(specs) -> dict:
    """``name=start:end:count`` entries to {name: array}."""
    out = {}
    for spec in specs or []:
        try:
            name, rng = spec.split("=", 1)
            a, b, n = rng.split(":")
            a, b, n = complex(a), complex(b), int(n)
        except ValueError:
            raise ParseError(f"grid spec {spec!r} is not name=start:end:count") from None
        if n < 1 or (n > 1 and a == b):
            raise ParseError(f"grid {name} is degenerate")
        vals = np.linspace(a, b, n)
        out[name] = vals.real if np.all(vals.imag == 0) else vals
    return out


def parse_tols(cmd: str, specs) -> dict:
    tols = dict(DEFAULT_TOLS[cmd])
    for spec in specs or []:
        if "=" in spec:
            k, v = spec.split("=", 1)
            if k not in tols:
                raise ParseError(f"unknown tolerance {k!r}; known: {sorted(tols)}")
            keys = [k]
        else:
            v, keys = spec, list(tols)
        x = float(v)
        if not x > 0:
            raise ParseError("tolerances must be positive")
        for k in keys:
            tols[k] = x
    return tols


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.6g}{z.imag:+.6g}j"


# -- verify-prepotential -----------------------------------------------------------

def _sample_points(F, count, rng):
    pts = []
    shift = np.zeros(F.n)
    if F.n > 1:
        shift[1] = 2.0
    tries = 0
    while len(pts) < count:
        tries += 1
        if tries > 100 * count:
            raise TrifrobError("could not sample admissible points")
        t = rng.uniform(-1, 1, F.n) + shift
        ok = True
        for r in F.radicals:
            from .frobenius.prepotential import Poly
            q = Poly.from_monomials(F.n, r.base)(t.astype(complex))
            if q.real <= 1e-3:
                ok = False
        if ok:
            pts.append(t.astype(complex))
    return pts


def cmd_verify_prepotential(args) -> int:
    from .frobenius import (Prepotential, check_flat_pencil, check_quasihomogeneity, check_trihamiltonian,
                            check_unit, evaluate_point, pencil_shift_residual, third_metric_curvature,
                            wdvv_residual_tensor)
    from .hurwitz.prepotentials import bundled

    tols = parse_tols("verify-prepotential", args.tol)
    if args.input:
        F = Prepotential.from_json(Path(args.input).read_text())
    else:
        F = bundled(args.example or "pavlyk")
    rep = Report(args.out)
    rep.say(f"prepotential {F.name} n={F.n} charge={F.charge}")
    rng = np.random.default_rng(args.seed)
    pts = _sample_points(F, args.points, rng)
    rep.check("wdvv", max(wdvv_residual_tensor(F.third_derivatives(t), F.eta_matrix) for t in pts), tols["wdvv"])
    rep.check("unit", max(check_unit(evaluate_point(F, t)) for t in pts), tols["unit"])
    rep.check("homogeneity", max(check_quasihomogeneity(F, 2.0, t) for t in pts), tols["homogeneity"])
    if F.n % 2:
        rep.say("trihamiltonian skipped: odd dimension")
        return rep.finish()
    th = check_trihamiltonian(F)
    spectrum = ", ".join(str(m) for m in th.mu_hat)
    rep.say(f"grading spectrum ({spectrum})")
    dev = 0.0 if th.ok else float(np.max(np.abs(th.mu_hat_squared - float(th.mu_hat[0]) ** 2 * np.eye(F.n))))
    rep.check("trihamiltonian", dev, 1e-15, passed=th.ok)
    if th.ok:
        rep.say(f"mu={th.mu}")
    sub = pts[:args.pencil_points]
    pen = [check_flat_pencil(F, t) for t in sub]
    rep.check("pencil_d1", max(p.d1_eta_tilde for p in pen), tols["pencil"])
    rep.check("pencil_d11", max(p.d11_eta_tilde for p in pen), tols["pencil"])
    rep.check("pencil_shift", max(pencil_shift_residual(F, t, 0.3) for t in sub), tols["pencil_shift"])
    curv = max(float(np.max(np.abs(third_metric_curvature(F, t)))) for t in sub)
    rep.check("third_metric_curvature", curv, tols["curvature"])
    return rep.finish()


# -- lift ----------------------------------------------------------------------------

def _load_lift(args):
    from .darboux_egoroff import DEState
    from .lift4d import a3_lift, lift_from_state
    from .schema import complex_from_json

    if args.input:
        try:
            d = json.loads(Path(args.input).read_text())
            st = DEState(*(complex_from_json(d[k]) for k in ("s", "a", "b", "c")))
            mu = complex_from_json(d["mu"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"initial data needs s, a, b, c, mu: {exc}") from exc
        return lift_from_state(st, mu, sign=args.sign)
    if (args.example or "a3") != "a3":
        raise TrifrobError(f"no lift for example {args.example!r}")
    return a3_lift(sign=args.sign)


def _sorted_triples(n):
    from itertools import combinations_with_replacement
    return list(combinations_with_replacement(range(n), 3))


def cmd_lift(args) -> int:
    from .lift4d import chart_params, reconstruct, verify_chart
    from .schema import complex_columns, write_csv

    tols = parse_tols("lift", args.tol)
    grid = parse_grid(args.grid) or {"v3": np.linspace(2, 3, 5), "v4": np.linspace(4, 5, 5)}
    for k in grid:
        if k not in ("v1", "v2", "v3", "v4"):
            raise ParseError(f"grid parameter {k!r} is not one of v1..v4")
    base = {"v1": [0.0], "v2": [1.0], "v3": [2.1], "v4": [3.3]}
    base.update({k: list(v) for k, v in grid.items()})
    charts = [np.array([a, b, c, d], dtype=complex)
              for a in base["v1"] for b in base["v2"] for c in base["v3"] for d in base["v4"]]
    for v in charts:
        chart_params(v)
    marked = args.marked_column - 1
    lift = _load_lift(args)
    rep = Report(args.out)
    rep.say(f"lift sign={args.sign} mu={_fmt(lift.mu)} kappa={_fmt(lift.kappa)} charts={len(charts)}")
    out = Path(args.out or "lift_out")
    out.mkdir(parents=True, exist_ok=True)
    psi_rows, res_rows, c_rows = [], [], []
    worst = {k: 0.0 for k in ("linear", "euler", "metric_off", "diagonalization", "wdvv", "closure")}
    kappas = []
    st = None
    for v in charts:
        st = lift.transport(v, start=st)
        r = verify_chart(lift, st, marked=marked)
        P = lift.psi_hat(st)
        rec = reconstruct(P, marked)
        vcols = [x for z in v for x in (z.real, z.imag)]
        psi_rows.append(vcols + [x for z in P.ravel() for x in (z.real, z.imag)])
        res_rows.append(vcols + [r.s.real, r.s.imag, r.eps.real, r.eps.imag, r.kappa.real, r.kappa.imag]
                        + [r.row()[k] for k in worst])
        c_rows.append(vcols + [x for (a, b, g) in _sorted_triples(4) for x in (rec.c[a, b, g].real,
                                                                                 rec.c[a, b, g].imag)])
        for k in worst:
            worst[k] = max(worst[k], r.row()[k])
        kappas.append(r.kappa)
    vhead = [c for i in range(1, 5) for c in complex_columns(f"v{i}")]
    write_csv(out / "psi_hat.csv", vhead + [c for i in range(4) for j in range(4)
                                             for c in complex_columns(f"psi{i + 1}{j + 1}")], psi_rows)
    write_csv(out / "residuals.csv", vhead + complex_columns("s") + complex_columns("eps")
              + complex_columns("kappa") + list(worst), res_rows)
    write_csv(out / "ctensor.csv", vhead + [c for (a, b, g) in _sorted_triples(4)
                                             for c in complex_columns(f"c{a + 1}{b + 1}{g + 1}")], c_rows)
    rep.check("linear_system", worst["linear"], tols["linear"])
    rep.check("euler_direction", worst["euler"], tols["euler"])
    kspread = max(abs(k - kappas[0]) for k in kappas)
    rep.check("metric_pattern", max(worst["metric_off"], kspread), tols["metric"])
    rep.check("diagonalization", worst["diagonalization"], tols["diagonalization"])
    rep.check("reconstructed_wdvv", worst["wdvv"], tols["wdvv"])
    rep.check("closure", worst["closure"], tols["closure"])
    rep.say(f"wrote {out / 'psi_hat.csv'}, {out / 'residuals.csv'}, {out / 'ctensor.csv'}")
    return rep.finish()


# -- painleve ----------------------------------------------------------------------

def cmd_painleve(args) -> int:
    from .fuchsian import painleve_y, pvi_point_residual, reduce_A, reduce_B
    from .hurwitz import a3
    from .schema import write_csv

    if (args.example or "a3") != "a3":
        raise TrifrobError(f"no Painleve data for example {args.example!r}")
    tols = parse_tols("painleve", args.tol)
    grid = parse_grid(args.grid) or {"s": np.linspace(1.01, 1.2, 50)}
    if set(grid) != {"s"}:
        raise ParseError("painleve takes a single grid named s")
    svals = np.asarray(grid["s"], dtype=complex)
    if len(svals) < 5:
        raise GridTooCoarse("at least five grid points are needed")
    variants = {"both": ("pvimu", "okamoto"), "pvimu": ("pvimu",), "okamoto": ("okamoto",)}[args.variant]
    builders = {"pvimu": reduce_A, "okamoto": reduce_B}
    rep = Report(args.out)
    rows = []
    worst = {v: 0.0 for v in variants}
    t_ref = None
    for s in svals:
        t_c = a3.t_from_s(s, t_ref)
        t_ref = t_c
        row = [s.real, s.imag]
        for var in variants:
            def y_fn(x, var=var, t_c=t_c):
                return painleve_y(builders[var](a3.a3_phi(a3.t_from_s(x, t_c)), a3.MU, x))
            r, y, _ = pvi_point_residual(y_fn, s, a3.MU, var, tol=tols["residual"])
            worst[var] = max(worst[var], r)
            row += [y.real, y.imag, r]
        rows.append(row)
    head = ["s_re", "s_im"]
    for var in variants:
        tag = "A" if var == "pvimu" else "B"
        head += [f"y{tag}_re", f"y{tag}_im", f"residual_{var}"]
    out = Path(args.out or "painleve_out")
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "painleve.csv", head, rows)
    for var in variants:
        rep.check(f"painleve_{var}", worst[var], tols["residual"])
    rep.say(f"wrote {out / 'painleve.csv'}")
    return rep.finish()


# -- elliptic ------------------------------------------------------------------------

def sample_elliptic_charts(count: int, seed: int) -> list:
    from .hurwitz.elliptic import s_eps_of_v, unit_segment_loop
    from .lift4d import chart_params

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = np.array([0, 1, complex(*rng.uniform(-3, 3, 2)), complex(*rng.uniform(-3, 3, 2))])
        try:
            chart_params(v)
            s, eps = s_eps_of_v(v)
            if abs(s.imag) < 0.05 or min(abs(v[i] - v[j]) for i in range(4) for j in range(i)) < 0.3:
                continue
            P, Q = v[2], v[3]
            unit_segment_loop([P, Q])
            if min(abs(P - 0.5), abs(Q - 0.5)) < 0.8:
                continue
        except TrifrobError:
            continue
        out.append(v)
    return out


def cmd_elliptic(args) -> int:
    from .hurwitz.elliptic import elliptic_period_data, elliptic_w_check
    from .schema import complex_from_json

    tols = parse_tols("elliptic", args.tol)
    if args.input:
        try:
            charts = [np.array([complex_from_json(z) for z in c]) for c in json.loads(Path(args.input).read_text())]
        except (ValueError, TypeError) as exc:
            raise ParseError(f"chart file must be a list of four [re, im] pairs per chart: {exc}") from exc
    else:
        charts = sample_elliptic_charts(args.charts, args.seed)
    rep = Report(args.out)
    worst = {"W": 0.0, "omega_identity": 0.0, "jbar1": 0.0, "jbar1_limit": 0.0}
    for v in charts:
        r = elliptic_w_check(v)
        rep.say("chart v=(" + ", ".join(_fmt(z) for z in v) + f") s={_fmt(r.s)} eps={_fmt(r.eps)} "
                + " ".join(f"{k}={x:.3e}" for k, x in r.summary().items()))
        for k in worst:
            worst[k] = max(worst[k], r.summary()[k])
    for k in worst:
        rep.check(k, worst[k], tols[k])
    sym = max(abs(elliptic_period_data(0.3).ibar + elliptic_period_data(0.7, side=-1).ibar - 1),
              abs(elliptic_period_data(0.3 + 0.2j).ibar + elliptic_period_data(0.7 - 0.2j).ibar - 1))
    rep.check("ibar_symmetry", float(sym), tols["symmetry"])
    return rep.finish()


# -- isomonodromy ----------------------------------------------------------------------

def cmd_isomonodromy(args) -> int:
    from .fuchsian import isomonodromy_residual, reduce_B
    from .hurwitz import a3

    if (args.example or "a3") != "a3":
        raise TrifrobError(f"no isomonodromy data for example {args.example!r}")
    tols = parse_tols("isomonodromy", args.tol)
    grid = parse_grid(args.grid)
    eps_vals = grid.get("eps", np.array([0.37, -0.5, 2.0, 0.8 + 0.3j]))
    t_vals = grid.get("t", np.array([2.0, 3 - 1j]))
    rep = Report(args.out)
    worst = 0.0
    for t0 in np.atleast_1d(t_vals):
        s0 = a3.s_of_t(t0)
        for eps in np.atleast_1d(eps_vals):
            X = a3.a3_chi(eps, t0)

            def fam(e, s, X=X, t0=t0, s0=s0):
                return X.nearby(e, a3.t_from_s(s0 if args.frozen else s, t0))

            def sysf(s, t0=t0):
                return reduce_B(a3.a3_phi(a3.t_from_s(s, t0)), a3.MU, s)

            r = isomonodromy_residual(sysf, fam, s0, eps) / max(1.0, float(np.max(np.abs(X.chi))))
            rep.say(f"point t={_fmt(t0)} eps={_fmt(eps)} residual={r:.3e}")
            worst = max(worst, r)
    rep.check("isomonodromy" + ("_frozen" if args.frozen else ""), worst, tols["residual"])
    return rep.finish()


# -- entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trifrob", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--example", help="bundled example name")
        sp.add_argument("--input", help="input document")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--tol", action="append", metavar="[NAME=]VALUE", help="tolerance override")
        sp.add_argument("--seed", type=int, default=0)
        if grid:
            sp.add_argument("--grid", nargs="+", metavar="NAME=START:END:COUNT")

    sp = sub.add_parser("verify-prepotential", help="WDVV, unit, homogeneity, tri-hamiltonian and pencil checks")
    common(sp, grid=False)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--pencil-points", type=int, default=20)
    sp.set_defaults(func=cmd_verify_prepotential)

    sp = sub.add_parser("lift", help="assemble the 4x4 transition frame on a chart grid")
    common(sp)
    sp.add_argument("--sign", type=int, choices=(1, -1), default=1)
    sp.add_argument("--marked-column", type=int, choices=(1, 2, 3, 4), default=1)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("painleve", help="y(s) and Painleve VI residuals")
    common(sp)
    sp.add_argument("--variant", choices=("pvimu", "okamoto", "both"), default="both")
    sp.set_defaults(func=cmd_painleve)

    sp = sub.add_parser("elliptic", help="genus-one rotation-matrix checks")
    common(sp, grid=False)
    sp.add_argument("--charts", type=int, default=5)
    sp.set_defaults(func=cmd_elliptic)

    sp = sub.add_parser("isomonodromy", help="s-dependence of the closed-form 2x2 solution")
    common(sp)
    sp.add_argument("--frozen", action="store_true", help="hold chi fixed in s (negative control)")
    sp.set_defaults(func=cmd_isomonodromy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GridTooCoarse as exc:
        print(f"WARNING GridTooCoarse: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (TrifrobError, OSError, KeyError, ValueError) as exc:
        print(f"ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
