"""Command-line front end: inspection, index evaluation, sweeps, export.

Exit codes: 0 success, 1 usage, 2 domain error (bad inputs), 3 internal
consistency failure (the dual-route checks disagreed).  All floats are
serialized in shortest round-trip decimal so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .dispersion import (
    critical_point,
    make_wave_params,
    resonance_sigma,
    roots_k,
)
from .indices import (
    ConsistencyError,
    bf_coefficients,
    bubble_spectrum,
    find_kappa1,
    find_kappa2,
    ind1,
    ind2_coeffs,
    nu_from_ind1,
)
from .linsolve import MatchingError
from .monodromy import VALIDITY_GUARD, build_series
from .rootfind import BracketError
from .stokes import build_stokes, stokes_residual

_HEADER = {"tool": "stokesevans", "version": __version__,
           "validity_guard": {"delta": VALIDITY_GUARD, "eps": 0.01}}


def _fmt(x):
    """Shortest round-trip decimal for floats; recursive over containers."""
    if isinstance(x, (float, np.floating)):
        return float(repr(float(x)))
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(repr(float(x.real))), "im": float(repr(float(x.imag)))}
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, np.ndarray):
        return _fmt(x.tolist())
    return x


def _emit(obj, out: str | None) -> None:
    text = json.dumps(_fmt(obj), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_sigma(text: str, wp) -> tuple[float, int | None]:
    if text.startswith("res:"):
        order = int(text[4:])
        return resonance_sigma(wp, order).sigma_n, order
    return float(text), None


def _cmd_dispersion(args) -> int:
    wp = make_wave_params(args.kappa)
    out = {"inputs": {"kappa": args.kappa}, "outputs": {}, "provenance": "closed-form"}
    k_c, sigma_c = critical_point(wp)
    out["outputs"].update(
        kappa=wp.kappa, mu0=wp.mu0, period=wp.period, froude=wp.froude,
        k_c=k_c, sigma_c=sigma_c)
    if args.sigma is not None:
        sigma, order = _parse_sigma(args.sigma, wp)
        dp = roots_k(wp, sigma)
        out["outputs"]["sigma"] = sigma
        out["outputs"]["regime"] = dp.regime.value
        out["outputs"]["roots"] = {"k1": dp.k1, "k2": dp.k2, "k3": dp.k3, "k4": dp.k4}
        if order is not None:
            out["outputs"]["resonance_order"] = order
    _emit({**_HEADER, **out}, args.out)
    return 0


def _terms_table(f) -> list[dict]:
    rows = []
    for t in f.terms():
        rows.append({
            "coeff": complex(t.coeff),
            "x_power": t.x_power,
            "x_freq": list(t.x_freq),
            "y_power": t.y_power,
            "y_kind": ("const", "cosh", "sinh")[t.y_kind],
            "y_rate": list(t.y_rate),
        })
    return rows


def _cmd_stokes(args) -> int:
    wp = make_wave_params(args.kappa)
    se = build_stokes(wp)
    out = {"inputs": {"kappa": args.kappa, "order": args.order}, "outputs": {},
           "provenance": "transcribed+rederived"}
    for i in range(1, args.order + 1):
        out["outputs"][f"order{i}"] = {
            "phi_terms": _terms_table(se.phi[i - 1]),
            "eta_terms": _terms_table(se.eta[i - 1]),
            "u_terms": _terms_table(se.u[i - 1]),
            "phibar": se.phibar[i - 1],
            "mu": se.mu[i - 1] if i < 3 else se.mu[2],
            "residual": stokes_residual(se, i),
        }
    _emit({**_HEADER, **out}, args.out)
    return 0


def _cmd_monodromy(args) -> int:
    wp = make_wave_params(args.kappa)
    sigma, order = _parse_sigma(args.sigma, wp)
    ms = build_series(wp, sigma=None if order else sigma,
                      resonance_order=order, max_order=args.order)
    out = {"inputs": {"kappa": args.kappa, "sigma": sigma,
                      "resonance_order": order, "max_order": args.order},
           "outputs": {}, "provenance": {}}
    for mn, mat in sorted(ms.coeffs.items()):
        key = f"a{mn[0]}{mn[1]}"
        out["outputs"][key] = [[complex(v) for v in row] for row in mat]
        out["provenance"][key] = [list(r) for r in ms.provenance[mn]]
    _emit({**_HEADER, **out}, args.out)
    return 0


def _indices_payload(kappa: float, which: str) -> dict:
    wp = make_wave_params(kappa)
    out: dict = {"kappa": kappa}
    if which in ("ind1", "both"):
        bf = bf_coefficients(wp)
        out["ind1"] = bf.ind1
        out["nu"] = bf.nu
        out["alpha10"] = complex(bf.alpha10)
        out["alpha20"] = complex(bf.alpha20)
        out["alpha11"] = complex(bf.alpha11)
        out["f1"] = complex(bf.f1)
        out["f2"] = complex(bf.f2)
        out["f2_closed"] = complex(bf.f2_closed)
    if which in ("ind2", "both"):
        bc = ind2_coeffs(wp)
        out["ind2"] = bc.ind2
        out["sigma2"] = bc.sigma
        out["gamma_star_per_eps2"] = bc.gamma_star
        out["witness12"] = bc.witness12
        out["witness21"] = bc.witness21
        out["d_coeffs"] = {k: complex(getattr(bc, k))
                           for k in ("d200", "d020", "d004", "d110", "d102", "d012")}
        out["alpha"] = {
            "alpha10": complex(bc.alpha10), "alpha02": complex(bc.alpha02),
            "alpha20": bc.alpha20, "alpha12": bc.alpha12, "alpha04": bc.alpha04,
        }
    return out


def _cmd_indices(args) -> int:
    if args.action == "find-kappa1":
        root = find_kappa1()
        print(f"{root:.9f}")
        return 0
    if args.action == "find-kappa2":
        root = find_kappa2()
        print(f"{root:.7f}")
        return 0
    if args.kappa is None:
        print("indices: --kappa required unless an action is given", file=sys.stderr)
        return 1
    payload = _indices_payload(args.kappa, args.which)
    _emit({**_HEADER, "inputs": {"kappa": args.kappa, "which": args.which},
           "outputs": payload, "provenance": "pipeline+closed-form"}, args.out)
    return 0


def _cmd_spectrum(args) -> int:
    wp = make_wave_params(args.kappa)
    curve = bubble_spectrum(wp, args.eps, n_points=args.points)
    rows = ["gamma,re_delta,im_delta"]
    for g, re, im in zip(curve.gamma, curve.re_plus, curve.im_plus):
        rows.append(f"{g!r},{re!r},{im!r}")
    for g, re, im in zip(curve.gamma[::-1], curve.re_minus[::-1], curve.im_minus[::-1]):
        rows.append(f"{g!r},{re!r},{im!r}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        sidecar = args.out.rsplit(".", 1)[0] + ".json"
    else:
        sys.stdout.write(text)
        sidecar = None
    bc = curve.coeffs
    meta = {**_HEADER,
            "inputs": {"kappa": args.kappa, "eps": args.eps},
            "outputs": {
                "ind2": bc.ind2, "sigma": bc.sigma, "k2": bc.k2, "k4": bc.k4,
                "gamma_star": curve.gamma_star, "max_re_delta": curve.max_re,
                "alpha": {"alpha10": complex(bc.alpha10),
                          "alpha02": complex(bc.alpha02),
                          "alpha20": bc.alpha20, "alpha12": bc.alpha12,
                          "alpha04": bc.alpha04},
                "d_coeffs": {k: complex(getattr(bc, k))
                             for k in ("d200", "d020", "d004", "d110", "d102", "d012")},
            },
            "provenance": "pipeline"}
    if sidecar:
        with open(sidecar, "w") as fh:
            fh.write(json.dumps(_fmt(meta), indent=2, sort_keys=True) + "\n")
    return 0


def _sweep_row(kappa: float, targets: list[str], eps: float) -> dict:
    wp = make_wave_params(kappa)
    row: dict = {"kappa": kappa}
    if "ind1" in targets:
        row["ind1"] = ind1(wp)
        row["nu"] = nu_from_ind1(wp)
    if "resonances" in targets:
        for n in (2, 3):
            row[f"sigma{n}"] = resonance_sigma(wp, n).sigma_n
    if "ind2" in targets or "bubble" in targets:
        bc = ind2_coeffs(wp)
        row["ind2"] = bc.ind2
        if "bubble" in targets:
            curve = bubble_spectrum(wp, eps, coeffs=bc)
            row["bubble_max_re"] = curve.max_re
            row["bubble_gamma_star"] = curve.gamma_star
    return row


def _cmd_sweep(args) -> int:
    lo, hi, count = args.kappa.split(":")
    lo, hi, count = float(lo), float(hi), int(count)
    if lo <= 0 or count < 1:
        print("sweep: need lo > 0 and count >= 1", file=sys.stderr)
        return 2
    targets = [t.strip() for t in args.targets.split(",")]
    bad = set(targets) - {"ind1", "ind2", "resonances", "bubble"}
    if bad:
        print(f"sweep: unknown targets {sorted(bad)}", file=sys.stderr)
        return 1
    grid = [lo + (hi - lo) * i / max(count - 1, 1) for i in range(count)]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda k: _sweep_row(k, targets, args.eps), grid))
    if args.format == "json":
        _emit({**_HEADER, "inputs": {"kappa": args.kappa, "targets": targets,
                                     "eps": args.eps},
               "outputs": rows, "provenance": "pipeline"}, args.out)
        return 0
    cols = list(rows[0].keys())
    lines = ["# " + json.dumps(_fmt(_HEADER), sort_keys=True), ",".join(cols)]
    for row in rows:
        lines.append(",".join(repr(float(row[c])) for c in cols))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokesevans",
                                description="spectral stability of small-amplitude "
                                            "periodic water waves")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dispersion", help="dispersion roots and critical point")
    d.add_argument("--kappa", type=float, required=True)
    d.add_argument("--sigma", type=str, default=None,
                   help="spectral height (number, or res:N)")
    d.add_argument("--out", type=str, default=None)
    d.set_defaults(func=_cmd_dispersion)

    s = sub.add_parser("stokes", help="wave expansion coefficient tables")
    s.add_argument("--kappa", type=float, required=True)
    s.add_argument("--order", type=int, default=3, choices=(1, 2, 3))
    s.add_argument("--out", type=str, default=None)
    s.set_defaults(func=_cmd_stokes)

    m = sub.add_parser("monodromy", help="period-map coefficient matrices")
    m.add_argument("--kappa", type=float, required=True)
    m.add_argument("--sigma", type=str, required=True,
                   help="spectral height (number, or res:N)")
    m.add_argument("--order", type=int, default=2, choices=(0, 1, 2))
    m.add_argument("--out", type=str, default=None)
    m.set_defaults(func=_cmd_monodromy)

    i = sub.add_parser("indices", help="stability indices")
    i.add_argument("action", nargs="?", choices=("find-kappa1", "find-kappa2"))
    i.add_argument("--kappa", type=float, default=None)
    i.add_argument("--which", choices=("ind1", "ind2", "both"), default="both")
    i.add_argument("--out", type=str, default=None)
    i.set_defaults(func=_cmd_indices)

    sp = sub.add_parser("spectrum", help="spectrum curves")
    spsub = sp.add_subparsers(dest="what", required=True)
    bb = spsub.add_parser("bubble", help="resonance bubble curve")
    bb.add_argument("--kappa", type=float, required=True)
    bb.add_argument("--eps", type=float, required=True)
    bb.add_argument("--points", type=int, default=201)
    bb.add_argument("--out", type=str, default=None)
    bb.set_defaults(func=_cmd_spectrum)

    w = sub.add_parser("sweep", help="parameter sweeps")
    w.add_argument("--kappa", type=str, required=True, help="lo:hi:count")
    w.add_argument("--targets", type=str, default="ind1")
    w.add_argument("--eps", type=float, default=0.001)
    w.add_argument("--workers", type=int, default=4)
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--out", type=str, default=None)
    w.set_defaults(func=_cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, BracketError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except (ConsistencyError, MatchingError, RuntimeError) as exc:
        print(f"pipeline consistency error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
