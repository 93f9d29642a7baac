"""``intellight`` command line: figure data, verification, sweeps.

Exit status: 0 success, 1 a check failed, 2 usage or configuration error.
"""
import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from itertools import product

import numpy as np

from . import __version__
from .analysis import (FIG3_J_MAX, FIG7_K, exponent_estimate,
                       g_factor_su2, g_factor_su11, intelligent_sensitivity, parallel_map,
                       su2_curve, su11_curve)
from .config import ConfigError, SweepConfig, ValidationError, load_config
from .errors import DomainError
from .interferometer import MixerParam
from .verification import run_checks

__all__ = ["main", "figure_table", "sweep_table", "format_value", "write_csv", "FIGURES"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FIG2_J = 15
CURVE_ETAS = (0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95)
G_ETAS = tuple(round(0.01 * i, 2) for i in range(1, 100))
E_ETAS = (0.0001, 0.001, 0.002, 0.005, 0.01, 0.02) + tuple(round(0.05 * i, 2) for i in range(1, 20))
FIG6_ETAS = tuple(round(0.05 * i, 2) for i in range(1, 101))
FIG6_L_MAX = 10


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.15g" % v


def write_csv(path, header, rows):
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    data = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(data)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)


def _fig2():
    rows = [(eta, m0, g_factor_su2(FIG2_J, m0, eta).value)
            for m0 in range(FIG2_J + 1) for eta in G_ETAS + (1.0,)]
    return ["eta", "m0", "G"], rows


def _fig3():
    rows = []
    for eta, curve in zip(CURVE_ETAS, parallel_map(su2_curve, CURVE_ETAS)):
        rows.extend((n, eta, math.log(n), math.log(dphi)) for n, dphi in curve)
    return ["N", "eta", "ln_N", "ln_delta_phi"], rows


def _fig4():
    ests = parallel_map(lambda e: exponent_estimate(su2_curve(e, FIG3_J_MAX)), E_ETAS)
    return (["eta", "E", "residual", "fit_n_min", "fit_n_max"],
            [(eta, e.E, e.residual, *e.fit_window) for eta, e in zip(E_ETAS, ests)])


def _fig6():
    rows = [(eta, l, g_factor_su11(FIG7_K, l, eta).value)
            for l in range(FIG6_L_MAX + 1) for eta in FIG6_ETAS]
    return ["eta", "l", "G"], rows


def _fig7():
    rows = []
    for eta, curve in zip(CURVE_ETAS, parallel_map(su11_curve, CURVE_ETAS)):
        rows.extend((l, n, eta, math.log(n), math.log(dphi))
                    for l, (n, dphi) in enumerate(curve, start=1))
    return ["l", "N_bar", "eta", "ln_N_bar", "ln_delta_phi"], rows


def _fig8():
    ests = parallel_map(lambda e: exponent_estimate(su11_curve(e)), E_ETAS)
    return (["eta", "E", "residual", "fit_n_min", "fit_n_max"],
            [(eta, e.E, e.residual, *e.fit_window) for eta, e in zip(E_ETAS, ests)])


FIGURES = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
           "fig6": _fig6, "fig7": _fig7, "fig8": _fig8}


def figure_table(preset):
    """(header, rows) for a figure preset."""
    try:
        return FIGURES[preset]()
    except KeyError:
        raise DomainError(f"unknown preset {preset!r}; choose from {sorted(FIGURES)}") from None


def _su2_rows(cfg):
    keys = []
    for j, m0, eta in product(cfg.grid("j"), cfg.grid("m0"), cfg.grid("eta")):
        keys.append((j, m0, eta))

    def row(key):
        j, m0, eta = key
        rep = intelligent_sensitivity("SU2", (j, m0), eta)
        return ["SU2", j, m0, eta, rep.g_factor, rep.delta_phi_squared, rep.n_bar]

    return ["group", "j", "m0", "eta"], parallel_map(row, keys), 1


def _su11_rows(cfg):
    use_sinh2 = bool(cfg.grid("sinh2_beta"))
    betas = cfg.grid("sinh2_beta") if use_sinh2 else cfg.grid("beta")
    keys = list(product(cfg.grid("k"), cfg.grid("l"), cfg.grid("eta"), betas))

    def row(key):
        k, l, eta, b = key
        mixer = MixerParam.from_sinh_squared(b) if use_sinh2 else MixerParam(b)
        rep = intelligent_sensitivity("SU11", (k, int(l)), eta, mixer)
        return ["SU11", k, int(l), eta, b, rep.g_factor, rep.delta_phi_squared, rep.n_bar]

    return (["group", "k", "l", "eta", "sinh2_beta" if use_sinh2 else "beta"],
            parallel_map(row, keys), 2)


_QUANTITY_COLUMNS = {"G": "G", "dphi2": "delta_phi_squared", "nbar": "n_bar"}


def sweep_table(cfg: SweepConfig):
    """(header, rows) for a sweep; rows follow grid order, last key fastest.

    Requesting ``E`` adds the exponent of the curve each row belongs to
    (rows sharing every parameter except j, or except l).
    """
    if not cfg.grids:
        raise ValidationError("eta", "no grid given")
    lead, rows, swept = (_su2_rows if cfg.group == "SU2" else _su11_rows)(cfg)
    n_lead = len(lead)
    values = {"G": n_lead, "dphi2": n_lead + 1, "nbar": n_lead + 2}
    header = lead + [_QUANTITY_COLUMNS[q] for q in cfg.quantities if q != "E"]
    out = [r[:n_lead] + [r[values[q]] for q in cfg.quantities if q != "E"] for r in rows]
    if "E" in cfg.quantities:
        curves = {}
        for r in rows:
            key = tuple(v for i, v in enumerate(r[:n_lead]) if i != swept)
            curves.setdefault(key, []).append((r[values["nbar"]], math.sqrt(r[values["dphi2"]])))
        exps = {}
        for key, pts in curves.items():
            try:
                exps[key] = exponent_estimate(sorted(pts)).E
            except DomainError as exc:
                raise ValidationError("j" if cfg.group == "SU2" else "l",
                                      f"exponent needs a longer sweep: {exc}") from None
        header.append("E")
        for r, o in zip(rows, out):
            o.append(exps[tuple(v for i, v in enumerate(r[:n_lead]) if i != swept)])
    return header, out


def _manifest(config_echo, checks):
    return {
        "artifact_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config": config_echo,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "max_deviation": max((c["max_deviation"] for c in checks), default=0.0),
    }


def _write_manifest(path, manifest):
    text = json.dumps(manifest, indent=2, default=float) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_tolerances(items):
    default, named = None, {}
    for item in items or []:
        if "=" in item:
            name, value = item.split("=", 1)
            named[name.strip()] = float(value)
        else:
            default = float(item)
    for name, tol in list(named.items()) + [("tolerance", default)]:
        if tol is not None and not tol > 0:
            raise ValidationError(name, "tolerance must be positive")
    return default, named


def cmd_figure(args):
    header, rows = figure_table(args.preset)
    write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_verify(args):
    cfg = load_config(args.config) if args.config else SweepConfig()
    default, named = _parse_tolerances(args.tolerance)
    overrides = {k: v for k, v in cfg.tolerances.items() if k != "*"}
    overrides.update(named)
    if default is None:
        default = cfg.tolerances.get("*")
    try:
        results = run_checks(overrides, default)
    except KeyError as exc:
        raise ValidationError("tolerance", str(exc.args[0])) from None
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: max deviation {r.max_deviation:.3g} "
              f"(tolerance {r.tolerance:.3g}) at {r.location}", file=sys.stderr)
    echo = {"config": cfg.echo, "tolerance": args.tolerance or []}
    _write_manifest(args.out, _manifest(echo, [r.as_dict() for r in results]))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_sweep(args):
    cfg = load_config(args.config)
    out = args.out or cfg.out
    header, rows = sweep_table(cfg)
    write_csv(out, header, rows)
    finite = all(not (isinstance(v, float) and math.isnan(v)) for r in rows for v in r)
    checks = [{"name": "rows_defined", "passed": finite, "max_deviation": 0.0,
               "tolerance": 0.0, "location": f"{len(rows)} rows"}]
    manifest_path = args.manifest or (None if out in (None, "-") else out + ".manifest.json")
    if manifest_path is not None:
        _write_manifest(manifest_path, _manifest({"config": cfg.echo}, checks))
    return EXIT_OK if finite else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="intellight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write figure data as CSV")
    fig.add_argument("preset", choices=sorted(FIGURES))
    fig.add_argument("--out", default="-", help="CSV path (default stdout)")
    fig.set_defaults(func=cmd_figure)

    ver = sub.add_parser("verify", help="run the cross-oracle checks")
    ver.add_argument("--tolerance", action="append", metavar="[CHECK=]VALUE",
                     help="override every tolerance, or one check's; repeatable")
    ver.add_argument("--config", help="key=value file (tolerance.CHECK=VALUE lines)")
    ver.add_argument("--out", default="-", help="manifest JSON path (default stdout)")
    ver.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="evaluate G, dphi^2, N_bar, E over a grid")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out", help="CSV path (default: 'out' key, else stdout)")
    sw.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
