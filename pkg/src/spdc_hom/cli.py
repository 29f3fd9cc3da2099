"""Command-line interface: ``spdc figure|sweep|verify|coeffs``.

Exit codes: 0 success, 1 invalid input, 2 failed verification, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import figures, groupdelay, hom, oracle, output, phasematch
from .config import SetupConfig, normalize_scheme, worker_count
from .errors import (
    ConfigError,
    DegenerateWidthError,
    ForbiddenRegimeError,
    NoCollinearSolutionError,
    SpdcError,
    TransparencyError,
    UnsupportedRegimeError,
)

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

QUANTITIES = ("n_eff", "N_eff", "theta0", "theta_pm", "phi0_coll", "A_plus", "A_minus",
              "T_osc", "T_decoh", "w_split_2", "w_split_4")
AXES = ("xi", "phi0", "dt")
FORMATS = ("csv", "svg", "json")

_FLAGS = (
    (TransparencyError, "out_of_window"),
    (ForbiddenRegimeError, "forbidden"),
    (UnsupportedRegimeError, "short_pulse"),
    (DegenerateWidthError, "degenerate_width"),
    (NoCollinearSolutionError, "no_collinear_solution"),
)


def resolve_setup(args):
    """Built-in defaults, then the config file, then command-line flags."""
    setup = SetupConfig.from_json(args.config) if args.config else SetupConfig()
    changes = {}
    if args.phi0 is not None:
        changes["phi0_rad"] = args.phi0
    if args.scheme is not None:
        changes["scheme"] = normalize_scheme(args.scheme)
    return setup.with_(**changes) if changes else setup


# sweep ---------------------------------------------------------------------------


def _columns(quantity):
    return ("theta_plus", "theta_minus") if quantity == "theta_pm" else (quantity,)


def evaluate(quantity, setup, xi, phi0, dt):
    """Value(s) of one sweep quantity at a point, as ``(tuple, flag)``."""
    crystal, lp = setup.crystal, setup.lambda_p_um
    nan = (math.nan,) * len(_columns(quantity))
    try:
        if quantity == "n_eff":
            return (float(phasematch.effective_index(crystal, lp, xi)),), ""
        if quantity == "N_eff":
            return (float(phasematch.effective_index_N(crystal, lp, xi)),), ""
        if quantity in ("theta0", "theta_pm"):
            kind = phasematch.regime(crystal, lp, phi0, xi)
            if kind is phasematch.Regime.FORBIDDEN:
                return nan, "forbidden"
            t0 = float(phasematch.theta0(crystal, lp, phi0, xi))
            flag = "collinear" if kind is phasematch.Regime.COLLINEAR else ""
            if quantity == "theta0":
                return (t0,), flag
            return (t0 / (1 + xi), t0 / (1 - xi)), flag
        if quantity == "phi0_coll":
            return (phasematch.collinear_angle(crystal, lp, xi),), ""
        if quantity in ("A_plus", "A_minus", "T_osc", "T_decoh"):
            coeffs = groupdelay.coefficients(crystal, lp, phi0, xi)
            if quantity == "A_plus":
                return (coeffs.A_plus,), ""
            if quantity == "A_minus":
                return (coeffs.A_minus,), ""
            scales = groupdelay.timescales(coeffs, setup.with_(phi0_rad=phi0))
            return (getattr(scales, quantity),), ""
        scheme = "two_slit" if quantity == "w_split_2" else "four_slit"
        point = setup.with_(phi0_rad=phi0)
        params = hom.biphoton_params(point, xi, scheme)
        flag = "model_fragile" if params.fragile else ""
        return (float(hom.split_probability_from_params(params, dt)),), flag
    except tuple(cls for cls, _ in _FLAGS) as exc:
        return nan, next(flag for cls, flag in _FLAGS if isinstance(exc, cls))
    except ValueError:
        return nan, "invalid"


def sweep(quantity, axis, values, setup, xi=0.1, dt=0.0):
    """Evaluate ``quantity`` along ``axis``; returns an :class:`~spdc_hom.output.Table`."""
    if quantity not in QUANTITIES:
        raise ConfigError({"quantity": f"expected one of {QUANTITIES}"})
    if axis not in AXES:
        raise ConfigError({"axis": f"expected one of {AXES}"})
    values = np.asarray(values, dtype=float)

    def point(v):
        args = {"xi": xi, "phi0": setup.phi0_rad, "dt": dt}
        args[axis] = float(v)
        return evaluate(quantity, setup, args["xi"], args["phi0"], args["dt"])

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(point, values))
    cols = {axis: values}
    for i, name in enumerate(_columns(quantity)):
        cols[name] = [r[0][i] for r in results]
    cols["flag"] = [r[1] for r in results]
    meta = {"quantity": quantity, "axis": axis, "units": "1/omega0" if axis == "dt" else "",
            "xi": xi, "phi0": setup.phi0_rad, "dt": dt}
    meta = {k: v for k, v in meta.items() if k != axis and v != ""}
    return output.Table(cols, meta=meta, title=f"{quantity} vs {axis}")


# output --------------------------------------------------------------------------


def _emit(table, outdir, stem, formats):
    paths = []
    for fmt in formats:
        path = Path(outdir) / f"{stem}.{fmt}"
        if fmt == "csv":
            output.write_text(path, table.to_csv())
        elif fmt == "svg":
            output.write_text(path, output.table_svg(table, figures.x_column(table)))
        else:
            output.write_json(path, table.to_json())
        paths.append(path)
    return paths


def _options(args, *names):
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


# commands ------------------------------------------------------------------------


def cmd_figure(args):
    setup = resolve_setup(args)
    try:
        tables = figures.build(args.id, setup, args.panel)
    except KeyError as exc:
        raise ConfigError({"figure": exc.args[0]}) from exc
    formats = [args.format] if args.format else ["csv", "svg"]
    paths = []
    for panel, table in tables.items():
        paths += _emit(table, args.out, f"{args.id}{panel}", formats)
    stem = f"{args.id}{args.panel or ''}"
    opts = _options(args, "id", "panel", "format")
    output.write_manifest(args.out, stem, "figure", setup, opts, paths)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_sweep(args):
    setup = resolve_setup(args)
    if args.points < 1:
        raise ConfigError({"points": "must be at least 1"})
    values = np.linspace(args.start, args.stop, args.points)
    xi = 0.1 if args.xi is None else args.xi
    dt = 0.0 if args.dt is None else args.dt
    table = sweep(args.quantity, args.axis, values, setup, xi=xi, dt=dt)
    stem = f"sweep_{args.quantity}_{args.axis}"
    paths = _emit(table, args.out, stem, [args.format or "csv"])
    opts = _options(args, "quantity", "axis", "start", "stop", "points", "xi", "dt", "format")
    output.write_manifest(args.out, stem, "sweep", setup, opts, paths)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_verify(args):
    setup = resolve_setup(args)
    seed = 0 if args.seed is None else args.seed
    reports = oracle.run_suite(setup, quick=args.quick, seed=seed)
    failed = [r for r in reports if not r.passed]
    summary = {
        "passed": not failed,
        "n_checks": len(reports),
        "failed": [f"{r.check} {json.dumps(r.params, sort_keys=True, default=str)}" for r in failed],
        "reports": [r.to_dict() for r in reports],
    }
    path = output.write_json(Path(args.out) / "verify.json", summary)
    output.write_manifest(args.out, "verify", "verify", setup, _options(args, "quick", "seed"), [path])
    for line in summary["failed"]:
        print(f"FAIL {line}")
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed; report: {path}")
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_coeffs(args):
    setup = resolve_setup(args)
    xi = 0.1 if args.xi is None else args.xi
    coeffs = groupdelay.coefficients(setup.crystal, setup.lambda_p_um, setup.phi0_rad, xi)
    scales = groupdelay.timescales(coeffs, setup)
    cone = phasematch.cone_geometry(setup.crystal, setup, xi)
    data = {
        "xi": xi,
        "phi0": setup.phi0_rad,
        "A_p": coeffs.A_p,
        "A_h": coeffs.A_h,
        "A_l": coeffs.A_l,
        "A_plus": coeffs.A_plus,
        "A_minus": coeffs.A_minus,
        "model_fragile": coeffs.fragile,
        "T_osc": scales.T_osc,
        "T_decoh": scales.T_decoh,
        "tau_gr": scales.tau_gr,
        "pulse_regime": groupdelay.pulse_regime(setup, coeffs).value,
        "regime": cone.regime.value,
        "theta0": cone.theta0,
        "theta_inner": cone.theta_inner,
        "theta_outer": cone.theta_outer,
        "delta_theta_L": cone.delta_theta_L,
        "units": {"times": "1/omega0", "angles": "rad"},
    }
    data = {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in data.items()}
    text = json.dumps(data, indent=2)
    print(text)
    if args.out_given:
        path = output.write_json(Path(args.out) / "coeffs.json", data)
        output.write_manifest(args.out, "coeffs", "coeffs", setup, _options(args, "xi"), [path])
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="setup JSON file (crystal, lambda_p_um, L_cm, phi0_rad, ...)")
    common.add_argument("--out", default=None, help="output directory (default: current directory)")
    common.add_argument("--format", choices=FORMATS, help="output format (figures default to csv and svg)")
    common.add_argument("--xi", type=float, help="nondegeneracy parameter")
    common.add_argument("--phi0", type=float, help="crystal-axis angle in rad; overrides the config")
    common.add_argument("--dt", type=float, help="delay in units of 1/omega0")
    common.add_argument("--scheme", choices=("two", "four", "two_slit", "four_slit"), help="slit scheme")
    common.add_argument("--seed", type=int, help="Monte-Carlo seed")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="spdc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", parents=[common], help="reproduce one figure as CSV/SVG")
    p.add_argument("id", help="fig1 .. fig14")
    p.add_argument("--panel", help="panel letter for multi-panel figures")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", parents=[common], help="evaluate a quantity on a uniform grid")
    p.add_argument("quantity", choices=QUANTITIES)
    p.add_argument("--axis", choices=AXES, default="xi")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=0.9)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the oracle suite and anchor checks")
    p.add_argument("--quick", action="store_true", help="skip Monte Carlo")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coeffs", parents=[common], help="print group-delay coefficients and time scales")
    p.set_defaults(func=cmd_coeffs)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.out_given = args.out is not None
    args.out = args.out or "."
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        for field, message in exc.errors.items():
            print(f"error: {field}: {message}", file=sys.stderr)
        return EXIT_INVALID
    except (SpdcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
