"""Figure presets: parameter values for every reproduced figure in one table.

Each builder takes a :class:`~spdc_hom.config.SetupConfig` and returns
``{panel: Table}``. Panel keys are letters for multi-panel figures and
``""`` for single-panel ones.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize

from . import groupdelay, hom, phasematch
from .output import Table
from .units import SINC_GAUSS_ALPHA

#: Preset parameter values. Times are in units of 1/omega0.
PRESETS = {
    "fig1": {"quantity": "n_eff", "points": 501},
    "fig2": {"quantity": "phi0_coll", "points": 501},
    "fig3": {"xi": 0.2},
    "fig4": {"phi0": (0.7, 0.5007589, 0.46, 0.39), "xi_stop": 0.9, "points": 451},
    "fig5": {"phi0": 0.5007589, "xi0": 0.2, "xi_stop": 0.6, "points": 301},
    "fig6": {"phi0": (0.37734, 0.500578, 0.7), "points": 501},
    "fig7": {"xi": 0.2},
    "fig8": {},
    "fig9": {"xi": (0.01, 0.025, 0.03, 0.035, 0.04), "dt_span": 400.0, "points": 801},
    "fig10": {"a": 0.04, "b": 0.1, "c": 0.6},
    "fig11": {"a": (0.01, 0.7), "b": (0.805, 0.824), "points": 401},
    # panels resemble fig10 (b) and (a) shrunk about the A_minus zero
    "fig12": {"a": 0.1, "b": 0.04},
    "fig13": {"xi": 0.1, "a": 100.0, "b": 300.0},
    "fig14": {"a": (0.1, 100.0), "b": (0.1, 200.0), "c": (0.2, 200.0)},
}

TITLES = {
    "fig1": "effective ordinary index vs nondegeneracy",
    "fig2": "collinear crystal orientation vs nondegeneracy",
    "fig3": "inner and outer emission cones",
    "fig4": "cone opening angles vs nondegeneracy",
    "fig5": "slit positions selecting xi0",
    "fig6": "group-delay coefficients",
    "fig7": "two-slit selection geometry",
    "fig8": "beamsplitter outcomes",
    "fig9": "two-slit split probability vs delay",
    "fig10": "four-slit split probability vs delay",
    "fig11": "oscillation period and decoherence time",
    "fig12": "four-slit split probability near the A_minus zero",
    "fig13": "four-slit coincidence density",
    "fig14": "two-slit coincidence density",
}


def _xi_grid(setup, points, stop=None):
    top = phasematch.xi_max(setup.crystal, setup.lambda_p_um)
    # the group index of the idler needs a derivative stencil inside the window
    stop = top * (1 - 1e-3) if stop is None else min(stop, top * (1 - 1e-3))
    return np.linspace(0.0, stop, points)


def fig1(setup):
    xi = _xi_grid(setup, PRESETS["fig1"]["points"], phasematch.xi_max(setup.crystal, setup.lambda_p_um))
    xi[-1] = phasematch.xi_max(setup.crystal, setup.lambda_p_um)
    n = phasematch.effective_index(setup.crystal, setup.lambda_p_um, xi)
    return {"": Table({"xi": xi, "n_eff": n}, title=TITLES["fig1"])}


def fig2(setup):
    xi = np.linspace(0.0, phasematch.xi_max(setup.crystal, setup.lambda_p_um), PRESETS["fig2"]["points"])
    phi = phasematch.collinear_angle_ellipsoid(setup.crystal, setup.lambda_p_um, xi)
    return {"": Table({"xi": xi, "phi0_coll": phi}, title=TITLES["fig2"])}


def fig3(setup):
    xi = PRESETS["fig3"]["xi"]
    cone = phasematch.cone_geometry(setup.crystal, setup, xi)
    meta = {"phi0": setup.phi0_rad, "xi": xi, "regime": cone.regime.value}
    table = Table({
        "cone": ["inner", "outer"],
        "frequency_over_omega0": [(1 + xi) / 2, (1 - xi) / 2],
        "opening_angle_rad": [cone.theta_inner, cone.theta_outer],
    }, meta=meta, title=TITLES["fig3"])
    return {"": table}


def _theta_family(setup, phis, xi):
    cols = {"xi": xi}
    for phi in phis:
        t0 = phasematch.theta0(setup.crystal, setup.lambda_p_um, phi, xi)
        cols[f"theta0_phi{phi}"] = t0
        cols[f"theta_plus_phi{phi}"] = t0 / (1 + xi)
        cols[f"theta_minus_phi{phi}"] = t0 / (1 - xi)
    return cols


def fig4(setup):
    p = PRESETS["fig4"]
    xi = _xi_grid(setup, p["points"], p["xi_stop"])
    return {"": Table(_theta_family(setup, p["phi0"], xi), title=TITLES["fig4"])}


def fig5(setup):
    p = PRESETS["fig5"]
    xi = _xi_grid(setup, p["points"], p["xi_stop"])
    cols = _theta_family(setup, (p["phi0"],), xi)
    cone = phasematch.cone_geometry(setup.crystal, setup.with_(phi0_rad=p["phi0"]), p["xi0"])
    meta = {"phi0": p["phi0"], "xi0": p["xi0"], "slit_inner_rad": cone.theta_inner,
            "slit_outer_rad": cone.theta_outer, "slit_width_rad": 0.5 * cone.delta_theta_L}
    return {"": Table(cols, meta=meta, title=TITLES["fig5"])}


def fig6(setup):
    xi = _xi_grid(setup, PRESETS["fig6"]["points"])
    crystal, lp = setup.crystal, setup.lambda_p_um
    cols = {"xi": xi, "A_minus": groupdelay.a_minus(crystal, lp, xi)}
    for phi in PRESETS["fig6"]["phi0"]:
        cols[f"A_plus_phi{phi}"] = groupdelay.a_plus(crystal, lp, phi, xi)
    return {"": Table(cols, title=TITLES["fig6"])}


def fig7(setup):
    xi = PRESETS["fig7"]["xi"]
    cone = phasematch.cone_geometry(setup.crystal, setup, xi)
    table = Table({
        "slit": ["+", "-"],
        "angle_rad": [cone.theta_inner, -cone.theta_outer],
        "width_rad": [0.5 * cone.delta_theta_L] * 2,
        "frequency_over_omega0": [(1 + xi) / 2, (1 - xi) / 2],
    }, meta={"phi0": setup.phi0_rad, "xi": xi}, title=TITLES["fig7"])
    return {"": table}


def fig8(setup):
    m = hom.BEAMSPLITTER
    table = Table({
        "outcome": ["unsplit", "split"],
        "coef_F12": [m[0, 0], m[1, 0]],
        "coef_F21": [m[0, 1], m[1, 1]],
    }, title=TITLES["fig8"])
    return {"": table}


def fig9(setup):
    p = PRESETS["fig9"]
    dt = np.linspace(-p["dt_span"], p["dt_span"], p["points"])
    cols = {"omega0_dt": dt}
    for xi in p["xi"]:
        cols[f"w_split_xi{xi:g}"] = hom.split_probability(setup, xi, dt, "two_slit")
    return {"": Table(cols, meta={"scheme": "two_slit", "units": "1/omega0"}, title=TITLES["fig9"])}


def _curve_table(curve, title):
    return Table({curve.x_label: curve.x, curve.y_label: curve.y}, meta=curve.header(), title=title)


def fig10(setup):
    return {k: _curve_table(hom.split_curve(setup, PRESETS["fig10"][k], scheme="four_slit"),
                            f"{TITLES['fig10']} ({k})")
            for k in ("a", "b", "c")}


def fig11(setup):
    p = PRESETS["fig11"]
    out = {}
    for key in ("a", "b"):
        xi = np.linspace(*p[key], p["points"])
        a_m = groupdelay.a_minus(setup.crystal, setup.lambda_p_um, xi)
        t_decoh = math.sqrt(2 * SINC_GAUSS_ALPHA) * setup.length_time(np.abs(a_m))
        out[key] = Table({"xi": xi, "T_osc": 2 * math.pi / xi, "T_decoh": t_decoh},
                         meta={"units": "1/omega0"}, title=f"{TITLES['fig11']} ({key})")
    return out


def similar_xi(setup, xi_ref):
    """xi on the low side of the A_minus zero where ``xi |A_minus|`` equals its value at ``xi_ref``.

    The four-slit curve depends on xi and A_minus only through ``xi s`` and
    the time scale ``s``, so the curve there is the one at ``xi_ref`` with
    delays compressed by ``xi / xi_ref``.
    """
    crystal, lp = setup.crystal, setup.lambda_p_um
    zero = groupdelay.a_minus_zero(crystal, lp)
    target = xi_ref * abs(float(groupdelay.a_minus(crystal, lp, xi_ref)))

    def f(x):
        return x * abs(float(groupdelay.a_minus(crystal, lp, x))) - target

    lo = zero - 1e-6
    step = 1e-3
    while f(lo - step) <= 0:
        step *= 2
        if lo - step <= xi_ref:
            raise ValueError(f"no xi similar to {xi_ref} below the A_minus zero")
    return optimize.brentq(f, lo - step, lo, xtol=1e-14)


def fig12(setup):
    out = {}
    for key in ("a", "b"):
        ref = PRESETS["fig12"][key]
        xi = similar_xi(setup, ref)
        curve = hom.split_curve(setup, xi, scheme="four_slit")
        table = _curve_table(curve, f"{TITLES['fig12']} ({key})")
        table.meta["similar_to_xi"] = ref
        out[key] = table
    return out


def fig13(setup):
    p = PRESETS["fig13"]
    return {k: _curve_table(hom.density_curve(setup, p["xi"], p[k], scheme="four_slit"),
                            f"{TITLES['fig13']} ({k})")
            for k in ("a", "b")}


def fig14(setup):
    out = {}
    for k in ("a", "b", "c"):
        xi, dt = PRESETS["fig14"][k]
        out[k] = _curve_table(hom.density_curve(setup, xi, dt, scheme="two_slit"), f"{TITLES['fig14']} ({k})")
    return out


BUILDERS = {f"fig{i}": globals()[f"fig{i}"] for i in range(1, 15)}


def build(fig_id, setup, panel=None):
    """Tables for one figure, optionally restricted to one panel."""
    if fig_id not in BUILDERS:
        raise KeyError(f"unknown figure {fig_id!r}; choose from fig1..fig14")
    tables = BUILDERS[fig_id](setup)
    if panel is not None:
        if panel not in tables:
            raise KeyError(f"{fig_id} has panels {sorted(k for k in tables if k) or ['(none)']}")
        tables = {panel: tables[panel]}
    return tables


def x_column(table):
    return next(iter(table.columns))

