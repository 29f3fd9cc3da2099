import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdc_hom import BBO, Regime, TransparencyError, phasematch
from spdc_hom.errors import NoCollinearSolutionError

LP = 0.4047
XI_TOP = phasematch.xi_max(BBO, LP)
xis = st.floats(0.0, 0.93)


@given(xi=xis)
def test_energy_conservation(xi):
    p = phasematch.nondegeneracy_point(LP, xi)
    assert p.omega_h + p.omega_l == p.omega0
    assert p.omega_h == pytest.approx(p.omega0 * (1 + xi) / 2, rel=1e-15)
    assert p.lambda_plus == pytest.approx(2 * LP / (1 + xi), rel=1e-15)


def test_xi_outside_unit_interval():
    with pytest.raises(ValueError):
        phasematch.nondegeneracy_point(LP, 1.0)


def test_degenerate_effective_indices():
    n2 = phasematch.effective_index(BBO, LP, 0.0)
    assert n2 == pytest.approx(float(phasematch.index_ordinary(BBO, 2 * LP)), rel=1e-15)
    assert phasematch.effective_index_N(BBO, LP, 0.0) == pytest.approx(n2, rel=1e-14)


def test_n_eff_and_N_eff_differ_off_degeneracy():
    assert phasematch.effective_index(BBO, LP, 0.2) != pytest.approx(
        phasematch.effective_index_N(BBO, LP, 0.2), rel=1e-6)


def test_transparency_bound():
    with pytest.raises(TransparencyError):
        phasematch.effective_index(BBO, LP, 0.95)
    phasematch.effective_index(BBO, LP, XI_TOP)
    assert 2 * LP / (1 - XI_TOP) <= BBO.window_um[1]


def test_effective_index_maximum():
    xi, _ = phasematch.effective_index_maximum(BBO, LP)
    assert xi == pytest.approx(0.8142, abs=5e-3)


@settings(max_examples=40)
@given(xi=st.floats(0.0, 0.9), phi0=st.floats(0.55, 0.75))
def test_cone_invariants(setup, xi, phi0):
    cone = phasematch.cone_geometry(BBO, setup.with_(phi0_rad=phi0), xi)
    if cone.regime is Regime.FORBIDDEN:
        assert phasematch.index_mismatch(BBO, LP, phi0, xi) < 0
        return
    assert cone.theta_inner == pytest.approx(cone.theta0 / (1 + xi), rel=1e-15)
    assert cone.theta_outer == pytest.approx(cone.theta0 / (1 - xi), rel=1e-15)
    assert cone.theta_inner <= cone.theta0 <= cone.theta_outer


def test_strict_ordering_off_degeneracy(setup):
    cone = phasematch.cone_geometry(BBO, setup.with_(phi0_rad=0.7), 0.3)
    assert cone.regime is Regime.NONCOLLINEAR
    assert cone.theta_inner < cone.theta0 < cone.theta_outer


@pytest.mark.parametrize("xi", [0.0, 0.2, 0.5, 0.8, 0.9])
def test_collinear_locus_gives_zero_angle(xi):
    phi = phasematch.collinear_angle(BBO, LP, xi)
    assert abs(phasematch.theta0(BBO, LP, phi, xi)) < 1e-6
    assert phasematch.regime(BBO, LP, phi, xi) is Regime.COLLINEAR


@pytest.mark.parametrize("xi", [0.1, 0.5, 0.85])
def test_regime_either_side_of_locus(xi):
    phi = phasematch.collinear_angle(BBO, LP, xi)
    assert phasematch.regime(BBO, LP, phi + 1e-3, xi) is Regime.NONCOLLINEAR
    assert phasematch.regime(BBO, LP, phi - 1e-3, xi) is Regime.FORBIDDEN
    assert math.isnan(phasematch.theta0(BBO, LP, phi - 1e-3, xi))


def test_ellipsoid_inversion_matches_root_finder():
    xi = np.linspace(0.0, 0.93, 7)
    closed = phasematch.collinear_angle_ellipsoid(BBO, LP, xi)
    roots = [phasematch.collinear_angle(BBO, LP, x) for x in xi]
    assert np.allclose(closed, roots, atol=1e-10)


def test_degenerate_collinear_cut():
    assert phasematch.collinear_angle(BBO, LP, 0.0) == pytest.approx(0.5007589, abs=3e-3)


def test_no_collinear_solution_for_other_crystal():
    from spdc_hom import CrystalDispersion

    # an isotropic crystal has no orientation-dependent pump index
    iso = CrystalDispersion("iso", BBO.sellmeier_o, BBO.sellmeier_o)
    with pytest.raises(NoCollinearSolutionError):
        phasematch.collinear_angle(iso, LP, 0.3)
