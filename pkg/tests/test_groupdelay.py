import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdc_hom import BBO, groupdelay
from spdc_hom.groupdelay import PulseRegime

LP = 0.4047


def test_a_minus_vanishes_at_degeneracy():
    assert abs(groupdelay.a_minus(BBO, LP, 1e-6)) < 1e-4
    assert groupdelay.a_minus(BBO, LP, 0.0) == 0.0


@given(xi=st.floats(1e-3, 0.9))
def test_a_minus_is_odd(xi):
    # swapping the two photons flips the sign
    coeffs = groupdelay.coefficients(BBO, LP, 0.5, xi)
    assert coeffs.A_minus == pytest.approx(float(groupdelay.a_minus(BBO, LP, xi)), rel=1e-12)


def test_a_minus_zero_location():
    assert groupdelay.a_minus_zero(BBO, LP) == pytest.approx(0.8142, abs=5e-3)


def test_a_minus_sign_change():
    zero = groupdelay.a_minus_zero(BBO, LP)
    assert groupdelay.a_minus(BBO, LP, zero - 0.01) * groupdelay.a_minus(BBO, LP, zero + 0.01) < 0


def test_a_minus_independent_of_orientation():
    a = groupdelay.coefficients(BBO, LP, 0.4, 0.3).A_minus
    b = groupdelay.coefficients(BBO, LP, 0.7, 0.3).A_minus
    assert a == b


def test_timescales(setup):
    coeffs = groupdelay.coefficients(BBO, LP, setup.phi0_rad, 0.1)
    scales = groupdelay.timescales(coeffs, setup)
    assert scales.T_osc == pytest.approx(2 * math.pi / 0.1, rel=1e-15)
    expected = math.sqrt(2 * 0.19292) * setup.omega0 * setup.L_um * abs(coeffs.A_minus) / 0.299792458
    assert scales.T_decoh == pytest.approx(expected, rel=1e-14)
    assert scales.oscillation_count == pytest.approx(scales.T_decoh / scales.T_osc)


def test_degenerate_timescale_is_infinite(setup):
    coeffs = groupdelay.coefficients(BBO, LP, setup.phi0_rad, 0.0)
    assert math.isinf(groupdelay.timescales(coeffs, setup).T_osc)


def test_fragile_flag():
    assert groupdelay.coefficients(BBO, LP, 0.5, 0.01).fragile
    assert not groupdelay.coefficients(BBO, LP, 0.5, 0.1).fragile


def test_pulse_regime(setup):
    coeffs = groupdelay.coefficients(BBO, LP, setup.phi0_rad, 0.1)
    assert groupdelay.pulse_regime(setup, coeffs) is PulseRegime.LONG
    assert groupdelay.pulse_regime(setup.with_(tau_ps=0.01), coeffs) is PulseRegime.SHORT
    assert groupdelay.pulse_regime(setup, tau_gr_fs=2000.0) is PulseRegime.SHORT


def test_vectorised_matches_scalar():
    xi = np.array([0.1, 0.4, 0.7])
    vec = groupdelay.a_plus(BBO, LP, 0.5, xi)
    scalar = [groupdelay.coefficients(BBO, LP, 0.5, x).A_plus for x in xi]
    assert np.allclose(vec, scalar, rtol=1e-14)
