import math

import numpy as np
import pytest

from spdc_hom import TemporalWF, biphoton_params, normalize, temporal_wf, two_frequency_wf
from spdc_hom import ForbiddenRegimeError, UnsupportedRegimeError, full_angular_frequency_wf
from spdc_hom.units import SINC_GAUSS_ALPHA


@pytest.mark.parametrize("scheme", ["two_slit", "four_slit"])
@pytest.mark.parametrize("xi", [0.04, 0.1, 0.6])
def test_normalisation_analytic_vs_quadrature(setup, xi, scheme):
    analytic = normalize(setup, xi, scheme, "analytic")
    numeric = normalize(setup, xi, scheme, "quadrature")
    assert numeric == pytest.approx(analytic, rel=1e-8)


def test_params_are_derived_from_group_delays(setup):
    p = biphoton_params(setup, 0.1, "two_slit")
    assert p.width2 == pytest.approx(SINC_GAUSS_ALPHA * p.sigma**2)
    assert p.static_visibility == pytest.approx(math.exp(-0.01 * p.width2 / 2))
    assert p.tau == pytest.approx(setup.tau_fs * setup.omega0)


def test_short_pulse_rejected(setup):
    with pytest.raises(UnsupportedRegimeError):
        biphoton_params(setup.with_(tau_ps=0.05), 0.1)


def test_two_slit_wavefunction_structure(setup):
    # unit peak at t1 - t2 = t1 + t2 = -dt, beat phase xi u / 2 across the diagonal
    dt, xi = 50.0, 0.1
    assert temporal_wf(setup, xi, dt, -dt, 0.0, "two_slit") == 1.0
    u = 7.0
    f = temporal_wf(setup, xi, dt, -dt + u / 2, -u / 2, "two_slit")
    assert np.angle(f) == pytest.approx(xi * u / 2)
    s2 = biphoton_params(setup, xi).width2
    assert abs(f) == pytest.approx(math.exp(-(u**2) / (4 * s2)))


def test_four_slit_wavefunction_is_symmetric(setup):
    rng = np.random.default_rng(1)
    t1, t2 = rng.normal(0, 300, (2, 50))
    f = temporal_wf(setup, 0.1, 0.0, t1, t2, "four_slit")
    g = temporal_wf(setup, 0.1, 0.0, t2, t1, "four_slit")
    assert np.array_equal(f, g)


def test_temporal_wf_object(setup):
    wf = TemporalWF.from_setup(setup, 0.1, 20.0)
    f12, f21 = wf.path_amplitudes(np.array([1.0]), np.array([-3.0]))
    assert f12[0] == pytest.approx(wf.norm * wf(1.0, -3.0))
    assert f21[0] == pytest.approx(wf.norm * wf(-3.0, 1.0))


def test_two_frequency_peak_at_central_frequencies(setup):
    xi = 0.1
    w1 = np.linspace(0.54, 0.56, 201)
    amp = np.abs(two_frequency_wf(setup, xi, 0.0, w1, 1.0 - w1))
    assert w1[np.argmax(amp)] == pytest.approx((1 + xi) / 2, abs=1e-4)


def test_gaussian_kernel_close_to_sinc_near_peak(setup):
    w1 = 0.55 + np.linspace(-2e-5, 2e-5, 11)
    sinc = two_frequency_wf(setup, 0.1, 0.0, w1, 1.0 - w1, kernel="sinc")
    gauss = two_frequency_wf(setup, 0.1, 0.0, w1, 1.0 - w1, kernel="gaussian")
    assert np.allclose(np.abs(sinc), np.abs(gauss), atol=0.05)


def test_full_wavefunction_is_exchange_symmetric(setup):
    setup = setup.with_(phi0_rad=0.7)
    from spdc_hom import cone_geometry

    cone = cone_geometry(setup.crystal, setup, 0.2)
    th1, th2 = cone.theta_inner, -cone.theta_outer
    a = full_angular_frequency_wf(setup, 0.2, th1, th2, 0.6, 0.4)
    b = full_angular_frequency_wf(setup, 0.2, th2, th1, 0.4, 0.6)
    assert a == pytest.approx(b)
    assert abs(a) > 0


def test_full_wavefunction_forbidden(setup):
    with pytest.raises(ForbiddenRegimeError):
        full_angular_frequency_wf(setup.with_(phi0_rad=0.4), 0.2, 0.0, 0.0, 0.6, 0.4)
