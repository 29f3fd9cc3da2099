"""Acceptance criteria for the BBO working point, at their stated tolerances.

Each test records its criterion number; a summary line per criterion is
printed at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

from spdc_hom import analyze_comb, figures, groupdelay, hom, oracle, phasematch
from spdc_hom.biphoton import biphoton_params, normalize

LP = 0.4047


@pytest.fixture
def criterion(record_property):
    def mark(label):
        record_property("criterion", label)

    return mark


def test_1_xi_max_anchor(setup, criterion):
    criterion("1 xi_max anchor")
    start = time.perf_counter()
    top = phasematch.xi_max(setup.crystal, LP)
    lam_minus = 2 * LP / (1 - top)
    elapsed = time.perf_counter() - start
    assert top == pytest.approx(0.9391, abs=1e-3)
    assert lam_minus == pytest.approx(13.29, abs=0.02)
    assert elapsed < 1.0


def test_2_collinear_locus_anchors(setup, criterion):
    criterion("2 collinear-locus anchors")
    start = time.perf_counter()
    rng = phasematch.collinear_range(setup.crystal, LP)
    xi_n_max, _ = phasematch.effective_index_maximum(setup.crystal, LP)
    zero = groupdelay.a_minus_zero(setup.crystal, LP)
    elapsed = time.perf_counter() - start
    assert rng.phi_min == pytest.approx(0.37734, abs=3e-3)
    assert rng.phi_max == pytest.approx(0.678486, abs=3e-3)
    for xi in (xi_n_max, zero, rng.xi_at_min):
        assert xi == pytest.approx(0.8142, abs=5e-3)
    assert elapsed < 5.0


def test_3_two_slit_dip_degradation(setup, criterion):
    criterion("3 two-slit dip degradation")
    assert hom.split_probability(setup, 0.01, 0.0, "two_slit") < 0.02
    assert 0.5 - hom.split_probability(setup, 0.04, 0.0, "two_slit") < 0.05


def test_4_four_slit_restoration(setup, criterion):
    criterion("4 four-slit interference restoration")
    start = time.perf_counter()
    values = [hom.split_probability(setup, xi, 0.0, "four_slit")
              for xi in (0.04, 0.1, 0.6, 0.807, 0.81, 0.813)]
    elapsed = time.perf_counter() - start
    assert max(values) < 1e-10
    assert elapsed < 1.0


def test_5_comb_metrology(setup, criterion):
    criterion("5 comb metrology")
    for xi in (0.1, 0.6):
        report = analyze_comb(hom.split_curve(setup, xi, scheme="four_slit"))
        assert report.period == pytest.approx(2 * math.pi / xi, rel=0.02)
    wide = analyze_comb(hom.split_curve(setup, figures.PRESETS["fig10"]["a"], scheme="four_slit"))
    xi_narrow = figures.similar_xi(setup, figures.PRESETS["fig12"]["b"])
    assert xi_narrow == pytest.approx(0.8142, abs=5e-3)
    narrow = analyze_comb(hom.split_curve(setup, xi_narrow, scheme="four_slit"))
    assert wide.envelope_fwhm / narrow.envelope_fwhm == pytest.approx(20.0, abs=4.0)


def test_6_oracle_equivalence(setup, criterion):
    criterion("6 oracle equivalence")
    start = time.perf_counter()
    reports = oracle.quadrature_checks(setup) + oracle.fft_checks(setup)
    reports += oracle.monte_carlo_checks(setup, seed=0, n_samples=100_000)
    elapsed = time.perf_counter() - start
    failed = [(r.check, r.params) for r in reports if not r.passed]
    assert not failed
    assert elapsed < 60.0


def test_7_coincidence_density_structure(setup, criterion):
    criterion("7 coincidence-density structure")
    xi = 0.1
    params = biphoton_params(setup, xi, "four_slit")
    t_decoh = math.sqrt(2 * params.width2)
    assert hom.merge_threshold(setup, xi, "four_slit") == pytest.approx(t_decoh, rel=0.2)
    for dt in (300.0, 2 * t_decoh):
        curve = hom.density_curve(setup, xi, dt, scheme="four_slit")
        report = analyze_comb(curve)
        assert report.comb_count == 2
        lo, hi = sorted(report.comb_centers)
        assert lo == pytest.approx(-dt, abs=curve.T_osc) and hi == pytest.approx(dt, abs=curve.T_osc)
    tm = np.linspace(-2000.0, 2000.0, 4001)
    for xi in oracle.PINNED_XI:
        assert np.all(hom.coincidence_density_four_slit(setup, xi, 0.0, tm) == 0.0)
        for dt in (10.0, 100.0, 1000.0):
            assert hom.coincidence_density_two_slit(setup, xi, dt, np.array([0.0]))[0] == 0.0


def test_8_normalisation_invariants(setup, criterion):
    criterion("8 normalisation and probability invariants")
    for scheme in ("two_slit", "four_slit"):
        for xi in oracle.PINNED_XI:
            delays = np.array(list(oracle.pinned_delays(setup, xi, scheme).values()))
            delays = np.concatenate([delays, -delays])
            w = hom.split_probability(setup, xi, delays, scheme)
            u = hom.unsplit_probability(setup, xi, delays, scheme)
            assert np.all(np.abs(w + u - 1.0) <= 1e-12)
            assert np.all((w >= 0) & (w <= 1) & (u >= 0) & (u <= 1))
            analytic = normalize(setup, xi, scheme, "analytic")
            assert normalize(setup, xi, scheme, "quadrature") == pytest.approx(analytic, rel=1e-8)
