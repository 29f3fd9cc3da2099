import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdc_hom import BBO, CrystalDispersion, ConfigError, TransparencyError, load_crystal
from spdc_hom import dispersion
from spdc_hom.errors import DerivativeDomainError
from spdc_hom.units import wavelength_to_omega

# keep the finite-difference stencil well inside the transparency window
wavelengths = st.floats(0.25, 10.0)
angles = st.floats(0.0, math.pi / 2)


def test_bbo_preset_values():
    assert BBO.sellmeier_o == (2.7405, 0.0184, 0.0179, 0.0155)
    assert BBO.sellmeier_e == (2.3730, 0.0128, 0.0156, 0.0044)
    assert BBO.window_um == (0.19, 13.29)


def test_known_indices():
    # direct evaluation of the Sellmeier form at the pump and degenerate wavelengths
    assert dispersion.index_ordinary(BBO, 0.4047) == pytest.approx(
        math.sqrt(2.7405 + 0.0184 / (0.4047**2 - 0.0179) - 0.0155 * 0.4047**2), rel=1e-15
    )
    assert 1.65 < dispersion.index_ordinary(BBO, 0.8094) < 1.67


def test_extraordinary_below_ordinary():
    lam = np.linspace(0.3, 3.0, 50)
    assert np.all(dispersion.index_extraordinary(BBO, lam) < dispersion.index_ordinary(BBO, lam))


@pytest.mark.parametrize("lam", [0.1, 14.0, float("nan")])
def test_outside_window_raises(lam):
    with pytest.raises(TransparencyError):
        dispersion.index_ordinary(BBO, lam)


def test_window_edges_are_inside():
    dispersion.index_ordinary(BBO, 0.19)
    dispersion.index_ordinary(BBO, 13.29)


def test_angle_limits():
    lam = 0.4047
    assert dispersion.index_extraordinary_at_angle(BBO, lam, 0.0) == pytest.approx(
        dispersion.index_ordinary(BBO, lam), rel=1e-15)
    assert dispersion.index_extraordinary_at_angle(BBO, lam, math.pi / 2) == pytest.approx(
        dispersion.index_extraordinary(BBO, lam), rel=1e-15)


def test_angle_outside_range_raises():
    with pytest.raises(ValueError):
        dispersion.index_extraordinary_at_angle(BBO, 0.4047, -0.1)


@given(lam=wavelengths, a=angles, b=angles)
def test_index_monotone_in_angle(lam, a, b):
    lo, hi = sorted((a, b))
    n_lo = dispersion.index_extraordinary_at_angle(BBO, lam, lo)
    n_hi = dispersion.index_extraordinary_at_angle(BBO, lam, hi)
    # n(phi) runs monotonically from n_o to n_e, whichever is larger
    direction = np.sign(dispersion.index_extraordinary(BBO, lam) - dispersion.index_ordinary(BBO, lam))
    assert direction * (n_hi - n_lo) >= -1e-15


@settings(max_examples=60)
@given(lam=wavelengths)
def test_group_index_ordinary_matches_finite_difference(lam):
    omega = wavelength_to_omega(lam)
    analytic = dispersion.group_index(BBO, omega, "o")
    numeric = dispersion.group_index_fd(BBO, omega, "o")
    assert abs(analytic - numeric) < 1e-6


@settings(max_examples=60)
@given(lam=st.floats(0.25, 2.0), phi=angles)
def test_group_index_extraordinary_matches_finite_difference(lam, phi):
    omega = wavelength_to_omega(lam)
    analytic = dispersion.group_index(BBO, omega, "e", phi)
    numeric = dispersion.group_index_fd(BBO, omega, "e", phi)
    assert abs(analytic - numeric) < 1e-6


def test_group_index_exceeds_phase_index_in_visible():
    omega = wavelength_to_omega(0.8094)
    assert dispersion.group_index(BBO, omega) > dispersion.index_ordinary(BBO, 0.8094)


def test_group_index_at_window_edge_raises():
    with pytest.raises(DerivativeDomainError):
        dispersion.group_index(BBO, wavelength_to_omega(13.29))


def test_extraordinary_branch_needs_angle():
    with pytest.raises(ValueError):
        dispersion.group_index(BBO, 3.0, "e")


def test_bbo_passes_consistency_checks():
    assert dispersion.check_crystal(BBO) == []


def test_corrupted_coefficients_reported():
    bad = CrystalDispersion("bad", (0.5, 0.0184, 0.0179, 0.0155), BBO.sellmeier_e)
    problems = dispersion.check_crystal(bad)
    assert problems and any("n_o" in p or "<= 1" in p for p in problems)


def test_crystal_validation():
    with pytest.raises(ConfigError) as info:
        CrystalDispersion("x", (1, 2, 3), (1, 2, 3, 4), (2.0, 1.0))
    assert set(info.value.errors) == {"sellmeier_o", "window_um"}


def test_load_crystal_sources(tmp_path):
    assert load_crystal("BBO") is BBO
    assert load_crystal(BBO.to_dict()) == BBO
    path = tmp_path / "c.json"
    path.write_text('{"name": "BBO", "sellmeier_o": [2.7405, 0.0184, 0.0179, 0.0155],'
                    ' "sellmeier_e": [2.3730, 0.0128, 0.0156, 0.0044], "window_um": [0.19, 13.29]}')
    assert load_crystal(str(path)) == BBO
    with pytest.raises(ConfigError):
        load_crystal("KDP-unknown")
