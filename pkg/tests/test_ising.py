import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from echostats.ising import (
    QuenchSpec,
    band_edges,
    bogoliubov_angle,
    dispersion,
    full_zone_grid,
    mode_data,
    mode_grid,
    overlap_amplitude,
)

couplings = st.floats(-3, 3, allow_nan=False)
sizes = st.integers(1, 60).map(lambda n: 2 * n)


def test_mode_grid_small():
    np.testing.assert_allclose(mode_grid(2), [math.pi / 2])
    np.testing.assert_allclose(mode_grid(4), [math.pi / 4, 3 * math.pi / 4])
    g = mode_grid(100)
    assert g[0] == pytest.approx(math.pi / 100) and g[-1] == pytest.approx(99 * math.pi / 100)
    assert full_zone_grid(6).shape == (6,)


@pytest.mark.parametrize("L", [0, -2, 3, 7, 2.5, True])
def test_bad_sizes_rejected(L):
    with pytest.raises(ValueError):
        mode_grid(L)


def test_quench_spec_validation():
    with pytest.raises(ValueError):
        QuenchSpec(math.inf, 1.0, 4)
    with pytest.raises(ValueError):
        QuenchSpec(0.1, math.nan, 4)
    with pytest.raises(ValueError):
        QuenchSpec(0.1, 0.2, 5)
    assert QuenchSpec(1, 2, 4).as_dict() == {"h1": 1.0, "h2": 2.0, "L": 4}


def test_angle_examples():
    assert bogoliubov_angle(0.0, math.pi / 2) == pytest.approx(-math.pi / 2)
    # scalar two-argument arctangent, evaluated independently
    assert bogoliubov_angle(0.5, math.pi / 3) == pytest.approx(math.atan2(-math.sqrt(3) / 2, 1.0), abs=1e-15)
    assert bogoliubov_angle(0.5, math.pi / 3) == pytest.approx(-0.71372, abs=1e-5)
    assert -1e-6 < bogoliubov_angle(1e7, 1.0) < 0


def test_dispersion_examples():
    assert dispersion(1.0, math.pi - math.pi / 100) == pytest.approx(4 * math.sin(math.pi / 200), rel=1e-12)
    assert dispersion(1.0, math.pi - math.pi / 100) == pytest.approx(0.0628293, abs=1e-7)
    np.testing.assert_allclose(dispersion(0.0, np.linspace(0.1, 3, 7)), 2.0)
    assert dispersion(2.0, 1e-9) == pytest.approx(6.0)


def test_band_edges_examples():
    assert band_edges(2.0) == (2.0, 6.0)
    assert band_edges(1.0) == (0.0, 4.0)
    assert band_edges(0.3) == pytest.approx((1.4, 2.6))


@given(couplings)
def test_band_edges_match_fine_grid(h):
    k = np.linspace(0, math.pi, 20001)
    lam = dispersion(h, k)
    lo, hi = band_edges(h)
    assert lam.min() == pytest.approx(lo, abs=1e-6) and lam.max() == pytest.approx(hi, abs=1e-6)


def test_mode_data_examples():
    md = mode_data(QuenchSpec(0.7, 0.7, 8))
    assert np.all(md.alpha == 0) and md.trivial
    md = mode_data(QuenchSpec(0.99, 1.01, 40))
    # peak at the band bottom, which for h2 > 0 is the grid point nearest k = pi
    assert np.argmax(md.alpha) == np.argmin(md.lambda2) == 19
    md = mode_data(QuenchSpec(0.3, 1.4, 18))
    assert np.all((md.alpha > 0) & (md.alpha < 1))
    assert not md.alpha.flags.writeable


@settings(max_examples=60)
@given(couplings, couplings, sizes)
def test_mode_data_invariants(h1, h2, L):
    md = mode_data(QuenchSpec(h1, h2, L))
    assert md.n_modes == L // 2
    for arr in (md.ks, md.theta1, md.theta2, md.dtheta, md.lambda2, md.alpha):
        assert arr.shape == (L // 2,)
    assert np.all((md.alpha >= 0) & (md.alpha <= 1))
    assert np.all(md.lambda2 > 0)
    np.testing.assert_allclose(md.lambda2**2, 4 * ((h2 + np.cos(md.ks)) ** 2 + np.sin(md.ks) ** 2), rtol=1e-13, atol=1e-14)


@given(couplings, couplings)
def test_alpha_symmetric(h1, h2):
    k = mode_grid(24)
    np.testing.assert_allclose(overlap_amplitude(h1, h2, k), overlap_amplitude(h2, h1, k), atol=1e-14)


def test_alpha_quadratic_in_dh():
    k = mode_grid(20)
    ratios = [overlap_amplitude(0.5, 0.5 + d, k) / d**2 for d in (1e-2, 5e-3, 2.5e-3, 1.25e-3)]
    diffs = [np.max(np.abs(a - b)) for a, b in zip(ratios, ratios[1:])]
    assert diffs[-1] < diffs[0] / 4
