import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from echostats.dynamics import log_loschmidt
from echostats.errors import QuadratureError
from echostats.ising import QuenchSpec, band_edges, mode_data
from echostats.moments import mean_echo_log
from echostats.thermo import (
    alpha_consistency,
    alpha_of_omega,
    asymptotic_s,
    band_quad,
    density_of_states,
    edge_amplitudes,
    g_rate,
    limit_order_compare,
    limit_order_discrepancy,
    momentum_of_energy,
    s_infinity,
    s_infinity_energy,
    s_of_t,
    series_identity_check,
    thermo_asymptotics,
)


def test_s_of_t_trivial():
    assert s_of_t(1.3, 2.0, 0.0) == 0.0
    assert s_of_t(0.7, 0.7, 12.0) == 0.0


def test_s_of_t_matches_finite_chain():
    # -log L(t) / L converges to s(t) at fixed t
    t = 3.7
    vals = [-log_loschmidt(mode_data(QuenchSpec(1.3, 2.0, L)), t) / L for L in (100, 400, 1600)]
    ref = s_of_t(1.3, 2.0, t)
    assert abs(vals[2] - vals[1]) <= abs(vals[1] - vals[0])
    assert vals[-1] == pytest.approx(ref, abs=1e-10)


def test_s_of_t_reports_failure():
    with pytest.raises(QuadratureError) as exc:
        s_of_t(1.3, 2.0, 1e3, tol=1e-30, max_points=1 << 12)
    assert exc.value.estimate is not None and exc.value.achieved is not None


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 200))
def test_s_of_t_nonnegative(h1, h2, t):
    assert s_of_t(h1, h2, t) >= 0


def test_s_infinity_basics():
    assert s_infinity(0.4, 0.4) == 0.0
    assert s_infinity(1.3, 2.0) == pytest.approx(s_infinity(2.0, 1.3), abs=1e-14)
    assert abs(s_of_t(1.3, 2.0, 1e4) - s_infinity(1.3, 2.0)) < 1e-4


@pytest.mark.parametrize("h1,h2", [(1.3, 2.0), (0.2, 0.6), (0.5, 1.5), (-0.4, 0.3)])
def test_s_infinity_energy_route(h1, h2):
    assert s_infinity_energy(h1, h2) == pytest.approx(s_infinity(h1, h2), rel=1e-8)


def test_g_rate():
    assert g_rate(0.5, 0.5) == 0.0
    r = [g_rate(0.5, 0.5 + d) / d**2 for d in (0.02, 0.01, 0.005)]
    assert abs(r[2] - r[1]) < abs(r[1] - r[0])
    md = mode_data(QuenchSpec(0.2, 0.6, 200))
    assert -mean_echo_log(md) / 200 == pytest.approx(g_rate(0.2, 0.6), abs=1e-3)


def test_g_rate_scan():
    h = np.linspace(-2, 2, 9)
    for a in h:
        for b in h:
            g = g_rate(a, b)
            assert g > 0 if a != b else g == 0


def test_edge_amplitudes_closed_form():
    h1, h2 = 1.3, 2.0
    A_m, A_M = edge_amplitudes(h1, h2)
    assert A_m == pytest.approx((h1 - h2) ** 2 / (16 * math.sqrt(math.pi) * (1 - h1) ** 2 * h2**1.5 * math.sqrt(abs(1 - h2))))
    assert A_M == pytest.approx(-(h1 - h2) ** 2 / (16 * math.sqrt(math.pi) * (1 + h1) ** 2 * h2**1.5 * math.sqrt(1 + h2)))
    assert edge_amplitudes(0.8, 0.8) == (0.0, -0.0)
    for bad in ((0.5, 0.0), (0.5, 1.0), (1.0, 2.0)):
        with pytest.raises(ValueError):
            edge_amplitudes(*bad)
    # negative h2 maps onto positive h2 by h -> -h
    assert edge_amplitudes(-1.3, -2.0) == edge_amplitudes(1.3, 2.0)


def test_negative_coupling_symmetry():
    for t in (0.7, 13.0):
        assert s_of_t(-1.3, -2.0, t) == pytest.approx(s_of_t(1.3, 2.0, t), abs=1e-12)
    assert s_infinity(-1.3, -2.0) == pytest.approx(s_infinity(1.3, 2.0), abs=1e-12)


def test_asymptotic_limits():
    s_inf = s_infinity(1.3, 2.0)
    assert asymptotic_s(1.3, 2.0, 1e12) == pytest.approx(s_inf, abs=1e-15)
    assert asymptotic_s(0.8, 0.8, 10.0) == 0.0
    with pytest.raises(ValueError):
        asymptotic_s(1.3, 2.0, 0.0)


def _error_over_envelope(t, literal=False):
    h1, h2 = 1.3, 2.0
    A_m, _ = edge_amplitudes(h1, h2)
    exact = np.array([s_of_t(h1, h2, x) for x in t])
    approx = asymptotic_s(h1, h2, t, literal=literal)
    return np.max(np.abs(exact - approx)) / (abs(A_m) * t.min() ** -1.5)


def test_asymptotic_form_converges():
    e = [_error_over_envelope(np.linspace(t, t + 3.2, 9)) for t in (50.0, 500.0, 5000.0)]
    assert e[0] > e[1] > e[2]
    assert e[2] < 1e-2
    # the relative error falls roughly as 1/t: next-order terms are O(t^-5/2)
    assert e[0] / e[2] > 30


def test_upper_edge_phase():
    t = np.linspace(1e4, 1e4 + 3.2, 9)
    assert _error_over_envelope(t) < _error_over_envelope(t, literal=True) / 5


@pytest.mark.xfail(strict=True, reason="next-order corrections are ~20% of the t^-3/2 envelope at t=50; see ledger")
def test_asymptotic_oscillating_part_at_t50():
    h1, h2, t = 1.3, 2.0, 50.0
    s_inf = s_infinity(h1, h2)
    osc_exact = s_of_t(h1, h2, t) - s_inf
    osc_asym = asymptotic_s(h1, h2, t) - s_inf
    assert osc_exact == pytest.approx(osc_asym, rel=1e-2)


def test_full_value_at_t50_within_one_percent():
    assert s_of_t(1.3, 2.0, 50.0) == pytest.approx(asymptotic_s(1.3, 2.0, 50.0), rel=1e-2)


def test_density_of_states():
    E_m, E_M = band_edges(2.0)
    v = density_of_states(2.0, 0.5 * (E_m + E_M))
    assert math.isfinite(v) and v > 0
    assert density_of_states(2.0, E_M - 1e-10) > 1e3
    for h2 in (2.0, 0.4, 1.0, -0.7):
        assert band_quad(lambda w: np.ones_like(w), h2) == pytest.approx(math.pi, rel=1e-12)
    for bad in (E_m, E_M, 7.0):
        with pytest.raises(ValueError):
            density_of_states(2.0, bad)


def test_density_is_dk_domega():
    w = np.linspace(2.5, 5.5, 7)
    dw = 1e-6
    dk = np.abs(momentum_of_energy(2.0, w + dw) - momentum_of_energy(2.0, w - dw)) / (2 * dw)
    np.testing.assert_allclose(dk, density_of_states(2.0, w), rtol=1e-6)


def test_alpha_of_omega():
    E_m, E_M = band_edges(2.0)
    assert alpha_of_omega(1.3, 2.0, E_m + 1e-9) < 1e-6
    assert alpha_of_omega(1.3, 2.0, E_M - 1e-9) < 1e-6
    w = np.linspace(E_m, E_M, 50)[1:-1]
    a = alpha_of_omega(1.3, 2.0, w)
    assert np.all((a > 0) & (a < 1))


def test_alpha_rational_form_diagnostic():
    # the rational form differs from the k-space value by exactly 1/h2
    for h1, h2 in ((1.3, 2.0), (0.2, 0.6), (-0.4, 0.3)):
        E_m, E_M = band_edges(h2)
        rep = alpha_consistency(h1, h2, np.linspace(E_m, E_M, 9)[1:-1])
        np.testing.assert_allclose(rep["ratio"], 1.0 / h2, rtol=1e-9)
    rep = alpha_consistency(1.3, 2.0, 3.0)
    assert rep["k_space"] > 0 and rep["ratio"] == pytest.approx(0.5)


@pytest.mark.parametrize("x,tol", [(0.0, 0.0), (0.1, 1e-12), (0.5, 1e-12), (0.9, 1e-12), (0.99, 1e-10), (-0.7, 1e-12)])
def test_series_identity(x, tol):
    lhs, rhs = series_identity_check(x)
    assert abs(lhs - rhs) <= tol


def test_series_identity_domain():
    for x in (1.0, -1.0, 2.0):
        with pytest.raises(ValueError):
            series_identity_check(x)


def test_limit_order():
    assert limit_order_compare(0.3, 0.3, 100) == (1.0, 1.0)
    same = limit_order_discrepancy(0.4, 0.5)
    cross = limit_order_discrepancy(0.5, 1.5)
    assert same < 0.1 and cross > same
    a, b = limit_order_compare(0.5, 1.5, 100)
    assert 0 < a <= 1 and 0 < b <= 1


def test_thermo_asymptotics_record():
    r = thermo_asymptotics(1.3, 2.0)
    assert (r.E_m, r.E_M) == (2.0, 6.0)
    assert r.s_inf >= 0 and r.g >= 0
    assert r.A_m == edge_amplitudes(1.3, 2.0)[0]
    r = thermo_asymptotics(0.5, 1.0)
    assert math.isnan(r.A_m) and r.s_inf > 0
