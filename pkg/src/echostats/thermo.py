"""Thermodynamic-limit rate functions and their long-time asymptotics.

All rates are per site: the echo behaves as exp(-L s(t)) at fixed t, and
the time-averaged echo as exp(-L g). Integrals over k in (0, pi) are either
done with a nested trapezoid rule (s(t), whose integrand is a smooth periodic
function of k) or with adaptive quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureError
from .ising import band_edges, bogoliubov_angle, dispersion

_SQRT_PI = math.sqrt(math.pi)


def _alpha_k(h1, h2, k):
    d = bogoliubov_angle(h2, k) - bogoliubov_angle(h1, k)
    return np.clip(np.sin(d) ** 2, 0.0, 1.0)


def _quad(f, a, b, points=None, tol=1e-12):
    val, err = integrate.quad(f, a, b, points=points, limit=400, epsabs=tol, epsrel=1e-12, full_output=False)
    if not err <= max(1e3 * tol, 1e-9):
        raise QuadratureError(f"quadrature did not converge (error estimate {err:.3g})", estimate=val, achieved=err)
    return val


def s_of_t(h1: float, h2: float, t: float, tol: float = 1e-10, max_points: int = 1 << 24) -> float:
    """Rate s(t) = -(1/2 pi) int_0^pi log(1 - alpha_k sin^2(Lambda_k t / 2)) dk.

    Trapezoid rule on [0, pi] with the point count doubled until successive
    estimates agree to ``tol``. The integrand is an even 2 pi-periodic
    function of k, so the rule converges spectrally.
    """
    if h1 == h2 or t == 0:
        return 0.0
    t = abs(float(t))
    e_max = band_edges(h2)[1]
    # the phase Lambda t sweeps about e_max * t radians; resolve it before testing convergence
    n_min = max(64, int(2.0 * e_max * t) + 1)

    def f(k):
        return np.log1p(-_alpha_k(h1, h2, k) * np.sin(0.5 * dispersion(h2, k) * t) ** 2)

    n = 64
    k = np.linspace(0.0, math.pi, n + 1)
    fk = f(k)
    total = math.fsum(fk[1:-1].tolist()) + 0.5 * (fk[0] + fk[-1])
    est = -total * (math.pi / n) / (2.0 * math.pi)
    diff = math.inf
    while n < max_points:
        kn = math.pi * (np.arange(n, dtype=np.float64) + 0.5) / n
        total += math.fsum(f(kn).tolist())
        n *= 2
        new = -total * (math.pi / n) / (2.0 * math.pi)
        diff = abs(new - est)
        est = new
        if n >= n_min and diff <= tol:
            return est
    raise QuadratureError(f"s(t) did not reach tolerance {tol:g} with {n} points", estimate=est, achieved=diff)


def _cos_dtheta_zero(h1: float, h2: float):
    """Momentum where cos(dtheta) changes sign, if inside (0, pi)."""
    if h1 + h2 == 0:
        return None
    c = -(1.0 + h1 * h2) / (h1 + h2)
    if -1.0 < c < 1.0:
        return math.acos(c)
    return None


def s_infinity(h1: float, h2: float) -> float:
    """Limit of s(t): -(1/pi) int_0^pi log((1 + |cos dtheta_k|) / 2) dk."""
    if h1 == h2:
        return 0.0

    def f(k):
        d = bogoliubov_angle(h2, k) - bogoliubov_angle(h1, k)
        return math.log(0.5 * (1.0 + abs(math.cos(d))))

    k0 = _cos_dtheta_zero(h1, h2)
    return -_quad(f, 0.0, math.pi, points=[k0] if k0 is not None else None) / math.pi


def g_rate(h1: float, h2: float) -> float:
    """Rate of the time-averaged echo: -(1/2 pi) int_0^pi log(1 - alpha_k / 2) dk."""
    if h1 == h2:
        return 0.0

    def f(k):
        return math.log1p(-0.5 * float(_alpha_k(h1, h2, k)))

    return -_quad(f, 0.0, math.pi) / (2.0 * math.pi)


# ---------------------------------------------------------------- asymptotics

def _canonical(h1: float, h2: float):
    """Map h2 < 0 onto h2 > 0 using the symmetry h -> -h, k -> pi - k."""
    if h2 == 0:
        raise ValueError("edge amplitudes need h2 != 0 (flat band)")
    return (-h1, -h2) if h2 < 0 else (h1, h2)


def edge_amplitudes(h1: float, h2: float) -> tuple[float, float]:
    """Amplitudes (A_m, A_M) of the t^(-3/2) corrections at the two band edges."""
    a, b = _canonical(h1, h2)
    if b == 1.0:
        raise ValueError("lower-edge amplitude is singular at h2 = 1 (gapless band)")
    if a == 1.0 or a == -1.0:
        raise ValueError("edge amplitudes are singular at h1 = +-1")
    num = (a - b) ** 2 / (16.0 * _SQRT_PI * b**1.5)
    A_m = num / ((1.0 - a) ** 2 * math.sqrt(abs(1.0 - b)))
    A_M = -num / ((1.0 + a) ** 2 * math.sqrt(abs(1.0 + b)))
    return A_m, A_M


def asymptotic_s(h1: float, h2: float, t, literal: bool = False, s_inf: float | None = None):
    """Long-time form s(inf) - A_m t^(-3/2) cos(t E_m + 3pi/4) - A_M t^(-3/2) cos(t E_M + phi_M).

    The stationary point at the band maximum has the opposite curvature to
    the one at the minimum, so phi_M = pi/4. With ``literal`` the upper-edge
    phase is taken equal to the lower-edge one (3pi/4) instead.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t == 0):
        raise ValueError("the asymptotic form needs t != 0")
    s_inf = s_infinity(h1, h2) if s_inf is None else s_inf
    A_m, A_M = edge_amplitudes(h1, h2)
    E_m, E_M = band_edges(h2)
    at = np.abs(t)
    env = at**-1.5
    phi_M = 0.75 * math.pi if literal else 0.25 * math.pi
    out = s_inf - A_m * env * np.cos(at * E_m + 0.75 * math.pi) - A_M * env * np.cos(at * E_M + phi_M)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ThermoAsymptotics:
    E_m: float
    E_M: float
    s_inf: float
    g: float
    A_m: float
    A_M: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("E_m", "E_M", "s_inf", "g", "A_m", "A_M")}


def thermo_asymptotics(h1: float, h2: float) -> ThermoAsymptotics:
    """Band edges, both rates and the edge amplitudes (NaN where the amplitudes are singular)."""
    E_m, E_M = band_edges(h2)
    try:
        A_m, A_M = edge_amplitudes(h1, h2)
    except ValueError:
        A_m = A_M = math.nan
    return ThermoAsymptotics(E_m=E_m, E_M=E_M, s_inf=s_infinity(h1, h2), g=g_rate(h1, h2), A_m=A_m, A_M=A_M)


# ---------------------------------------------------------------- energy representation

def _check_band(h2: float, omega):
    E_m, E_M = band_edges(h2)
    omega = np.asarray(omega, dtype=np.float64)
    if h2 == 0:
        raise ValueError("the band is flat at h2 = 0")
    if np.any(omega <= E_m) or np.any(omega >= E_M):
        raise ValueError(f"omega must lie strictly inside the band ({E_m}, {E_M})")
    return omega, E_m, E_M


def density_of_states(h2: float, omega):
    """rho(omega) = dk/domega = 2 omega / sqrt((omega^2 - E_m^2)(E_M^2 - omega^2))."""
    omega, E_m, E_M = _check_band(h2, omega)
    out = 2.0 * omega / np.sqrt((omega**2 - E_m**2) * (E_M**2 - omega**2))
    return float(out) if out.ndim == 0 else out


def momentum_of_energy(h2: float, omega):
    """Invert Lambda(k) = omega on (0, pi); Lambda is monotone in k for h2 != 0."""
    omega, _, _ = _check_band(h2, omega)
    c = (0.25 * omega**2 - 1.0 - h2 * h2) / (2.0 * h2)
    out = np.arccos(np.clip(c, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def alpha_of_omega(h1: float, h2: float, omega):
    """Overlap amplitude sin^2(dtheta) at the momentum where Lambda_k = omega."""
    k = momentum_of_energy(h2, omega)
    out = _alpha_k(h1, h2, np.asarray(k))
    return float(out) if out.ndim == 0 else out


def alpha_of_omega_rational(h1: float, h2: float, omega):
    """Closed rational form of alpha(omega) in the couplings and omega (diagnostic only).

    It differs from the k-space value by the constant factor 1/h2; see alpha_consistency.
    """
    omega, E_m, E_M = _check_band(h2, omega)
    w2 = omega**2
    num = (w2 - E_m**2) * (E_M**2 - w2) * (h2 - h1) ** 2
    den = 4.0 * h2**2 * (4.0 * (h2 - h1) * (1.0 - h1 * h2) + h1 * w2) * w2
    out = num / den
    return float(out) if out.ndim == 0 else out


def alpha_consistency(h1: float, h2: float, omega) -> dict:
    """Compare the k-space alpha(omega) with the rational form.

    Returns both values and their ratio (rational / k-space).
    """
    exact = alpha_of_omega(h1, h2, omega)
    rational = alpha_of_omega_rational(h1, h2, omega)
    ratio = np.asarray(rational) / np.asarray(exact)
    return {"k_space": exact, "rational": rational, "ratio": ratio if np.ndim(ratio) else float(ratio)}


def band_quad(f, h2: float, n: int = 256, breaks=()) -> float:
    """int_{E_m}^{E_M} f(omega) rho(omega) d omega.

    The band is cut at ``breaks`` (or at its midpoint when none are given).
    The two outer pieces are mapped by omega = E_m + u^2 and omega = E_M - u^2,
    which cancels the inverse square roots of rho; inner pieces use plain
    Gauss-Legendre.
    """
    E_m, E_M = band_edges(h2)
    if E_M <= E_m:
        raise ValueError("the band is flat at h2 = 0")
    x, w = np.polynomial.legendre.leggauss(n)
    cuts = sorted(b for b in breaks if E_m < b < E_M) or [0.5 * (E_m + E_M)]

    def lower(b):
        span = math.sqrt(b - E_m)
        u = 0.5 * span * (x + 1.0)
        om = E_m + u * u
        # rho * 2u with the vanishing factor divided out analytically
        jac = 4.0 * om / np.sqrt((om + E_m) * (E_M**2 - om**2))
        return 0.5 * span * float(np.dot(w, f(om) * jac))

    def upper(a):
        span = math.sqrt(E_M - a)
        u = 0.5 * span * (x + 1.0)
        om = E_M - u * u
        jac = 4.0 * om / np.sqrt((om**2 - E_m**2) * (E_M + om))
        return 0.5 * span * float(np.dot(w, f(om) * jac))

    def inner(a, b):
        om = a + 0.5 * (b - a) * (x + 1.0)
        rho = 2.0 * om / np.sqrt((om**2 - E_m**2) * (E_M**2 - om**2))
        return 0.5 * (b - a) * float(np.dot(w, f(om) * rho))

    total = lower(cuts[0]) + upper(cuts[-1])
    for a, b in zip(cuts, cuts[1:]):
        total += inner(a, b)
    return total


def s_infinity_energy(h1: float, h2: float, n: int = 256) -> float:
    """s(inf) through the energy integral, an independent route to :func:`s_infinity`."""
    if h1 == h2:
        return 0.0
    k0 = _cos_dtheta_zero(h1, h2)
    # |cos dtheta| has a kink where it vanishes; cut the band there
    breaks = [float(dispersion(h2, k0))] if k0 is not None else []
    f = lambda om: np.log(0.5 * (1.0 + np.sqrt(1.0 - alpha_of_omega(h1, h2, om))))
    return -band_quad(f, h2, n, breaks) / math.pi


def series_identity_check(x: float, max_terms: int = 10_000_000) -> tuple[float, float]:
    """Partial sum of -sum_k x^k C(2k,k) / (k 4^k) against 2 log((1 + sqrt(1 - x)) / 2)."""
    if not abs(x) < 1:
        raise ValueError("the series needs |x| < 1")
    rhs = 2.0 * math.log(0.5 * (1.0 + math.sqrt(1.0 - x)))
    terms = []
    c = 1.0  # C(2k,k) / 4^k
    p = 1.0
    for k in range(1, max_terms + 1):
        c *= (2 * k - 1) / (2 * k)
        p *= x
        term = p * c / k
        terms.append(term)
        if abs(term) < 1e-18 * max(1.0, abs(rhs)) * (1.0 - abs(x)):
            break
    return -math.fsum(terms), rhs


def limit_order_compare(h1: float, h2: float, L: int) -> tuple[float, float]:
    """(exp(-L g), exp(-L s_inf)): the time average of the echo versus its long-time value."""
    return math.exp(-L * g_rate(h1, h2)), math.exp(-L * s_infinity(h1, h2))


def limit_order_discrepancy(h1: float, h2: float) -> float:
    """|g - s_inf| / max(g, s_inf), 0 on the diagonal."""
    g, s = g_rate(h1, h2), s_infinity(h1, h2)
    top = max(g, s)
    return 0.0 if top == 0 else abs(g - s) / top
