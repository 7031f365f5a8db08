"""Time-averaged moments of the echo.

Exact moments come from the zero-frequency coefficient of each mode's factor
raised to the n-th power. Non-resonant moments count contraction diagrams
(derangements) over the dephased weights and serve only as a comparison: the
Ising spectrum has resonances at second order, so they are not the truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ising import ModeData


def _log_sum(x) -> float:
    """Compensated sum over modes in ascending-k order."""
    return math.fsum(np.asarray(x, dtype=np.float64).tolist())


def mean_echo_log(md: ModeData) -> float:
    """log of the time-averaged echo, sum_k log(1 - alpha_k / 2)."""
    return _log_sum(np.log1p(-0.5 * md.alpha))


def g0_polynomial(n: int) -> list[Fraction]:
    """Exact coefficients [c_1, ..., c_n] of g0^(n)(alpha) = sum_m c_m alpha^m."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return [Fraction(-1, 4) ** m * math.comb(n, m) * math.comb(2 * m, m) for m in range(1, n + 1)]


def g0_coefficient(n: int, alpha):
    """Zero-frequency part of (1 + X_k)^n - 1 for a mode of amplitude ``alpha``.

    Equals sum_{m=1}^{n} (-alpha/4)^m C(n, m) C(2m, m).
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    alpha = np.asarray(alpha, dtype=np.float64)
    x = -0.25 * alpha
    out = np.zeros_like(alpha)
    p = np.ones_like(alpha)
    for m in range(1, n + 1):
        p = p * x
        out = out + math.comb(n, m) * math.comb(2 * m, m) * p
    return out if out.ndim else float(out)


def exact_moment_log(md: ModeData, n: int) -> float:
    """log of the exact n-th moment, sum_k log(1 + g0^(n)(alpha_k))."""
    if n == 1:
        return mean_echo_log(md)
    return _log_sum(np.log1p(g0_coefficient(n, md.alpha)))


def exact_variance(md: ModeData) -> float:
    """Exact time-averaged variance of the echo.

    Written as Lbar^2 * expm1(sum_k log1p(alpha^2/8 / (1 - alpha/2)^2)) so the
    difference of two nearly equal products never cancels.
    """
    a = md.alpha
    half = 1.0 - 0.5 * a
    excess = _log_sum(np.log1p(0.125 * a * a / (half * half)))
    return math.exp(2.0 * mean_echo_log(md)) * math.expm1(excess)


def derangement_count(k: int) -> int:
    """Number of fixed-point-free permutations of k elements (k >= 2)."""
    if k < 2:
        raise ValueError("derangement count defined here for k >= 2")
    return sum((-1) ** (k - j) * math.comb(k, j) * (math.factorial(j) - 1) for j in range(2, k + 1))


def dephased_weights(md: ModeData):
    """Per-mode weights (a_k, b_k) of the dephased state, a_k = (1 + cos dtheta_k) / 2."""
    c = np.cos(md.dtheta)
    a = 0.5 * (1.0 + c)
    return a, 1.0 - a


def power_sum_log(md: ModeData, m: int) -> float:
    """log sum_n p_n^(2m) = sum_k log(a_k^(2m) + b_k^(2m))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    a, b = dephased_weights(md)
    return _log_sum(np.log(a ** (2 * m) + b ** (2 * m)))


@dataclass(frozen=True)
class NonResonantMoments:
    """Moments of the echo under the strong non-resonance hypothesis."""

    mu2: float
    mu3: float
    variance: float
    s2: float
    s4: float
    s6: float


def nonresonant_moments(md: ModeData) -> NonResonantMoments:
    """Second and third moments and the variance assuming non-resonance.

    Power sums S_2m = sum_n p_n^(2m) factorize over modes. With x_n = p_n^2,
    the pair sum is S2^2 - S4 and the all-distinct triple sum is
    S2^3 - 3 S4 S2 + 2 S6.
    """
    lbar_log = mean_echo_log(md)
    lbar = math.exp(lbar_log)
    s4 = math.exp(power_sum_log(md, 2))
    s6 = math.exp(power_sum_log(md, 3))
    a = md.alpha
    half = 1.0 - 0.5 * a
    # S4 / Lbar^2 = prod (1 - a + a^2/8) / (1 - a/2)^2
    rel = _log_sum(np.log1p(-0.125 * a * a / (half * half)))
    variance = -math.exp(2.0 * lbar_log) * math.expm1(rel)
    pairs = variance  # sum_{i != j} p_i^2 p_j^2 = S2^2 - S4
    triples = lbar**3 - 3.0 * s4 * lbar + 2.0 * s6
    mu2 = lbar * lbar + pairs
    mu3 = lbar**3 + 3.0 * lbar * pairs + 2.0 * triples
    return NonResonantMoments(mu2=mu2, mu3=mu3, variance=variance, s2=lbar, s4=s4, s6=s6)


@dataclass(frozen=True)
class BoundReport:
    holds: bool
    margins: dict  # order -> log mu_n - log n! - n log Lbar (negative means the bound holds)


def moment_bound_check(md: ModeData, n_max: int) -> BoundReport:
    """Test mu_n < n! Lbar^n for 2 <= n <= n_max using the exact moments."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    lm = mean_echo_log(md)
    margins = {n: exact_moment_log(md, n) - math.lgamma(n + 1) - n * lm for n in range(2, n_max + 1)}
    return BoundReport(holds=all(v < 0.0 for v in margins.values()), margins=margins)


@dataclass(frozen=True)
class MomentReport:
    order: int
    exact_log: float
    nonresonant_log: float | None
    mean_log: float
    variance: float
    variance_nr: float


def moment_report(md: ModeData, n: int) -> MomentReport:
    """Collect exact and (for n <= 3) non-resonant moments of order ``n``."""
    nr = nonresonant_moments(md)
    lm = mean_echo_log(md)
    nr_log = {1: lm, 2: _safe_log(nr.mu2), 3: _safe_log(nr.mu3)}.get(n)
    return MomentReport(
        order=n,
        exact_log=exact_moment_log(md, n),
        nonresonant_log=nr_log,
        mean_log=lm,
        variance=exact_variance(md),
        variance_nr=nr.variance,
    )


def _safe_log(x):
    return math.log(x) if x > 0 else -math.inf
