"""Exact finite-L time series: echo, magnetization and the short-time regime.

Echo values are carried as natural logs internally; for chains of a few
hundred sites the echo itself underflows long before the log does.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import EchoUnderflowWarning, NoDynamicsError
from .ising import ModeData, QuenchSpec, bogoliubov_angle, dispersion, full_zone_grid, mode_data
from .moments import mean_echo_log

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have the same shape")


def _times(t):
    t = np.asarray(t, dtype=np.float64)
    return np.ascontiguousarray(np.atleast_1d(t)), t.ndim == 0


def log_loschmidt(md: ModeData, t):
    """Natural log of the echo at time(s) ``t``."""
    ts, scalar = _times(t)
    out = _backend.kernels.log_echo(md.alpha, md.lambda2, ts)
    return float(out[0]) if scalar else out


def loschmidt(md: ModeData, t):
    """Loschmidt echo prod_k (1 - alpha_k sin^2(Lambda_k t / 2)).

    Values that underflow (a vanishing factor, or a log below the double
    range) come back as the smallest positive double with an
    :class:`EchoUnderflowWarning`.
    """
    ts, scalar = _times(t)
    with np.errstate(divide="ignore"):
        lg = _backend.kernels.log_echo(md.alpha, md.lambda2, ts)
    out = np.exp(lg)
    bad = out <= 0.0
    if np.any(bad):
        warnings.warn(f"echo underflow at {int(bad.sum())} time(s); clamped to {_TINY:.3g}", EchoUnderflowWarning, stacklevel=2)
        out[bad] = _TINY
    return float(out[0]) if scalar else out


def magnetization(spec: QuenchSpec, t):
    """Transverse magnetization per site after the quench, summed over the full zone."""
    ts, scalar = _times(t)
    k = full_zone_grid(spec.L)
    t2 = bogoliubov_angle(spec.h2, k)
    d = t2 - bogoliubov_angle(spec.h1, k)
    const = math.fsum((np.cos(t2) * np.cos(d)).tolist())
    amp = np.sin(t2) * np.sin(d)
    out = (const + _backend.kernels.cos_sum(amp, dispersion(spec.h2, k), ts)) / spec.L
    return float(out[0]) if scalar else out


def magnetization_mean(spec: QuenchSpec) -> float:
    """Long-time average of the transverse magnetization."""
    k = full_zone_grid(spec.L)
    t2 = bogoliubov_angle(spec.h2, k)
    d = t2 - bogoliubov_angle(spec.h1, k)
    return math.fsum((np.cos(t2) * np.cos(d)).tolist()) / spec.L


def magnetization_variance(spec: QuenchSpec) -> float:
    """Long-time variance of the transverse magnetization, sum_k sin^2 theta2 sin^2 dtheta / L^2."""
    k = full_zone_grid(spec.L)
    t2 = bogoliubov_angle(spec.h2, k)
    d = t2 - bogoliubov_angle(spec.h1, k)
    return math.fsum((np.sin(t2) ** 2 * np.sin(d) ** 2).tolist()) / spec.L**2


def energy_variance(md: ModeData) -> float:
    """Connected energy variance sigma^2 = sum_k alpha_k Lambda_k^2 / 4."""
    return math.fsum((md.alpha * md.lambda2**2 / 4.0).tolist())


def short_time_gaussian(md: ModeData, t):
    """Gaussian short-time form exp(-sigma^2 t^2)."""
    t = np.asarray(t, dtype=np.float64)
    out = np.exp(-energy_variance(md) * t * t)
    return float(out) if out.ndim == 0 else out


def relaxation_time(md: ModeData) -> float:
    """Time at which the Gaussian decay reaches the mean echo: sqrt(-log Lbar / sigma^2)."""
    s2 = energy_variance(md)
    if md.trivial or s2 <= 0.0:
        raise NoDynamicsError("h1 == h2: the echo is identically 1, no relaxation")
    return math.sqrt(-mean_echo_log(md) / s2)


def collapse_series(h1: float, h2: float, sizes, tau) -> list[TimeSeries]:
    """Echo curves L_L(tau / sigma(L)) for each chain length.

    When the quench is trivial sigma vanishes and the curves are identically 1.
    """
    tau = np.ascontiguousarray(tau, dtype=np.float64)
    out = []
    for L in sizes:
        md = mode_data(QuenchSpec(h1, h2, L))
        s2 = energy_variance(md)
        if s2 > 0.0:
            ts = tau / math.sqrt(s2)
            vals = loschmidt(md, ts)
        else:
            ts = tau.copy()
            vals = np.ones_like(tau)
        out.append(TimeSeries(times=ts, values=vals, label=f"L={L}"))
    return out
