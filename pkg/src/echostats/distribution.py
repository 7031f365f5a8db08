"""Long-time distribution of the echo: sampling, model densities, regimes.

Three model shapes are provided. The exponential density bounds the
distribution from above when the mean echo is small, the Gaussian describes
many comparable frequencies, and the two-frequency "batman" density captures
the quasi-critical regime where two spectral atoms dominate.
"""
from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate, special

from .dynamics import loschmidt
from .errors import InsufficientStructureError, PeakCapWarning
from .ising import ModeData, QuenchSpec, mode_data
from .moments import mean_echo_log
from .sampling import quasi_uniform_times
from .spectral import SpectralMeasure, dominant_atoms

_CHUNK = 65536


@dataclass(frozen=True)
class EmpiricalDistribution:
    bin_edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    n_samples: int
    t_horizon: float | None = None
    seed: int | None = None

    @property
    def n_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.n_samples * self.widths)

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_left", "bin_right", "count", "density"])
            for lo, hi, c, d in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts, self.density):
                w.writerow([f"{lo:.16e}", f"{hi:.16e}", int(c), f"{d:.16e}"])
        return path


def sample_echo(md: ModeData, T: float, N: int, seed: int | None = 0) -> np.ndarray:
    """Echo values at N quasi-uniform times in [0, T]."""
    if md.trivial:
        quasi_uniform_times(T, N, seed)  # argument validation only
        return np.ones(N)
    out = np.empty(N)
    for start in range(0, N, _CHUNK):
        n = min(_CHUNK, N - start)
        out[start:start + n] = loschmidt(md, quasi_uniform_times(T, n, seed, start=start))
    return out


def sample_series(evaluator: Callable, T: float, N: int, seed: int | None = 0) -> np.ndarray:
    """Evaluate a vectorized time function at N quasi-uniform times in [0, T]."""
    out = np.empty(N)
    for start in range(0, N, _CHUNK):
        n = min(_CHUNK, N - start)
        out[start:start + n] = evaluator(quasi_uniform_times(T, n, seed, start=start))
    return out


def histogram(samples, bins=50, t_horizon: float | None = None, seed: int | None = None) -> EmpiricalDistribution:
    """Bin samples into half-open bins (rightmost closed).

    ``bins`` is a count (equal bins over the sample range) or explicit edges.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size == 0:
        raise ValueError("no samples to bin")
    if np.ndim(bins) == 0:
        if int(bins) < 2:
            raise ValueError("need at least 2 bins")
        counts, edges = np.histogram(samples, bins=int(bins))
    else:
        edges = np.asarray(bins, dtype=np.float64)
        if edges.shape[0] < 3:
            raise ValueError("need at least 2 bins")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        counts, edges = np.histogram(samples, bins=edges)
    return EmpiricalDistribution(bin_edges=edges, counts=counts.astype(np.int64), n_samples=int(samples.size),
                                 t_horizon=t_horizon, seed=seed)


# ---------------------------------------------------------------- model densities

def exponential_density(mean_log: float, x):
    """theta(x) exp(-x / Lbar) / Lbar with Lbar = exp(mean_log)."""
    m = math.exp(mean_log)
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x >= 0.0, np.exp(-np.maximum(x, 0.0) / m) / m, 0.0)
    return float(out) if out.ndim == 0 else out


def exponential_cdf(mean_log: float, x):
    m = math.exp(mean_log)
    x = np.asarray(x, dtype=np.float64)
    return np.where(x > 0.0, -np.expm1(-np.maximum(x, 0.0) / m), 0.0)


def regularized_exponential_density(mean_log: float, eps: float, x):
    """Density proportional to exp(-x/Lbar - eps/x) on x > 0.

    The normalization is 2 sqrt(eps Lbar) K_1(2 sqrt(eps / Lbar)); ``eps``
    is left to the caller, no fitting is attempted.
    """
    if eps <= 0:
        raise ValueError("eps must be positive; use exponential_density for eps = 0")
    m = math.exp(mean_log)
    z = 2.0 * math.sqrt(eps / m)
    # K_1 scaled by e^z keeps the normalization finite for large z
    log_norm = math.log(2.0 * math.sqrt(eps * m) * special.kve(1, z)) - z
    x = np.asarray(x, dtype=np.float64)
    xp = np.where(x > 0.0, x, 1.0)
    out = np.where(x > 0.0, np.exp(-xp / m - eps / xp - log_norm), 0.0)
    return float(out) if out.ndim == 0 else out


def gaussian_density(mean: float, variance: float, x):
    if not variance > 0:
        raise ValueError("variance must be positive")
    x = np.asarray(x, dtype=np.float64)
    out = np.exp(-0.5 * (x - mean) ** 2 / variance) / math.sqrt(2.0 * math.pi * variance)
    return float(out) if out.ndim == 0 else out


def gaussian_cdf(mean: float, variance: float, x):
    x = np.asarray(x, dtype=np.float64)
    return special.ndtr((x - mean) / math.sqrt(variance))


@dataclass(frozen=True)
class BatmanParams:
    """Two-frequency model: L(t) = mean + A cos(omega_A t) + B cos(omega_B t)."""

    mean: float
    A: float
    B: float
    omega_A: float = math.nan
    omega_B: float = math.nan

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise ValueError("batman density needs A > 0 and B > 0")
        if self.B > self.A:
            raise ValueError("convention A >= B violated")

    @property
    def support(self) -> tuple[float, float]:
        return self.mean - (self.A + self.B), self.mean + (self.A + self.B)

    @property
    def peaks(self) -> tuple[float, float]:
        d = abs(self.A - self.B)
        return self.mean - d, self.mean + d


def batman_params(measure: SpectralMeasure, mean_log: float) -> BatmanParams:
    """A, B from the two heaviest nonzero-frequency atoms (folded weight = cosine amplitude)."""
    om, wt = dominant_atoms(measure, 2)
    if not wt[1] > 0:
        raise InsufficientStructureError("second atom carries no weight")
    return BatmanParams(mean=math.exp(mean_log), A=float(wt[0]), B=float(wt[1]),
                        omega_A=float(om[0]), omega_B=float(om[1]))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(128)


def _gl(a: float, b: float, f) -> float:
    h = 0.5 * (b - a)
    return h * float(np.dot(_GL_W, f(a + h * (_GL_X + 1.0))))


def _batman_chi(A: float, B: float, chi: float) -> float:
    """(1/(pi^2 A)) int dz / sqrt((z - a1)(z - a2)(b1 - z)(b2 - z)) on [a2, b1].

    The four roots are the sorted pairs {-1, l} and {1, u}. Each half of the
    interval is mapped by z = a2 + da sinh^2 v (left) or z = b1 - db sinh^2 v
    (right), which absorbs both nearby roots into dz / sqrt(...) = 2 dv.
    """
    lo, hi = (chi - B) / A, (chi + B) / A
    a1, a2 = min(-1.0, lo), max(-1.0, lo)
    b1, b2 = min(1.0, hi), max(1.0, hi)
    if b1 <= a2:
        return 0.0
    # a vanishing gap is a peak; keep it finite (the caller caps those points)
    da, db = max(a2 - a1, 1e-300), max(b2 - b1, 1e-300)
    mid = 0.5 * (a2 + b1)

    def left(v):
        s = np.sinh(v)
        z = a2 + da * s * s
        return 2.0 / np.sqrt((b1 - z) * (b2 - z))

    def right(v):
        s = np.sinh(v)
        z = b1 - db * s * s
        return 2.0 / np.sqrt((z - a1) * (z - a2))

    vl = math.asinh(math.sqrt((mid - a2) / da))
    vr = math.asinh(math.sqrt((b1 - mid) / db))
    return (_gl(0.0, vl, left) + _gl(0.0, vr, right)) / (math.pi**2 * A)


def batman_density(p: BatmanParams, x, eps_cap: float = 1e-9, return_flags: bool = False):
    """Density of mean + A cos(phi1) + B cos(phi2) for independent uniform phases.

    Zero outside the support. At the two logarithmic peaks, and within
    ``eps_cap`` (relative to A) of them, the value at distance ``eps_cap``
    is returned instead and flagged.
    """
    x = np.asarray(x, dtype=np.float64)
    xs = np.atleast_1d(x)
    out = np.zeros(xs.shape)
    flags = np.zeros(xs.shape, dtype=bool)
    lo, hi = p.support
    d = abs(p.A - p.B)
    cap = eps_cap * p.A
    for i, xi in enumerate(xs.tolist()):
        if not lo < xi < hi:
            continue
        chi = xi - p.mean
        for pk in (-d, d):
            if abs(chi - pk) < cap:
                chi = pk + (cap if chi >= pk else -cap)
                if not (lo < chi + p.mean < hi):
                    chi = pk + (-cap if chi > pk else cap)
                flags[i] = True
        out[i] = _batman_chi(p.A, p.B, chi)
    if np.any(flags):
        warnings.warn(f"{int(flags.sum())} point(s) within eps_cap of a batman peak were capped", PeakCapWarning, stacklevel=2)
    if x.ndim == 0:
        return (float(out[0]), bool(flags[0])) if return_flags else float(out[0])
    return (out, flags) if return_flags else out


def batman_bin_masses(p: BatmanParams, edges) -> np.ndarray:
    """Model mass per bin, integrating through the log peaks with adaptive quadrature."""
    edges = np.asarray(edges, dtype=np.float64)
    lo, hi = p.support
    pk = p.peaks

    def f(xx):
        chi = xx - p.mean
        if abs(chi - (pk[0] - p.mean)) == 0.0 or abs(chi - (pk[1] - p.mean)) == 0.0:
            return 0.0
        return _batman_chi(p.A, p.B, chi)

    out = np.zeros(edges.shape[0] - 1)
    for i in range(out.shape[0]):
        a, b = max(edges[i], lo), min(edges[i + 1], hi)
        if b <= a:
            continue
        brk = [q for q in pk if a < q < b]
        val, _ = integrate.quad(f, a, b, points=brk or None, limit=200, epsabs=1e-12, epsrel=1e-10)
        out[i] = val
    return out


# ---------------------------------------------------------------- regimes

class Regime(str, enum.Enum):
    DEGENERATE = "Degenerate"
    EXPONENTIAL = "Exponential"
    GAUSSIAN = "Gaussian"
    BATMAN_HOOD = "BatmanHood"


@dataclass(frozen=True)
class RegimeThresholds:
    """Classifier constants.

    delta_small bounds |h2 - h1| for the two-peak regime, c_qc bounds
    L |1 - h2| (quasi-critical condition), and c_exp is the value of
    -log(Lbar) above which the exponential regime is declared.
    """

    delta_small: float = 0.3
    c_qc: float = 2.0
    c_exp: float = 1.5

    def as_dict(self) -> dict:
        return asdict(self)


def classify_regime(spec: QuenchSpec, thresholds: RegimeThresholds | None = None) -> Regime:
    th = thresholds or RegimeThresholds()
    if spec.h1 == spec.h2:
        return Regime.DEGENERATE
    if abs(spec.h2 - spec.h1) <= th.delta_small and spec.L * abs(1.0 - spec.h2) <= th.c_qc:
        return Regime.BATMAN_HOOD
    if -mean_echo_log(mode_data(spec)) >= th.c_exp:
        return Regime.EXPONENTIAL
    return Regime.GAUSSIAN


def distribution_distance(emp: EmpiricalDistribution, density: Callable | None = None,
                          cdf: Callable | None = None, bin_masses=None) -> float:
    """Total-variation distance between the histogram and a model, on the bins.

    The model enters through per-bin masses: given directly, from a CDF, or
    by adaptive quadrature of ``density`` over each bin. Model mass falling
    outside the binned range counts fully toward the distance.
    """
    edges = emp.bin_edges
    if bin_masses is not None:
        q = np.asarray(bin_masses, dtype=np.float64)
    elif cdf is not None:
        q = np.diff(np.asarray(cdf(edges), dtype=np.float64))
    elif density is not None:
        q = np.array([integrate.quad(density, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])])
    else:
        raise ValueError("provide a density, a cdf or bin masses")
    q = np.clip(q, 0.0, None)
    p = emp.counts / emp.n_samples
    outside = max(0.0, 1.0 - math.fsum(q.tolist()))
    tv = 0.5 * (math.fsum(np.abs(p - q).tolist()) + outside)
    return float(min(max(tv, 0.0), 1.0))


def model_curve_csv(path, x, y) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "density"])
        for a, b in zip(np.asarray(x).tolist(), np.asarray(y).tolist()):
            w.writerow([f"{a:.16e}", f"{b:.16e}"])
    return path
