"""Single-particle data of the periodic transverse-field Ising chain.

Conventions: H = -sum_i (sigma^x_i sigma^x_{i+1} + h sigma^z_i) with unit
exchange, so energies, frequencies and times are in units of J = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class QuenchSpec:
    """A quench h1 -> h2 on a periodic chain of even length L.

    The initial state is the ground state at ``h1``; evolution is generated
    by the Hamiltonian at ``h2``.
    """

    h1: float
    h2: float
    L: int

    def __post_init__(self):
        if not (math.isfinite(self.h1) and math.isfinite(self.h2)):
            raise ValueError("couplings must be finite")
        _check_size(self.L)
        object.__setattr__(self, "h1", float(self.h1))
        object.__setattr__(self, "h2", float(self.h2))
        object.__setattr__(self, "L", int(self.L))

    def as_dict(self) -> dict:
        return {"h1": self.h1, "h2": self.h2, "L": self.L}


def _check_size(L):
    if isinstance(L, bool) or int(L) != L:
        raise ValueError(f"chain length must be an integer, got {L!r}")
    L = int(L)
    if L < 2 or L % 2:
        raise ValueError(f"chain length must be a positive even integer, got {L}")
    return L


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModeData:
    """Per-momentum quench data on the positive half of the Brillouin zone.

    Attributes
    ----------
    ks : ndarray
        The L/2 momenta pi (2n + 1) / L.
    theta1, theta2 : ndarray
        Bogoliubov angles at h1 and h2.
    dtheta : ndarray
        theta2 - theta1.
    lambda2 : ndarray
        Single-particle energies of the evolution Hamiltonian.
    alpha : ndarray
        Overlap amplitudes sin^2(theta1 - theta2), clamped to [0, 1].
    """

    spec: QuenchSpec
    ks: np.ndarray = field(repr=False)
    theta1: np.ndarray = field(repr=False)
    theta2: np.ndarray = field(repr=False)
    dtheta: np.ndarray = field(repr=False)
    lambda2: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)

    @property
    def n_modes(self) -> int:
        return self.ks.shape[0]

    @property
    def trivial(self) -> bool:
        """True when no mode is excited (h1 == h2)."""
        return not np.any(self.alpha > 0.0)


def mode_grid(L: int) -> np.ndarray:
    """Positive momenta k_n = pi (2n + 1) / L, n = 0 .. L/2 - 1."""
    L = _check_size(L)
    n = np.arange(L // 2, dtype=np.float64)
    return np.pi * (2.0 * n + 1.0) / L


def full_zone_grid(L: int) -> np.ndarray:
    """All L momenta pi (2n + 1) / L, n = 0 .. L - 1."""
    L = _check_size(L)
    n = np.arange(L, dtype=np.float64)
    return np.pi * (2.0 * n + 1.0) / L


def bogoliubov_angle(h, k):
    """Angle with tan(theta) = -sin k / (h + cos k), taken in the atan2 branch."""
    return np.arctan2(-np.sin(k), h + np.cos(k))


def dispersion(h, k):
    """Single-particle energy 2 sqrt((h + cos k)^2 + sin^2 k)."""
    return 2.0 * np.hypot(h + np.cos(k), np.sin(k))


def band_edges(h: float) -> tuple[float, float]:
    """Band minimum and maximum of the dispersion at coupling ``h``."""
    a, b = abs(1.0 - h), abs(1.0 + h)
    return 2.0 * min(a, b), 2.0 * max(a, b)


def overlap_amplitude(h1, h2, k):
    """sin^2 of the angle difference, clamped to [0, 1]."""
    d = bogoliubov_angle(h2, k) - bogoliubov_angle(h1, k)
    return np.clip(np.sin(d) ** 2, 0.0, 1.0)


def mode_data(spec: QuenchSpec) -> ModeData:
    """Precompute angles, energies and overlap amplitudes for ``spec``."""
    ks = mode_grid(spec.L)
    t1 = bogoliubov_angle(spec.h1, ks)
    t2 = bogoliubov_angle(spec.h2, ks)
    dt = t2 - t1
    alpha = np.clip(np.sin(dt) ** 2, 0.0, 1.0)
    return ModeData(
        spec=spec,
        ks=_frozen(ks),
        theta1=_frozen(t1),
        theta2=_frozen(t2),
        dtheta=_frozen(dt),
        lambda2=_frozen(dispersion(spec.h2, ks)),
        alpha=_frozen(alpha),
    )
