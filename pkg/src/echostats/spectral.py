"""Discrete Fourier measure of the echo and the quantities read off it.

The echo is a product of per-mode factors 1 - alpha/2 + (alpha/2) cos(Lambda t),
so its measure is the convolution of per-mode atom triples. The measure is
kept folded onto omega >= 0: an atom (omega, w) stands for w cos(omega t), and
multiplying by (alpha/2) cos(Lambda t) splits it into halves at omega + Lambda
and |omega - Lambda|. Folded weights sum to L(0) = 1 at every stage, so the
weight dropped by pruning bounds the reconstruction error uniformly in t.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .errors import InsufficientStructureError, MeasureTooCoarseError, NoDynamicsError
from .ising import ModeData, band_edges
from .moments import mean_echo_log

MAX_DISCARDED = 0.01


@dataclass(frozen=True)
class SpectralMeasure:
    """Folded atomic measure: L(t) = sum_i weight_i cos(omega_i t) + O(discarded_mass).

    ``omega[0] == 0`` always; it holds the time-averaged echo.
    """

    omega: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    merge_tol: float
    prune_tol: float
    discarded_mass: float

    @property
    def n_atoms(self) -> int:
        return self.omega.shape[0]

    @property
    def zero_weight(self) -> float:
        return float(self.weight[0])

    def nonzero(self):
        """Frequencies and weights of the atoms away from omega = 0."""
        return self.omega[1:], self.weight[1:]

    def evaluate(self, t):
        """Reconstruct the echo from the atoms."""
        t = np.asarray(t, dtype=np.float64)
        ts = np.ascontiguousarray(np.atleast_1d(t))
        out = _backend.kernels.cos_sum(self.weight, self.omega, ts)
        return float(out[0]) if t.ndim == 0 else out

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["omega", "weight"])
            for o, x in zip(self.omega.tolist(), self.weight.tolist()):
                w.writerow([f"{o:.16e}", f"{x:.16e}"])
        return path


def default_merge_tol(md: ModeData) -> float:
    return 1e-9 * band_edges(md.spec.h2)[1]


def spectral_measure(md: ModeData, merge_tol: float | None = None, prune_tol: float = 1e-12,
                     max_atoms: int = 5_000_000) -> SpectralMeasure:
    """Build the folded measure mode by mode with merging and pruning.

    After each convolution step, atoms within ``merge_tol`` of a cluster
    anchor are merged (summed weight, weight-averaged frequency) and atoms
    lighter than ``prune_tol`` are dropped into ``discarded_mass``. The
    omega = 0 atom never takes part in merging.
    """
    if merge_tol is None:
        merge_tol = default_merge_tol(md)
    if merge_tol < 0:
        raise ValueError("merge_tol must be nonnegative")
    if not 0.0 <= prune_tol < 1.0:
        raise ValueError("prune_tol must lie in [0, 1)")
    lam = md.lambda2
    active = md.alpha > 0.0
    if np.any(active) and merge_tol >= float(lam[active].min()):
        raise ValueError("merge_tol must stay below the smallest excited frequency")

    merge = _backend.kernels.merge_atoms
    w0 = 1.0
    om = np.empty(0)
    wt = np.empty(0)
    discarded = 0.0
    for a, L_k in zip(md.alpha.tolist(), lam.tolist()):
        if a == 0.0:
            continue
        stay = 1.0 - 0.5 * a
        q = 0.25 * a
        diff = np.abs(om - L_k)
        exact_zero = diff == 0.0
        w0_new = w0 * stay + q * float(wt[exact_zero].sum())
        keep = ~exact_zero
        cand_o = np.concatenate((om, om + L_k, diff[keep], [L_k]))
        cand_w = np.concatenate((wt * stay, wt * q, wt[keep] * q, [w0 * 2.0 * q]))
        order = np.argsort(cand_o, kind="stable")
        om, wt = merge(np.ascontiguousarray(cand_o[order]), np.ascontiguousarray(cand_w[order]), merge_tol)
        w0 = w0_new
        if prune_tol > 0.0:
            light = wt < prune_tol
            if np.any(light):
                discarded += math.fsum(wt[light].tolist())
                om, wt = om[~light], wt[~light]
        if discarded > MAX_DISCARDED:
            raise MeasureTooCoarseError(f"pruning discarded {discarded:.3g} of the spectral weight; lower prune_tol")
        if om.shape[0] > max_atoms:
            raise MeasureTooCoarseError(f"measure grew beyond {max_atoms} atoms; raise prune_tol or merge_tol")

    omega = np.concatenate(([0.0], om))
    weight = np.concatenate(([w0], wt))
    return SpectralMeasure(omega=omega, weight=weight, merge_tol=float(merge_tol),
                           prune_tol=float(prune_tol), discarded_mass=discarded)


def one_particle_amplitude(md: ModeData):
    """One-particle envelope: frequencies Lambda_k with amplitudes alpha_k / 2."""
    return md.lambda2.copy(), 0.5 * md.alpha


def first_order_echo(md: ModeData, t, refined: bool = False):
    """Mean plus one-particle cosines.

    With ``refined`` the cosine amplitudes are rescaled by Lbar / (1 - alpha_k/2),
    which tracks the exact one-particle atoms when the quench is large.
    """
    t = np.asarray(t, dtype=np.float64)
    ts = np.ascontiguousarray(np.atleast_1d(t))
    lbar = math.exp(mean_echo_log(md))
    amp = 0.5 * md.alpha
    if refined:
        amp = lbar * amp / (1.0 - amp)
    out = lbar + _backend.kernels.cos_sum(np.ascontiguousarray(amp), md.lambda2, ts)
    return float(out[0]) if t.ndim == 0 else out


def gap_scales(md: ModeData) -> tuple[float, float]:
    """Smallest one-particle energy, and smallest spacing between one-particle energies."""
    lam = np.sort(md.lambda2)
    d10 = float(lam[0])
    if lam.shape[0] < 2:
        raise ValueError("the one-particle spacing needs L >= 4")
    return d10, float(np.diff(lam).min())


def revival_time(measure: SpectralMeasure) -> float:
    """2 pi / omega_peak for the heaviest nonzero-frequency atom (ties go to smaller omega)."""
    om, wt = measure.nonzero()
    if om.shape[0] == 0:
        raise NoDynamicsError("only the zero-frequency atom is present")
    return 2.0 * math.pi / float(om[int(np.argmax(wt))])


def dominant_atoms(measure: SpectralMeasure, count: int = 2):
    """The ``count`` heaviest nonzero-frequency atoms, heaviest first."""
    om, wt = measure.nonzero()
    if om.shape[0] < count:
        raise InsufficientStructureError(f"need {count} nonzero-frequency atoms, have {om.shape[0]}")
    idx = np.argsort(-wt, kind="stable")[:count]
    return om[idx], wt[idx]
