"""Brute-force ground truth for short chains.

The initial state only overlaps paired-mode states, one bit per positive
momentum, so a chain of length L has 2^(L/2) contributing eigenstates. They
are enumerated explicitly here and used to check the closed forms elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _backend
from .errors import ResourceGuardError
from .ising import ModeData
from .sampling import INV_GOLDEN

MAX_ORACLE_L = 30


@dataclass(frozen=True)
class StateEnsemble:
    """Dephased state in the post-quench eigenbasis.

    ``weights[s]`` is the probability of occupation pattern ``s`` (bit j set
    means mode j is excited) and ``energies[s]`` its energy above the
    unexcited state.
    """

    weights: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    L: int

    @property
    def n_states(self) -> int:
        return self.weights.shape[0]


def enumerate_states(md: ModeData) -> StateEnsemble:
    L = md.spec.L
    if L > MAX_ORACLE_L:
        raise ResourceGuardError(f"enumeration limited to L <= {MAX_ORACLE_L}, got L = {L}")
    a = 0.5 * (1.0 + np.cos(md.dtheta))
    b = 1.0 - a
    w = np.ones(1)
    e = np.zeros(1)
    # mode j doubles the table; the new half has bit j set
    for j in range(md.n_modes):
        w = np.concatenate((w * a[j], w * b[j]))
        e = np.concatenate((e, e + md.lambda2[j]))
    return StateEnsemble(weights=w, energies=e, L=L)


def brute_echo(ens: StateEnsemble, t):
    """|sum_s p_s exp(-i E_s t)|^2."""
    t = np.asarray(t, dtype=np.float64)
    ts = np.ascontiguousarray(np.atleast_1d(t))
    out = _backend.kernels.brute_echo(ens.weights, ens.energies, ts)
    return float(out[0]) if t.ndim == 0 else out


def power_sum(ens: StateEnsemble, m: int) -> float:
    """sum_s p_s^(2m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return math.fsum((ens.weights ** (2 * m)).tolist())


def time_average_estimate(evaluator: Callable, T: float, N: int, seed: int | None = 0,
                          batches: int = 16) -> tuple[float, float]:
    """Quasi-uniform time average of ``evaluator`` on [0, T] with a batch-means standard error.

    Each of the ``batches`` blocks is its own Kronecker sequence with a random
    offset drawn from ``seed`` (a randomly shifted lattice). Blocks of a single
    sequence would be correlated and understate the error; shifted blocks are
    independent, so the spread of their means is an honest error bar.
    """
    if N < 2:
        raise ValueError("need at least two samples")
    batches = max(2, min(batches, N))
    offsets = np.random.default_rng(seed).random(batches)
    sizes = np.full(batches, N // batches)
    sizes[: N % batches] += 1
    means = np.empty(batches)
    total = []
    for j in range(batches):
        u = np.mod(offsets[j] + np.arange(sizes[j], dtype=np.float64) * INV_GOLDEN, 1.0)
        vals = np.asarray(evaluator(T * u), dtype=np.float64)
        total.append(math.fsum(vals.tolist()))
        means[j] = total[-1] / sizes[j]
    mean = math.fsum(total) / N
    se = float(np.std(means, ddof=1) / math.sqrt(batches))
    return mean, se


@dataclass(frozen=True)
class ResonanceReport:
    n_states: int
    min_gap: float  # smallest |E_s - E_s'| over distinct states
    one_nonresonant: bool
    example: tuple | None  # two distinct state pairs ((s, s'), (r, r')) with equal gaps
    example_residual: float


def resonance_probe(md: ModeData, tol: float = 1e-9) -> ResonanceReport:
    """Check 1-non-resonance and look for a second-order resonance.

    1-non-resonance means distinct occupation patterns never share an energy
    (all gaps above ``tol``). It holds for generic couplings but not for a
    flat band, e.g. h2 = 0 where every Lambda equals 2.
    A second-order resonance is a coincidence E_s - E_s' = E_r - E_r' between
    two different pairs of distinct states. Free fermions always have one:
    adding mode 1 on top of mode 0 costs the same as adding it to the vacuum,
    so ({0,1}, {0}) and ({1}, {}) share the gap Lambda_1.
    """
    ens = enumerate_states(md)
    e = np.sort(ens.energies)
    min_gap = float(np.diff(e).min()) if e.shape[0] > 1 else math.inf
    example = None
    residual = math.nan
    if md.n_modes >= 2:
        # gap between {0,1} and {0} equals the gap between {1} and {}
        g1 = ens.energies[0b11] - ens.energies[0b01]
        g2 = ens.energies[0b10] - ens.energies[0b00]
        example = ((0b11, 0b01), (0b10, 0b00))
        residual = float(abs(g1 - g2))
    return ResonanceReport(n_states=ens.n_states, min_gap=min_gap, one_nonresonant=min_gap > tol,
                           example=example, example_residual=residual)


def gap_measure(ens: StateEnsemble, rel_tol: float = 1e-9) -> dict:
    """Fourier measure of the echo from explicit state pairs.

    L(t) = sum_{s,s'} p_s p_s' exp(-i (E_s - E_s') t). Gaps that agree to
    ``rel_tol`` (relative to the largest energy) share a bucket; the result
    maps bucket index to total weight, with bucket 0 the zero frequency.
    """
    scale = rel_tol * max(float(ens.energies.max()), 1.0)
    gaps = ens.energies[:, None] - ens.energies[None, :]
    w = ens.weights[:, None] * ens.weights[None, :]
    keys = np.rint(gaps / scale).astype(np.int64).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    tot = np.bincount(inv, weights=w.ravel())
    return dict(zip(uniq.tolist(), tot.tolist()))


def oracle_moment(ens: StateEnsemble, n: int, rel_tol: float = 1e-9) -> float:
    """Time average of L(t)^n: zero-frequency weight of the n-fold self-convolution of the gap measure.

    Uses only numerical gap coincidences, so it does not rely on any
    factorization over modes. Cost grows as (3^(L/2))^n; meant for L <= 10.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    base = gap_measure(ens, rel_tol)
    keys = np.array(list(base.keys()), dtype=np.int64)
    vals = np.array(list(base.values()))
    cur_k, cur_v = keys, vals
    for _ in range(n - 1):
        k = (cur_k[:, None] + keys[None, :]).ravel()
        v = (cur_v[:, None] * vals[None, :]).ravel()
        uniq, inv = np.unique(k, return_inverse=True)
        cur_k, cur_v = uniq, np.bincount(inv, weights=v)
    # rounding can move a true zero by up to one bucket per factor
    near = np.abs(cur_k) <= n
    return math.fsum(cur_v[near].tolist())
