"""Quasi-uniform time sampling on [0, T].

A golden-ratio Kronecker sequence t_i = T * frac(u0 + i / phi). The seed picks
the offset u0, so runs are reproducible and disjoint index ranges can be
evaluated independently.
"""
import numpy as np

INV_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


def offset_for_seed(seed: int | None) -> float:
    if seed is None:
        return 0.0
    return float(np.random.default_rng(seed).random())


def quasi_uniform_times(T: float, N: int, seed: int | None = 0, start: int = 0) -> np.ndarray:
    """Sample indices ``start .. start + N - 1`` of the sequence, scaled to [0, T)."""
    if not T > 0:
        raise ValueError("horizon T must be positive")
    if N < 1:
        raise ValueError("need at least one sample")
    i = np.arange(start, start + N, dtype=np.float64)
    u = np.mod(offset_for_seed(seed) + i * INV_GOLDEN, 1.0)
    return T * u


def default_horizon(L: int) -> float:
    """max(1e4, 1000 L), in units of 1/J."""
    return float(max(1.0e4, 1000.0 * L))
