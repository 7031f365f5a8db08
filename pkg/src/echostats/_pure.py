"""Numpy / pure-Python versions of the compiled kernels.

Used when the extension is not built, or when ``ECHOSTATS_PURE_PYTHON=1``.
"""
import numpy as np

_CHUNK_ELEMS = 2_000_000


def _chunks(nt, width):
    step = max(1, _CHUNK_ELEMS // max(width, 1))
    for start in range(0, nt, step):
        yield slice(start, min(nt, start + step))


def log_echo(alpha, lam, times):
    alpha = np.ascontiguousarray(alpha, dtype=np.float64)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    times = np.ascontiguousarray(times, dtype=np.float64)
    out = np.empty(times.shape[0])
    for sl in _chunks(times.shape[0], alpha.shape[0]):
        s = np.sin(np.outer(0.5 * times[sl], lam))
        out[sl] = np.log1p(-alpha * s * s).sum(axis=1)
    return out


def cos_sum(amp, freq, times):
    amp = np.ascontiguousarray(amp, dtype=np.float64)
    freq = np.ascontiguousarray(freq, dtype=np.float64)
    times = np.ascontiguousarray(times, dtype=np.float64)
    out = np.empty(times.shape[0])
    for sl in _chunks(times.shape[0], amp.shape[0]):
        out[sl] = np.cos(np.outer(times[sl], freq)) @ amp
    return out


def brute_echo(weights, energies, times):
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    energies = np.ascontiguousarray(energies, dtype=np.float64)
    times = np.ascontiguousarray(times, dtype=np.float64)
    out = np.empty(times.shape[0])
    for sl in _chunks(times.shape[0], weights.shape[0]):
        ph = np.outer(times[sl], energies)
        re = np.cos(ph) @ weights
        im = np.sin(ph) @ weights
        out[sl] = re * re + im * im
    return out


def merge_atoms(omega, weight, tol):
    n = len(omega)
    if n == 0:
        return np.empty(0), np.empty(0)
    out_o = []
    out_w = []
    anchor = omega[0]
    wsum = weight[0]
    wo = weight[0] * omega[0]
    for o, w in zip(omega[1:].tolist(), weight[1:].tolist()):
        if o - anchor <= tol:
            wsum += w
            wo += w * o
        else:
            out_w.append(wsum)
            out_o.append(wo / wsum if wsum > 0.0 else anchor)
            anchor = o
            wsum = w
            wo = w * o
    out_w.append(wsum)
    out_o.append(wo / wsum if wsum > 0.0 else anchor)
    return np.array(out_o, dtype=np.float64), np.array(out_w, dtype=np.float64)
