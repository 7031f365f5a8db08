# cython: language_level=3
"""Compiled inner loops. Semantics must match ``_pure`` exactly.

The per-time loops run in parallel over time points; every output element is
reduced by a single thread in a fixed order, so results do not depend on the
thread count.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sin, cos, log1p, fabs

cnp.import_array()


def log_echo(const double[::1] alpha, const double[::1] lam, const double[::1] times):
    """sum_k log(1 - alpha_k sin^2(lam_k t / 2)) for every t."""
    cdef Py_ssize_t nt = times.shape[0], nk = alpha.shape[0], i, k
    cdef double acc, s, t
    out = np.empty(nt, dtype=np.float64)
    cdef double[::1] o = out
    for i in prange(nt, nogil=True, schedule="static"):
        t = 0.5 * times[i]
        acc = 0.0
        for k in range(nk):
            s = sin(lam[k] * t)
            acc = acc + log1p(-alpha[k] * s * s)
        o[i] = acc
    return out


def cos_sum(const double[::1] amp, const double[::1] freq, const double[::1] times):
    """sum_j amp_j cos(freq_j t) for every t."""
    cdef Py_ssize_t nt = times.shape[0], nj = amp.shape[0], i, j
    cdef double acc, t
    out = np.empty(nt, dtype=np.float64)
    cdef double[::1] o = out
    for i in prange(nt, nogil=True, schedule="static"):
        t = times[i]
        acc = 0.0
        for j in range(nj):
            acc = acc + amp[j] * cos(freq[j] * t)
        o[i] = acc
    return out


def brute_echo(const double[::1] weights, const double[::1] energies, const double[::1] times):
    """|sum_n p_n exp(-i E_n t)|^2 for every t."""
    cdef Py_ssize_t nt = times.shape[0], nn = weights.shape[0], i, n
    cdef double re, im, t, ph
    out = np.empty(nt, dtype=np.float64)
    cdef double[::1] o = out
    for i in prange(nt, nogil=True, schedule="static"):
        t = times[i]
        re = 0.0
        im = 0.0
        for n in range(nn):
            ph = energies[n] * t
            re = re + weights[n] * cos(ph)
            im = im - weights[n] * sin(ph)
        o[i] = re * re + im * im
    return out


def merge_atoms(const double[::1] omega, const double[::1] weight, double tol):
    """Greedy anchored clustering of frequency-sorted atoms.

    A cluster starts at its smallest frequency and absorbs every following
    atom within ``tol`` of that anchor. Merged atoms carry the summed weight
    at the weight-averaged frequency.
    """
    cdef Py_ssize_t n = omega.shape[0], i, m = 0
    out_w = np.empty(n, dtype=np.float64)
    out_o = np.empty(n, dtype=np.float64)
    cdef double[::1] ow = out_w
    cdef double[::1] oo = out_o
    cdef double anchor, wsum, wo
    if n == 0:
        return out_o, out_w
    with nogil:
        anchor = omega[0]
        wsum = weight[0]
        wo = weight[0] * omega[0]
        for i in range(1, n):
            if omega[i] - anchor <= tol:
                wsum += weight[i]
                wo += weight[i] * omega[i]
            else:
                ow[m] = wsum
                oo[m] = wo / wsum if wsum > 0.0 else anchor
                m += 1
                anchor = omega[i]
                wsum = weight[i]
                wo = weight[i] * omega[i]
        ow[m] = wsum
        oo[m] = wo / wsum if wsum > 0.0 else anchor
        m += 1
    return out_o[:m].copy(), out_w[:m].copy()
