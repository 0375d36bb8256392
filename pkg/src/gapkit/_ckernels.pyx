# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_fallback.py`` for the reference semantics."""
import numpy as np

from libc.math cimport cos, sin


def two_time(const double[::1] x, Py_ssize_t max_lag):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k, i, stop
    cdef double a0, a1, a2, a3
    out = np.empty(max_lag + 1)
    cdef double[::1] o = out
    with nogil:
        for k in range(max_lag + 1):
            # four independent partial sums so the reduction can pipeline
            a0 = a1 = a2 = a3 = 0.0
            stop = (n - k) - (n - k) % 4
            for i in range(0, stop, 4):
                a0 = a0 + x[i] * x[i + k]
                a1 = a1 + x[i + 1] * x[i + k + 1]
                a2 = a2 + x[i + 2] * x[i + k + 2]
                a3 = a3 + x[i + 3] * x[i + k + 3]
            for i in range(stop, n - k):
                a0 = a0 + x[i] * x[i + k]
            o[k] = ((a0 + a1) + (a2 + a3)) / (n - k)
    return out


def three_time(const double[::1] x, Py_ssize_t max_k, Py_ssize_t max_j):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k, i, j, jmax, w = max_j + 1
    cdef double p
    out = np.zeros((max_k + 1, w))
    cdef double[:, ::1] o = out
    with nogil:
        for k in range(max_k + 1):
            for i in range(n - k):
                p = x[i] * x[i + k]
                jmax = n - k - i
                if jmax > w:
                    jmax = w
                for j in range(jmax):
                    o[k, j] += p * x[i + k + j]
            for j in range(w):
                o[k, j] /= (n - k - j)
    return out


cdef void _trace(const double[::1] q0, const double[::1] p0, const double[::1] omega,
                 const double[::1] lin, const double[:, ::1] quad, bint has_quad,
                 const double[:, ::1] c, const double[:, ::1] s,
                 double[::1] qbuf, double[::1] out) noexcept nogil:
    cdef Py_ssize_t nt = c.shape[0], m = omega.shape[0]
    cdef Py_ssize_t t, j, l
    cdef double d, row
    for t in range(nt):
        d = 0.0
        for j in range(m):
            qbuf[j] = q0[j] * c[t, j] + p0[j] / omega[j] * s[t, j]
            d = d + lin[j] * qbuf[j]
        if has_quad:
            for j in range(m):
                row = 0.0
                for l in range(m):
                    row = row + quad[j, l] * qbuf[l]
                d = d + qbuf[j] * row
        out[t] = d


def _tables(omega, times):
    phase = np.outer(times, omega)
    return np.ascontiguousarray(np.cos(phase)), np.ascontiguousarray(np.sin(phase))


def _quad_arg(quad, m):
    if quad is None:
        return np.zeros((1, 1)), False
    return np.ascontiguousarray(quad, dtype=float), True


def gap_traces(const double[:, ::1] q0, const double[:, ::1] p0, const double[::1] omega,
               const double[::1] lin, quad, times):
    cdef Py_ssize_t n = q0.shape[0], m = omega.shape[0], i
    ctab, stab = _tables(np.asarray(omega), np.asarray(times, dtype=float))
    cdef const double[:, ::1] c = ctab
    cdef const double[:, ::1] s = stab
    qarr, flag = _quad_arg(quad, m)
    cdef const double[:, ::1] qd = qarr
    cdef bint has_quad = flag
    out = np.empty((n, c.shape[0]))
    cdef double[:, ::1] o = out
    cdef double[::1] qbuf = np.empty(m)
    with nogil:
        for i in range(n):
            _trace(q0[i], p0[i], omega, lin, qd, has_quad, c, s, qbuf, o[i])
    return out


def mc_accumulate(const double[:, ::1] q0, const double[:, ::1] p0, const double[::1] omega,
                  const double[::1] lin, quad, times):
    cdef Py_ssize_t n = q0.shape[0], m = omega.shape[0], i, t
    ctab, stab = _tables(np.asarray(omega), np.asarray(times, dtype=float))
    cdef const double[:, ::1] c = ctab
    cdef const double[:, ::1] s = stab
    cdef Py_ssize_t nt = c.shape[0]
    qarr, flag = _quad_arg(quad, m)
    cdef const double[:, ::1] qd = qarr
    cdef bint has_quad = flag
    total = np.zeros(nt)
    total_sq = np.zeros(nt)
    cdef double[::1] tot = total, tsq = total_sq
    cdef double[::1] qbuf = np.empty(m), d = np.empty(nt)
    cdef double prod
    with nogil:
        for i in range(n):
            _trace(q0[i], p0[i], omega, lin, qd, has_quad, c, s, qbuf, d)
            for t in range(nt):
                prod = d[t] * d[0]
                tot[t] += prod
                tsq[t] += prod * prod
    return total, total_sq


def mc_accumulate3(const double[:, ::1] q0, const double[:, ::1] p0, const double[::1] omega,
                   const double[::1] lin, quad, double dt, Py_ssize_t max_k, Py_ssize_t max_j,
                   double shift):
    cdef Py_ssize_t n = q0.shape[0], m = omega.shape[0], i, k, j
    times = dt * np.arange(max_k + max_j + 1)
    ctab, stab = _tables(np.asarray(omega), times)
    cdef const double[:, ::1] c = ctab
    cdef const double[:, ::1] s = stab
    cdef Py_ssize_t nt = c.shape[0]
    qarr, flag = _quad_arg(quad, m)
    cdef const double[:, ::1] qd = qarr
    cdef bint has_quad = flag
    total = np.zeros((max_k + 1, max_j + 1))
    total_sq = np.zeros((max_k + 1, max_j + 1))
    cdef double[:, ::1] tot = total, tsq = total_sq
    cdef double[::1] qbuf = np.empty(m), d = np.empty(nt)
    cdef double p, prod
    with nogil:
        for i in range(n):
            _trace(q0[i], p0[i], omega, lin, qd, has_quad, c, s, qbuf, d)
            for k in range(nt):
                d[k] = d[k] - shift
            for k in range(max_k + 1):
                p = d[0] * d[k]
                for j in range(max_j + 1):
                    prod = p * d[k + j]
                    tot[k, j] += prod
                    tsq[k, j] += prod * prod
    return total, total_sq
