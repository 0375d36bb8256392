"""Pure numpy implementations of the hot kernels.

Each function has the same signature and semantics as its counterpart in
``_ckernels.pyx``; the two backends are required to agree to 1e-9 relative.
All inputs are float64 arrays; ``x`` arguments are already centered.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_CHUNK = 2048


def two_time(x, max_lag):
    n = x.size
    out = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        out[k] = np.dot(x[: n - k], x[k:]) / (n - k)
    return out


def three_time(x, max_k, max_j):
    n = x.size
    out = np.zeros((max_k + 1, max_j + 1))
    width = max_j + 1
    for k in range(max_k + 1):
        p = x[: n - k] * x[k:]
        # full-width windows x[i+k : i+k+width] exist for i < m
        m = n - k - max_j
        windows = sliding_window_view(x[k:], width)
        out[k] = p[:m] @ windows[:m]
        # ragged tail, i in [m, n-k): only j <= n-k-1-i are in range
        for i in range(max(m, 0), n - k):
            jmax = n - k - i
            out[k, :jmax] += p[i] * x[i + k : i + k + jmax]
    counts = n - np.arange(max_k + 1)[:, None] - np.arange(max_j + 1)[None, :]
    return out / counts


def gap_traces(q0, p0, omega, lin, quad, times):
    """Gap values for a batch of initial conditions.

    Returns an array of shape (n_samples, n_times) with
    Delta(t) = sum_j lin_j Q_j(t) + sum_jk quad_jk Q_j(t) Q_k(t).
    """
    phase = np.outer(times, omega)
    c, s = np.cos(phase), np.sin(phase)
    # Q[n, t, j]
    q = q0[:, None, :] * c[None] + (p0 / omega)[:, None, :] * s[None]
    delta = q @ lin
    if quad is not None:
        delta += np.einsum("ntj,jk,ntk->nt", q, quad, q, optimize=True)
    return delta


def mc_accumulate(q0, p0, omega, lin, quad, times):
    """Sums of Delta(t)Delta(0) and of its square over the sample axis."""
    total = np.zeros(times.size)
    total_sq = np.zeros(times.size)
    for start in range(0, q0.shape[0], _CHUNK):
        d = gap_traces(q0[start:start + _CHUNK], p0[start:start + _CHUNK], omega, lin, quad, times)
        prod = d * d[:, :1]
        total += prod.sum(axis=0)
        total_sq += (prod * prod).sum(axis=0)
    return total, total_sq


def mc_accumulate3(q0, p0, omega, lin, quad, dt, max_k, max_j, shift):
    """Sums of dD(0) dD(k dt) dD((k+j) dt) and its square, dD = Delta - shift."""
    times = dt * np.arange(max_k + max_j + 1)
    total = np.zeros((max_k + 1, max_j + 1))
    total_sq = np.zeros_like(total)
    kk = np.arange(max_k + 1)[:, None]
    jj = np.arange(max_j + 1)[None, :]
    chunk = max(1, (1 << 21) // total.size)
    for start in range(0, q0.shape[0], chunk):
        d = gap_traces(q0[start:start + chunk], p0[start:start + chunk], omega, lin, quad, times) - shift
        prod = d[:, :1, None] * d[:, kk] * d[:, kk + jj]
        total += prod.sum(axis=0)
        total_sq += (prod * prod).sum(axis=0)
    return total, total_sq
