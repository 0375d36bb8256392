"""Backend selection for the hot kernels.

The compiled extension ``gapkit._ckernels`` is used when it imports; the
numpy module ``gapkit._fallback`` is used otherwise, or when the environment
variable ``GAPKIT_PURE_PYTHON`` is set to a non-empty value other than "0".
``BACKEND`` names the active choice ("cython" or "python").
"""
import os

import numpy as np

from . import _fallback

_FORCE_PYTHON = os.environ.get("GAPKIT_PURE_PYTHON", "") not in ("", "0")

try:
    if _FORCE_PYTHON:
        raise ImportError("pure python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"


def available_backends():
    """Mapping of backend name to kernel module, for tests and benchmarks."""
    out = {"python": _fallback}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def _module(backend):
    if backend is None:
        return _impl
    found = available_backends()
    if backend not in found:
        raise ValueError(f"backend {backend!r} unavailable; have {sorted(found)}")
    return found[backend]


def _vec(a):
    return np.ascontiguousarray(a, dtype=float)


def two_time(x, max_lag, backend=None):
    mod = _module(backend)
    return mod.two_time(_vec(x), int(max_lag))


def three_time(x, max_k, max_j, backend=None):
    mod = _module(backend)
    return mod.three_time(_vec(x), int(max_k), int(max_j))


def _mc_args(q0, p0, omega, lin, quad):
    quad = None if quad is None else _vec(quad)
    return _vec(q0), _vec(p0), _vec(omega), _vec(lin), quad


def gap_traces(q0, p0, omega, lin, quad, times, backend=None):
    mod = _module(backend)
    return mod.gap_traces(*_mc_args(q0, p0, omega, lin, quad), _vec(times))


def mc_accumulate(q0, p0, omega, lin, quad, times, backend=None):
    mod = _module(backend)
    return mod.mc_accumulate(*_mc_args(q0, p0, omega, lin, quad), _vec(times))


def mc_accumulate3(q0, p0, omega, lin, quad, dt, max_k, max_j, shift=0.0, backend=None):
    mod = _module(backend)
    return mod.mc_accumulate3(*_mc_args(q0, p0, omega, lin, quad), float(dt),
                              int(max_k), int(max_j), float(shift))
