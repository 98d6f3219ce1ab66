"""Backend selection for the numeric kernels.

``SAS_FWM_BACKEND=numpy`` forces the pure-numpy path; the default is numba
when it imports.  ``SAS_FWM_THREADS`` caps numba's thread pool.
"""
from __future__ import annotations

import contextlib
import os
import warnings

try:
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # avoids probing an outdated system TBB on every parallel launch
        numba.config.THREADING_LAYER = "workqueue"

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def _initial_backend():
    requested = os.environ.get("SAS_FWM_BACKEND", "numba").strip().lower()
    if requested not in BACKENDS:
        warnings.warn(f"SAS_FWM_BACKEND={requested!r} not recognised; using numpy")
        return "numpy"
    if requested == "numba" and not HAVE_NUMBA:
        return "numpy"
    return requested


_backend = _initial_backend()

if HAVE_NUMBA:
    _threads = os.environ.get("SAS_FWM_THREADS")
    if _threads:
        try:
            numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            warnings.warn(f"ignoring SAS_FWM_THREADS={_threads!r}")


def get_backend():
    return _backend


def set_backend(name):
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextlib.contextmanager
def use_backend(name):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


prange = numba.prange if HAVE_NUMBA else range
