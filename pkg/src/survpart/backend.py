"""Kernel backend selection.

Hot numeric kernels ship in two equivalent implementations: a pure-numpy
one and a numba-compiled one. The active backend is chosen once at import
time from the SURVPART_BACKEND environment variable ("numpy" or "numba");
unset picks numba when it is importable and falls back to numpy otherwise.
"""

import os
import warnings

_VALID = ("numpy", "numba")


def _numba_available():
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _resolve(requested):
    if requested is None:
        return "numba" if _numba_available() else "numpy"
    requested = requested.strip().lower()
    if requested not in _VALID:
        raise ValueError(f"SURVPART_BACKEND must be one of {_VALID}, got {requested!r}")
    if requested == "numba" and not _numba_available():
        warnings.warn("numba requested but not importable, using numpy kernels")
        return "numpy"
    return requested


ACTIVE_BACKEND = _resolve(os.environ.get("SURVPART_BACKEND"))


def active_backend():
    """Name of the kernel backend selected at import time."""
    return ACTIVE_BACKEND
