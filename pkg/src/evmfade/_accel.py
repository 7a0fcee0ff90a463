"""Numba switch.

Kernels are compiled with numba unless ``EVMFADE_NUMBA`` is set to ``0``
(or numba is missing), in which case the pure-numpy fallbacks in
:mod:`evmfade._kernels` are used instead.
"""
import os

_FLAG = os.environ.get("EVMFADE_NUMBA", "1").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if numba is not None:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
