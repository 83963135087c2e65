"""Backend selection for the numeric kernels.

Set ``HTP_DISABLE_NUMBA=1`` before importing :mod:`htp` to run the pure-numpy
kernels instead of the numba-compiled ones. If numba is not importable the
numpy path is used regardless.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

NUMBA_REQUESTED = os.environ.get("HTP_DISABLE_NUMBA", "").strip().lower() in _FALSY

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = NUMBA_REQUESTED and HAVE_NUMBA


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
