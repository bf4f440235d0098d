"""Optional numba acceleration.

Hot kernels are written once as plain Python over numpy arrays and wrapped
with :func:`njit`. Setting ``COMPSAW_DISABLE_NUMBA=1`` (or running without
numba installed) leaves them undecorated, and callers that have a vectorised
numpy implementation switch to it via :data:`USE_NUMBA`.
"""
import os

DISABLE_ENV = "COMPSAW_DISABLE_NUMBA"
WORKERS_ENV = "COMPSAW_WORKERS"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _flag_set(value):
    return value.strip().lower() not in ("", "0", "false", "no", "off")


USE_NUMBA = numba is not None and not _flag_set(os.environ.get(DISABLE_ENV, ""))


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when acceleration is on, identity otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        return njit()(args[0])

    def wrap(fn):
        if not USE_NUMBA:
            return fn
        kwargs.setdefault("cache", True)
        return numba.njit(**kwargs)(fn)

    return wrap


def worker_count(default=1):
    """Number of worker processes from ``COMPSAW_WORKERS``."""
    raw = os.environ.get(WORKERS_ENV, "")
    if not raw.strip():
        return default
    n = int(raw)
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1, got {raw!r}")
    return n
