"""Numba / numpy backend selection for the hot solver kernels.

The Douglas-Rachford inner loops dominate runtime (tens of thousands of
solves in the experiment suites), so they exist twice: compiled with numba
``@njit`` and as a pure-numpy fallback with identical iteration math.

Selection, in order of precedence:

* ``set_backend("numba"|"numpy")`` at runtime;
* the environment variable ``ZNSPARSE_BACKEND`` (read once at import);
* default: "numba" when importable, else "numpy".

``benchmarks/bench_backends.py`` compares the two paths.
"""

from __future__ import annotations

import os

VALID = ("numba", "numpy")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False


def _initial() -> str:
    env = os.environ.get("ZNSPARSE_BACKEND", "").strip().lower()
    if env:
        if env not in VALID:
            raise ValueError(
                f"ZNSPARSE_BACKEND must be one of {VALID}, got {env!r}"
            )
        if env == "numba" and not HAS_NUMBA:
            raise ValueError("ZNSPARSE_BACKEND=numba but numba is not importable")
        return env
    return "numba" if HAS_NUMBA else "numpy"


_current = _initial()


def current() -> str:
    return _current


def set_backend(name: str) -> None:
    global _current
    if name not in VALID:
        raise ValueError(f"backend must be one of {VALID}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    _current = name


def kernels():
    """Return the kernel module for the currently selected backend."""
    if _current == "numba":
        from . import _kernels_numba

        return _kernels_numba
    from . import _kernels_numpy

    return _kernels_numpy
