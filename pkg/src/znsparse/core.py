"""Signals, spectra and the unitary Fourier transform on the cyclic group Z_N.

Conventions fixed here and used everywhere else in the package:

* forward transform   xhat(w) = N**-0.5 * sum_t x(t) exp(-2*pi*i*w*t/N)
* inverse transform   x(t)   = N**-0.5 * sum_w xhat(w) exp(+2*pi*i*w*t/N)

Both are unitary, so the l2 norm is preserved and ``idft(dft(x)) == x`` up
to rounding.  Transforms are evaluated as a direct matrix product against
the N x N character table (the reference path; N stays at desk scale here).

All types are immutable values and all operations are pure, so everything
in this module can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("values must be finite (no NaN/inf)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


class Signal:
    """A complex-valued function on Z_N (time side), indexed t = 0..N-1."""

    __slots__ = ("n", "values")

    def __init__(self, values):
        object.__setattr__(self, "values", _as_complex_vector(values))
        object.__setattr__(self, "n", self.values.size)

    def __setattr__(self, name, value):
        raise AttributeError("Signal is immutable")

    def __repr__(self):
        return f"Signal(n={self.n})"


class Spectrum:
    """A complex-valued function on the dual copy of Z_N (frequency side)."""

    __slots__ = ("n", "values")

    def __init__(self, values):
        object.__setattr__(self, "values", _as_complex_vector(values))
        object.__setattr__(self, "n", self.values.size)

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    def __repr__(self):
        return f"Spectrum(n={self.n})"


@dataclass(frozen=True)
class SupportSet:
    """A subset of {0,..,N-1}; used for time supports, bands and sampled
    frequency sets alike."""

    n: int
    members: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("group order must be positive")
        mem = tuple(sorted(int(m) for m in self.members))
        if len(set(mem)) != len(mem):
            raise ValueError("members must be distinct")
        if mem and (mem[0] < 0 or mem[-1] >= self.n):
            raise ValueError("members must lie in [0, n)")
        object.__setattr__(self, "members", mem)

    @classmethod
    def from_iterable(cls, n, members):
        return cls(n, tuple(members))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def complement(self) -> "SupportSet":
        inside = set(self.members)
        return SupportSet(self.n, tuple(i for i in range(self.n) if i not in inside))

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return int(item) in set(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class ZeroTolerance:
    """Magnitude below which an entry counts as zero for support counting.

    The default 1e-10 is meant for inputs normalised to unit l2 norm: it is
    far above accumulated rounding at desk-scale N and far below any genuine
    coefficient used in the test corpus.
    """

    eps_zero: float = 1e-10

    def __post_init__(self):
        if not self.eps_zero >= 0:
            raise ValueError("eps_zero must be nonnegative")


DEFAULT_TOL = ZeroTolerance()


@lru_cache(maxsize=6)
def unitary_dft_matrix(n: int) -> np.ndarray:
    """The unitary character table W with W[w, t] = e(-w t / n) / sqrt(n)."""
    t = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(t, t) / n) / np.sqrt(n)
    w.flags.writeable = False
    return w


def _coerce_signal(x) -> Signal:
    return x if isinstance(x, Signal) else Signal(x)


def _coerce_spectrum(s) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum(s)


def dft(x) -> Spectrum:
    """Unitary forward transform of a Signal (or array-like)."""
    x = _coerce_signal(x)
    return Spectrum(unitary_dft_matrix(x.n) @ x.values)


def idft(s) -> Signal:
    """Unitary inverse transform of a Spectrum (or array-like)."""
    s = _coerce_spectrum(s)
    return Signal(unitary_dft_matrix(s.n).conj().T @ s.values)


def l0_norm(x, tol: ZeroTolerance = DEFAULT_TOL) -> int:
    """Number of entries of modulus > eps_zero (support size)."""
    values = x.values if isinstance(x, (Signal, Spectrum)) else np.asarray(x)
    return int(np.count_nonzero(np.abs(values) > tol.eps_zero))


def l1_norm(x) -> float:
    """Sum of moduli of the entries."""
    values = x.values if isinstance(x, (Signal, Spectrum)) else np.asarray(x)
    return float(np.sum(np.abs(values)))


def a_norm(s) -> float:
    """Wiener-algebra norm of a Spectrum: the l1 norm of its coefficient
    sequence, i.e. of the inverse transform.  a_norm(dft(x)) == l1_norm(x)."""
    return l1_norm(idft(_coerce_spectrum(s)))


def cyclic_distance(i: int, j: int, n: int) -> int:
    d = abs(int(i) - int(j)) % n
    return min(d, n - d)


def cyclic_step(support: SupportSet) -> int:
    """Minimal pairwise cyclic distance within a support ("pas").

    By convention a singleton has step N, which keeps step hypotheses of the
    form ``step >= d`` satisfiable for one-point supports.
    """
    if len(support) == 0:
        raise ValueError("cyclic_step of an empty support is undefined")
    if len(support) == 1:
        return support.n
    mem = support.to_array()
    gaps = np.diff(np.concatenate([mem, [mem[0] + support.n]]))
    return int(gaps.min())
