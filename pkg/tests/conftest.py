"""Shared helpers: independent oracles and instance builders.

The transform oracle below is a deliberate plain-loop implementation, kept
independent of the package's vectorised paths so it can serve as the
ground truth in tests.
"""

import cmath
import math

import numpy as np
import pytest

from znsparse import backend


def dft_oracle(values):
    """Direct-summation unitary transform, scalar loops only."""
    n = len(values)
    out = []
    for w in range(n):
        acc = 0j
        for t in range(n):
            acc += complex(values[t]) * cmath.exp(-2j * cmath.pi * w * t / n)
        out.append(acc / math.sqrt(n))
    return np.array(out)


def symmetric_omega(rng, n, m_half):
    """A conjugate-symmetric sampled set (closed under w -> -w mod n)."""
    folded = rng.choice(n // 2 + 1, size=m_half, replace=False)
    om = set()
    for f in folded:
        om.add(int(f))
        om.add(int((n - f) % n))
    return sorted(om)


def random_real_sparse(rng, n, t):
    x = np.zeros(n)
    supp = rng.choice(n, size=t, replace=False)
    x[supp] = rng.choice([-1.0, 1.0], size=t) * rng.uniform(0.5, 1.0, size=t)
    return x


def random_complex_sparse(rng, n, t):
    x = np.zeros(n, dtype=complex)
    supp = rng.choice(n, size=t, replace=False)
    x[supp] = rng.uniform(0.5, 1.0, size=t) * np.exp(2j * np.pi * rng.random(t))
    return x


def samples_on(x, omegas):
    """Exact transform samples of x at the given frequencies, via the oracle
    matrix product (independent of the solver's internal matrix)."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    om = np.asarray(sorted(omegas))
    rows = np.exp(-2j * np.pi * np.outer(om, np.arange(n)) / n) / np.sqrt(n)
    vals = rows @ x
    return {int(w): complex(v) for w, v in zip(om, vals)}


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    if request.param == "numba" and not backend.HAS_NUMBA:
        pytest.skip("numba unavailable")
    previous = backend.current()
    backend.set_backend(request.param)
    yield request.param
    backend.set_backend(previous)
