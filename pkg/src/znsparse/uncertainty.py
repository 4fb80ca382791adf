"""Support-size uncertainty principles on Z_N and annihilating pairs.

Exact, assertable forms of the localisation results used by the rest of
the package:

* product bound   l0(x) * l0(dft(x)) >= N     for every x != 0;
* sum bound       l0(x) + l0(dft(x)) >= 2 sqrt(N)  (AM-GM consequence);
* zero-run bound  the spectrum of an s-sparse signal has no cyclic run of
  s consecutive zeros (a Vandermonde system on an arithmetic progression
  of difference 1 would force x = 0);
* equality: Dirac combs (indicators of the cyclic subgroup of order
  sqrt(N), for square N) achieve product exactly N.

``annihilating_pair_exists`` decides exactly, by rank of a partial Fourier
block, whether a pair of supports (S on the time side, S' on the frequency
side) admits a nonzero signal supported in S whose spectrum is supported
in S'.  The Monte Carlo probe estimates how frequent such pairs are among
random supports of given sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, sqrt

import numpy as np

from .core import (Signal, SupportSet, ZeroTolerance, DEFAULT_TOL, dft,
                   l0_norm, unitary_dft_matrix)
from .rng import stream_for_trial


class ZeroSignal(Exception):
    """The operation needs a nonzero input at the given tolerance."""


@dataclass(frozen=True, eq=False)
class CombWitness:
    """Indicator of the order-sqrt(N) subgroup: the uncertainty equality case."""

    n: int
    signal: Signal


def comb_witness(n: int) -> CombWitness:
    m = isqrt(n)
    if m * m != n:
        raise ValueError("comb witness needs a perfect-square group order")
    x = np.zeros(n, dtype=np.complex128)
    x[::m] = 1.0
    return CombWitness(n=n, signal=Signal(x))


def verify_support_product(x, tol: ZeroTolerance = DEFAULT_TOL):
    """Support product of x and its transform; holds iff product >= N."""
    xs = x if isinstance(x, Signal) else Signal(x)
    s = l0_norm(xs, tol)
    if s == 0:
        raise ZeroSignal("support product undefined for the zero signal")
    shat = l0_norm(dft(xs), tol)
    product = s * shat
    return product, product >= xs.n


def sum_bound(x, tol: ZeroTolerance = DEFAULT_TOL):
    """Support sum of x and its transform; holds iff sum >= 2 sqrt(N)."""
    xs = x if isinstance(x, Signal) else Signal(x)
    s = l0_norm(xs, tol)
    if s == 0:
        raise ZeroSignal("support sum undefined for the zero signal")
    total = s + l0_norm(dft(xs), tol)
    return total, total >= 2.0 * sqrt(xs.n) - 1e-12


def max_zero_run(s, tol: ZeroTolerance = DEFAULT_TOL) -> int:
    """Length of the longest cyclic run of consecutive zeros in a spectrum."""
    values = s.values if hasattr(s, "values") else np.asarray(s)
    zero = np.abs(values) <= tol.eps_zero
    n = zero.size
    if zero.all():
        return n
    doubled = np.concatenate([zero, zero])
    best = run = 0
    for flag in doubled:
        run = run + 1 if flag else 0
        best = max(best, run)
    return min(best, n)


def rank_scaled_pivoting(matrix, rel_tol: float = 1e-9) -> int:
    """Rank by Gaussian elimination with scaled partial pivoting.

    A pivot is accepted only if its modulus exceeds rel_tol times the
    largest modulus of the original matrix; the structured partial Fourier
    blocks decided here are well scaled at desk sizes, so this threshold
    separates genuine rank deficiency from rounding.
    """
    m = np.array(matrix, dtype=np.complex128)
    if m.size == 0:
        return 0
    rows, cols = m.shape
    biggest = float(np.max(np.abs(m)))
    if biggest == 0.0:
        return 0
    threshold = rel_tol * biggest
    scales = np.max(np.abs(m), axis=1)
    active = [i for i in range(rows) if scales[i] > 0]
    rank = 0
    for col in range(cols):
        if not active:
            break
        ratios = [abs(m[i, col]) / scales[i] for i in active]
        pick = int(np.argmax(ratios))
        i_star = active[pick]
        if abs(m[i_star, col]) <= threshold:
            continue
        rank += 1
        active.pop(pick)
        pivot = m[i_star, col]
        for i in active:
            factor = m[i, col] / pivot
            if factor != 0:
                m[i, col:] -= factor * m[i_star, col:]
    return rank


def annihilating_pair_exists(support: SupportSet, spectral_support: SupportSet) -> bool:
    """Is there a nonzero x with supp(x) in S and supp(dft(x)) in S'?

    Decided by the rank of the partial Fourier block that maps coefficients
    on S to spectrum values off S': the pair annihilates exactly when that
    block has a nontrivial kernel.
    """
    if len(support) == 0 or len(spectral_support) == 0:
        raise ValueError("both supports must be nonempty")
    if support.n != spectral_support.n:
        raise ValueError("supports live on different groups")
    n = support.n
    off = spectral_support.complement().to_array()
    if off.size == 0:
        return True
    cols = support.to_array()
    block = unitary_dft_matrix(n)[np.ix_(off, cols)]
    return rank_scaled_pivoting(block) < len(support)


def mc_annihilating_probability(n: int, size_s: int, size_sp: int, trials: int,
                                seed: int, intervals: bool = False) -> float:
    """Empirical probability that random supports of the given sizes admit
    an annihilating pair.  With ``intervals=True`` both supports are drawn
    as cyclic intervals at random offsets instead of uniform subsets.
    """
    if size_s > n or size_sp > n:
        raise ValueError("support sizes cannot exceed n")
    hits = 0
    for trial in range(trials):
        stream = stream_for_trial(seed, trial)
        if intervals:
            a = stream.below(n)
            b = stream.below(n)
            s = SupportSet.from_iterable(n, [(a + i) % n for i in range(size_s)])
            sp = SupportSet.from_iterable(n, [(b + i) % n for i in range(size_sp)])
        else:
            s = SupportSet.from_iterable(n, stream.choice(n, size_s).tolist())
            sp = SupportSet.from_iterable(n, stream.choice(n, size_sp).tolist())
        hits += annihilating_pair_exists(s, sp)
    return hits / trials
