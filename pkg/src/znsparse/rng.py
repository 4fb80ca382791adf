"""Deterministic 64-bit random streams for reproducible experiments.

The generator is splitmix64: a counter-based stream whose i-th output is a
fixed avalanche of ``seed + (i+1) * GOLDEN`` (all arithmetic mod 2**64).
Because outputs depend only on (seed, position), streams can be re-created,
split per trial, and vectorised without changing the draw sequence.

Per-trial streams are derived with :func:`derive_seed`, so a Monte Carlo run
is reproducible regardless of trial execution order:

    seed_i = mix64(mix64(master) + (i + 1) * GOLDEN)

Reference outputs (first five words, verified against an independent C
implementation of splitmix64):

    seed 0                 -> 16294208416658607535, 7960286522194355700,
                              487617019471545679, 17909611376780542444,
                              1961750202426094747
    seed 42                -> 13679457532755275413, 2949826092126892291,
                              5139283748462763858, 6349198060258255764,
                              701532786141963250
    seed 0x123456789ABCDEF -> 1547611027431991965, 15380727978956804243,
                              3427440727199435966, 11733030637320693740,
                              90156556503711752
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

#: Identifier of the seed-derivation rule, quoted in experiment reports.
SEED_RULE = "splitmix64:mix64(mix64(master)+(i+1)*golden)"


def mix64(z: int) -> int:
    """The splitmix64 finalizer (avalanche) on a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Derive the seed of sub-stream ``index`` from a master seed."""
    return mix64((mix64(master_seed) + ((index + 1) * GOLDEN)) & MASK64)


class SplitMix64:
    """A sequential splitmix64 stream with vectorised sampling helpers.

    All helpers consume stream words in a documented, fixed order, so a
    given (seed, call sequence) always produces the same values.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._pos = 0  # number of words consumed so far

    def u64(self) -> int:
        self._pos += 1
        return mix64((self.seed + self._pos * GOLDEN) & MASK64)

    def u64_array(self, count: int) -> np.ndarray:
        idx = np.arange(self._pos + 1, self._pos + count + 1, dtype=np.uint64)
        self._pos += count
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + idx * np.uint64(GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            return z ^ (z >> np.uint64(31))

    def random(self) -> float:
        """Uniform float64 in [0, 1) from the top 53 bits of one word."""
        return (self.u64() >> 11) * 2.0 ** -53

    def random_array(self, count: int) -> np.ndarray:
        return (self.u64_array(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.u64()
            if u < limit:
                return u % n

    def choice(self, n: int, k: int) -> np.ndarray:
        """k distinct integers from [0, n), sorted (partial Fisher-Yates)."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        pool = np.arange(n)
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return np.sort(pool[:k])

    def bernoulli_mask(self, tau: float, n: int) -> np.ndarray:
        """Boolean mask of n independent Bernoulli(tau) draws."""
        if not 0.0 <= tau <= 1.0:
            raise ValueError("tau must lie in [0, 1]")
        return self.random_array(n) < tau

    def unit_phases(self, k: int) -> np.ndarray:
        """k complex numbers of modulus 1 with uniform phases."""
        return np.exp(2j * np.pi * self.random_array(k))

    def uniform(self, lo: float, hi: float, k: int) -> np.ndarray:
        return lo + (hi - lo) * self.random_array(k)


def stream_for_trial(master_seed: int, trial_index: int) -> SplitMix64:
    """The per-trial stream used by every Monte Carlo loop in this package."""
    return SplitMix64(derive_seed(master_seed, trial_index))
