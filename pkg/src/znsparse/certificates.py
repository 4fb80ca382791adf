"""Idempotent kernels and dual certificates for exact l1 recovery.

The chain implemented here, from strongest hypothesis to the recovery
guarantee:

* kernel flatness: the idempotent kernel K(t) = sum_{w in Omega} e(wt/N)
  of a sampled set has all off-peak values strictly below K(0)/(2T);
* the interpolating polynomial P built from any unit-modulus sign pattern
  on a T-point support then stays within 1/2 of the pattern on the support
  and below 1/2 off it, while its spectrum is confined to Omega;
* such a certificate forces every T-sparse signal to be the unique
  l1-minimal extension of its samples on Omega.

``certified_recovery_trials`` exercises the whole chain empirically, and
``parseval_min_samples`` gives the Parseval obstruction: flatness at
sparsity T needs |Omega| >= 4 T^2 N / (N + 4 T^2 - 1).

Pure functions over immutable values; trial loops may run in parallel with
per-trial derived streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Signal, SupportSet, unitary_dft_matrix
from .rng import SplitMix64, derive_seed
from .solver import SolverConfig, DEFAULT_CONFIG, minimal_extension_recover


@dataclass(frozen=True, eq=False)
class IdempotentKernel:
    """K(t) = sum over the sampled frequencies of e(w t / N); K(0) = |Omega|."""

    n: int
    omega: SupportSet
    values: np.ndarray


@dataclass(frozen=True)
class SignPattern:
    """Unit-modulus values lambda_t on a time support."""

    support: SupportSet
    lambdas: dict

    def __post_init__(self):
        if set(self.lambdas) != set(self.support.members):
            raise ValueError("lambdas must be keyed exactly by the support")
        for v in self.lambdas.values():
            if abs(abs(complex(v)) - 1.0) > 1e-12:
                raise ValueError("sign pattern values must have modulus 1")


@dataclass(frozen=True, eq=False)
class DualCertificate:
    """P(t) = sum_{t' in S} lambda_{t'} K(t - t') / K(0); spectrum in Omega."""

    values: np.ndarray
    built_from: tuple = field(repr=False)


def make_kernel(omega, n: int) -> IdempotentKernel:
    """Evaluate the idempotent kernel of a sampled set by direct summation."""
    om = omega if isinstance(omega, SupportSet) else SupportSet.from_iterable(n, omega)
    if len(om) == 0:
        raise ValueError("the sampled set must be nonempty")
    # rows of the unitary table are e(-wt/N)/sqrt(N); conjugate and rescale
    chars = unitary_dft_matrix(n)[om.to_array(), :].conj() * np.sqrt(n)
    values = chars.sum(axis=0)
    values.flags.writeable = False
    return IdempotentKernel(n=n, omega=om, values=values)


def check_kernel_flatness(kernel: IdempotentKernel, sparsity: int):
    """Strict off-peak bound max_{t!=0} |K(t)| < K(0) / (2 T).

    Returns (holds, margin) with margin = K(0)/(2T) - max_{t!=0}|K(t)|;
    a tie at equality counts as failure (margin 0).
    """
    if sparsity < 1:
        raise ValueError("sparsity must be >= 1")
    k0 = float(kernel.values[0].real)
    off_peak = float(np.max(np.abs(kernel.values[1:]))) if kernel.n > 1 else 0.0
    margin = k0 / (2.0 * sparsity) - off_peak
    return bool(margin > 0.0), float(margin)


def build_certificate(pattern: SignPattern, kernel: IdempotentKernel) -> DualCertificate:
    """Interpolating polynomial with spectrum confined to the sampled set."""
    n = kernel.n
    if pattern.support.n != n:
        raise ValueError("sign pattern and kernel live on different groups")
    p = np.zeros(n, dtype=np.complex128)
    k0 = kernel.values[0].real
    for t in pattern.support:
        p += pattern.lambdas[t] * np.roll(kernel.values, t)
    if len(pattern.support):
        p /= k0
    p.flags.writeable = False
    return DualCertificate(values=p, built_from=(pattern, kernel))


def check_certificate(cert: DualCertificate, pattern: SignPattern):
    """Strict interpolation check: |P - lambda| < 1/2 on the support and
    |P| < 1/2 off it.  Returns (holds, worst_on_support, worst_off_support).
    """
    p = cert.values
    n = p.size
    if pattern.support.n != n:
        raise ValueError("pattern and certificate live on different groups")
    on_idx = pattern.support.to_array()
    off_mask = np.ones(n, dtype=bool)
    off_mask[on_idx] = False
    if on_idx.size:
        lam = np.array([pattern.lambdas[t] for t in pattern.support], dtype=complex)
        worst_on = float(np.max(np.abs(p[on_idx] - lam)))
    else:
        worst_on = 0.0
    worst_off = float(np.max(np.abs(p[off_mask]))) if off_mask.any() else 0.0
    return worst_on < 0.5 and worst_off < 0.5, worst_on, worst_off


def parseval_min_samples(sparsity: int, n: int) -> float:
    """Lower bound on |Omega| forced by kernel flatness at a given sparsity.

    From Parseval, N |Omega| = sum_t |K(t)|^2, so flatness implies
    |Omega| >= 4 T^2 N / (N + 4 T^2 - 1); as N grows the bound tends to
    4 T^2, which is why the T^2 in the flatness route cannot be improved.
    """
    if sparsity < 1 or n < 1:
        raise ValueError("sparsity and n must be >= 1")
    t2 = 4.0 * sparsity * sparsity
    return t2 * n / (n + t2 - 1.0)


@dataclass
class ImplicationReport:
    trials: int
    certificate_ok: int
    recovered: int
    all_ok: bool
    failures: list


def certified_recovery_trials(kernel: IdempotentKernel, sparsity: int, trials: int,
                              rng_seed: int, cfg: SolverConfig = DEFAULT_CONFIG) -> ImplicationReport:
    """Empirical verification that a flat kernel forces exact recovery.

    Requires the flatness check to hold.  For each trial, plants a random
    signal on a random support of the given size (unit-modulus phases,
    magnitudes in [1/2, 1]), verifies the constructed certificate and runs
    the solver on the samples restricted to the kernel's frequency set.
    Any failing trial is a counterexample to the implication and is listed.
    """
    holds, margin = check_kernel_flatness(kernel, sparsity)
    if not holds:
        raise ValueError(f"kernel flatness fails (margin {margin:.3e})")
    n = kernel.n
    om = kernel.omega.to_array()
    A = np.ascontiguousarray(unitary_dft_matrix(n)[om, :])
    cert_ok = 0
    recovered = 0
    failures = []
    for trial in range(trials):
        stream = SplitMix64(derive_seed(rng_seed, trial))
        support = stream.choice(n, sparsity)
        phases = stream.unit_phases(sparsity)
        mags = stream.uniform(0.5, 1.0, sparsity)
        x = np.zeros(n, dtype=np.complex128)
        x[support] = mags * phases
        pattern = SignPattern(
            support=SupportSet.from_iterable(n, support.tolist()),
            lambdas={int(t): complex(ph) for t, ph in zip(support, phases)},
        )
        cert = build_certificate(pattern, kernel)
        ok_cert, worst_on, worst_off = check_certificate(cert, pattern)
        samples = dict(zip(om.tolist(), (A @ x).tolist()))
        report = minimal_extension_recover(samples, n, cfg, truth=Signal(x))
        cert_ok += ok_cert
        recovered += bool(report.recovered)
        if not (ok_cert and report.recovered):
            failures.append(
                {"trial": trial, "certificate_ok": bool(ok_cert),
                 "recovered": bool(report.recovered),
                 "worst_on": worst_on, "worst_off": worst_off}
            )
    return ImplicationReport(
        trials=trials,
        certificate_ok=cert_ok,
        recovered=recovered,
        all_ok=not failures,
        failures=failures,
    )
