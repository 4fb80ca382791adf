"""l1-minimal extension with partial-Fourier equality constraints.

The recovery rule: among all signals y whose transform agrees with the
given samples on the sampled frequency set, return one of minimal l1 norm.
The solver is a Douglas-Rachford splitting that alternates the complex
soft-threshold proximal map of the l1 norm with the exact projection onto
the affine constraint set (exact because the rows of the unitary partial
Fourier map are orthonormal); see _kernels_numpy.py for the iteration.

Ties between l1 minimizers are possible; the solver deterministically
returns one minimizer and makes no uniqueness claim.  Non-uniqueness is
detected through :func:`exhaustive_bp_oracle`, the independent small-N
enumeration oracle.

Also here: the mixed time/frequency decompositions, minimising
``||y||_1 + ||zhat||_1`` over splits x = y + z (the l1 relaxation of the
ideal-atomic-decomposition problem of Donoho & Huo), plus their exhaustive
l0 counterpart for tiny N.

Solver runs are pure functions of (inputs, config); independent runs may
execute in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import backend
from .core import Signal, SupportSet, ZeroTolerance, DEFAULT_TOL, l1_norm, unitary_dft_matrix


class NonConvergence(Exception):
    """Iteration budget exhausted with the constraint residual above tolerance."""


class EmptyConstraint(Exception):
    """No sampled frequencies were supplied."""


class InstanceTooLarge(Exception):
    """Exhaustive enumeration requested beyond its size limit."""


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 50000
    eps_feasibility: float = 1e-9
    eps_step: float = 1e-10
    relaxation: float = 1.0
    recovery_rel_tol: float = 1e-6

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        for name in ("eps_feasibility", "eps_step", "recovery_rel_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.relaxation < 2.0:
            raise ValueError("relaxation must lie in (0, 2)")


DEFAULT_CONFIG = SolverConfig()


@dataclass
class RecoveryReport:
    minimizer: Signal
    objective: float
    feasibility_residual: float
    iterations: int
    converged: bool
    recovered: Optional[bool] = None


def _normalize_samples(samples):
    if isinstance(samples, dict):
        items = sorted((int(k), complex(v)) for k, v in samples.items())
    else:
        items = sorted((int(k), complex(v)) for k, v in samples)
    if len(set(k for k, _ in items)) != len(items):
        raise ValueError("duplicate frequencies in samples")
    omegas = np.array([k for k, _ in items], dtype=np.int64)
    values = np.array([v for _, v in items], dtype=np.complex128)
    if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
        raise ValueError("sample values must be finite")
    return omegas, values


def partial_fourier_matrix(n: int, omegas) -> np.ndarray:
    """Rows of the unitary DFT matrix at the given frequencies."""
    om = np.asarray(omegas, dtype=np.int64)
    if om.size and (om.min() < 0 or om.max() >= n):
        raise ValueError("frequencies must lie in [0, n)")
    return np.ascontiguousarray(unitary_dft_matrix(n)[om, :])


def _shrink_scale(aHb) -> float:
    m = float(np.max(np.abs(aHb))) if aHb.size else 0.0
    return 0.1 * m if m > 0 else 1.0


def minimal_extension_recover(samples, n: int, cfg: SolverConfig = DEFAULT_CONFIG,
                              truth=None) -> RecoveryReport:
    """Recover a signal on Z_n from its transform values on a sampled set.

    Parameters
    ----------
    samples : dict or iterable of (frequency, value) pairs
    n : group order
    cfg : SolverConfig
    truth : optional Signal/array; when given, the report's ``recovered``
        flag is set to (relative l2 error <= cfg.recovery_rel_tol).

    Raises
    ------
    EmptyConstraint : when no samples are given.
    NonConvergence : iteration budget hit with the l2 constraint residual
        still above cfg.eps_feasibility.
    """
    omegas, b = _normalize_samples(samples)
    if omegas.size == 0:
        raise EmptyConstraint("the sampled frequency set is empty")
    A = partial_fourier_matrix(n, omegas)
    mu = _shrink_scale(A.conj().T @ b)
    eps_step_abs = cfg.eps_step * max(1.0, float(np.linalg.norm(b)))
    w, iterations, gap = backend.kernels().dr_partial_fourier(
        A, b, mu, cfg.relaxation, cfg.max_iter, eps_step_abs
    )
    residual = float(np.linalg.norm(A @ w - b))
    converged = gap <= eps_step_abs and residual <= cfg.eps_feasibility
    if not converged and residual > cfg.eps_feasibility:
        raise NonConvergence(
            f"residual {residual:.3e} > {cfg.eps_feasibility:.3e} "
            f"after {iterations} iterations"
        )
    minimizer = Signal(w)
    report = RecoveryReport(
        minimizer=minimizer,
        objective=l1_norm(minimizer),
        feasibility_residual=residual,
        iterations=iterations,
        converged=converged,
    )
    if truth is not None:
        t = truth.values if isinstance(truth, Signal) else np.asarray(truth, dtype=complex)
        denom = max(float(np.linalg.norm(t)), 1e-300)
        report.recovered = bool(np.linalg.norm(w - t) / denom <= cfg.recovery_rel_tol)
    return report


def exhaustive_bp_oracle(samples, omega, n: int, tol: float = 1e-9):
    """Ground-truth l1 minimum by support enumeration, for real instances.

    Enumerates all supports of size <= |omega|, solves the stacked real
    least-squares system on each, keeps the exactly feasible candidates and
    returns ``(objective, minimizers)`` with every minimizer whose l1 value
    is within 1e-9 of the optimum (duplicates removed).

    The search is over real-valued candidates, so optimal vertices carry at
    most |omega| nonzeros only when the instance is genuinely real: a real
    generating signal *and* a conjugate-symmetric sampled set (then the
    complex problem solved by the splitting solver has the same optimum).
    """
    if n > 16:
        raise InstanceTooLarge("oracle enumeration is limited to n <= 16")
    omegas, b = _normalize_samples(samples)
    om_set = SupportSet.from_iterable(n, omega) if not isinstance(omega, SupportSet) else omega
    if tuple(omegas.tolist()) != om_set.members:
        raise ValueError("samples and omega disagree")
    if omegas.size == 0:
        raise EmptyConstraint("the sampled frequency set is empty")
    A = partial_fourier_matrix(n, omegas)
    Ar = np.vstack([A.real, A.imag])
    br = np.concatenate([b.real, b.imag])
    scale = max(1.0, float(np.linalg.norm(br)))
    m = omegas.size
    best = np.inf
    candidates = []
    for k in range(0, min(n, m) + 1):
        for support in combinations(range(n), k):
            if k == 0:
                coeffs = np.zeros(0)
                resid = float(np.linalg.norm(br))
            else:
                M = Ar[:, list(support)]
                coeffs, *_ = np.linalg.lstsq(M, br, rcond=None)
                resid = float(np.linalg.norm(M @ coeffs - br))
            if resid <= tol * scale:
                obj = float(np.sum(np.abs(coeffs)))
                candidates.append((obj, support, coeffs))
                best = min(best, obj)
    if not candidates:
        raise ValueError("no real-feasible candidate found; instance is not real")
    minimizers = []
    for obj, support, coeffs in candidates:
        if obj <= best + 1e-9:
            vec = np.zeros(n, dtype=np.complex128)
            vec[list(support)] = coeffs
            if not any(np.max(np.abs(vec - kept.values)) <= 1e-9 for kept in minimizers):
                minimizers.append(Signal(vec))
    return best, minimizers


def split_time_frequency_l1(x, cfg: SolverConfig = DEFAULT_CONFIG):
    """Minimise ||y||_1 + ||zhat||_1 over decompositions x = y + z.

    Solved by the same splitting on the pair (y, zhat) with the linear
    constraint y + idft(zhat) = x.  Returns (y, z, objective) with
    objective = ||y||_1 + ||zhat||_1.
    """
    xs = x if isinstance(x, Signal) else Signal(x)
    n = xs.n
    W = np.ascontiguousarray(unitary_dft_matrix(n))
    xhat = W @ xs.values
    peak = max(float(np.max(np.abs(xs.values))), float(np.max(np.abs(xhat))))
    mu = 0.1 * peak if peak > 0 else 1.0
    eps_step_abs = cfg.eps_step * max(1.0, float(np.linalg.norm(xs.values)))
    wy, wv, iterations, gap = backend.kernels().dr_time_frequency_split(
        W, xs.values, mu, cfg.relaxation, cfg.max_iter, eps_step_abs
    )
    z = W.conj().T @ wv
    residual = float(np.linalg.norm(wy + z - xs.values))
    if residual > cfg.eps_feasibility * max(1.0, float(np.linalg.norm(xs.values))):
        raise NonConvergence(
            f"split residual {residual:.3e} after {iterations} iterations"
        )
    objective = float(np.sum(np.abs(wy)) + np.sum(np.abs(wv)))
    return Signal(wy), Signal(z), objective


def split_time_frequency_l0(x, tol: ZeroTolerance = DEFAULT_TOL, max_total=None):
    """Exhaustive minimal-support decomposition x = y + z.

    Searches pairs of supports (time side for y, frequency side for zhat)
    by increasing total size; feasibility of a support pair is decided by
    least squares on the stacked columns.  Returns (best_total, [(y, z)])
    with every optimal decomposition.  Exponential cost; n <= 16 only.
    """
    xs = x if isinstance(x, Signal) else Signal(x)
    n = xs.n
    if n > 16:
        raise InstanceTooLarge("l0 split enumeration is limited to n <= 16")
    W = unitary_dft_matrix(n)
    WH = W.conj().T
    xnorm = max(1.0, float(np.linalg.norm(xs.values)))
    feas_tol = 1e-9 * xnorm
    limit = 2 * n if max_total is None else int(max_total)
    for total in range(0, limit + 1):
        found = []
        for ky in range(0, min(n, total) + 1):
            kz = total - ky
            if kz > n:
                continue
            for sy in combinations(range(n), ky):
                for sz in combinations(range(n), kz):
                    cols = []
                    if ky:
                        eye = np.zeros((n, ky), dtype=np.complex128)
                        eye[list(sy), range(ky)] = 1.0
                        cols.append(eye)
                    if kz:
                        cols.append(WH[:, list(sz)])
                    if cols:
                        M = np.hstack(cols)
                        c, *_ = np.linalg.lstsq(M, xs.values, rcond=None)
                        resid = float(np.linalg.norm(M @ c - xs.values))
                    else:
                        c = np.zeros(0, dtype=np.complex128)
                        resid = float(np.linalg.norm(xs.values))
                    if resid <= feas_tol:
                        y = np.zeros(n, dtype=np.complex128)
                        if ky:
                            y[list(sy)] = c[:ky]
                        v = np.zeros(n, dtype=np.complex128)
                        if kz:
                            v[list(sz)] = c[ky:]
                        z = WH @ v
                        if not any(
                            np.max(np.abs(y - fy.values)) <= 1e-9
                            and np.max(np.abs(z - fz.values)) <= 1e-9
                            for fy, fz in found
                        ):
                            found.append((Signal(y), Signal(z)))
        if found:
            return total, found
    raise ValueError(f"no decomposition with total support <= {limit}")
