"""Sparse spectral recovery on Z_N by l1-minimal extension.

Library layout:

* :mod:`znsparse.core` -- signals, spectra, the unitary transform, norms
  and cyclic support geometry;
* :mod:`znsparse.solver` -- the Douglas-Rachford l1 solver, the small-N
  enumeration oracle and the mixed time/frequency decompositions;
* :mod:`znsparse.certificates` -- idempotent kernels, dual certificates
  and the flatness-implies-recovery chain;
* :mod:`znsparse.uncertainty` -- support-size uncertainty principles and
  annihilating pairs;
* :mod:`znsparse.lacunary` -- periodized Gaussian majorants, step/radius
  thresholds, band recovery and the band-sampling failure constructor;
* :mod:`znsparse.harness` -- seeded Monte Carlo experiments;
* :mod:`znsparse.cli` -- the ``znsparse`` command.

Hot solver kernels are numba-compiled by default; set
``ZNSPARSE_BACKEND=numpy`` for the pure-numpy fallback.
"""

from .core import (Signal, Spectrum, SupportSet, ZeroTolerance, a_norm,
                   cyclic_step, dft, idft, l0_norm, l1_norm)
from .solver import (EmptyConstraint, InstanceTooLarge, NonConvergence,
                     RecoveryReport, SolverConfig, exhaustive_bp_oracle,
                     minimal_extension_recover, split_time_frequency_l0,
                     split_time_frequency_l1)
from .certificates import (DualCertificate, IdempotentKernel, SignPattern,
                           build_certificate, certified_recovery_trials,
                           check_certificate, check_kernel_flatness,
                           make_kernel, parseval_min_samples)
from .uncertainty import (CombWitness, ZeroSignal, annihilating_pair_exists,
                          comb_witness, max_zero_run, mc_annihilating_probability,
                          sum_bound, verify_support_product)
from .lacunary import (BoundReport, CannotSatisfyMassCondition, FailureExample,
                       LacunaryParams, ParamsViolate29, TheoremConditions,
                       band_recovery_experiment, construct_failure_example,
                       exact_interference_sums, majorant_chain,
                       recovery_threshold_conditions, theta_kernel)
from .harness import (ExperimentConfig, McReport, bernoulli_frequency_sample,
                      exact_kernel_flatness_probability,
                      kernel_flatness_failure_bound,
                      mc_kernel_flatness_probability, mc_recovery_probability,
                      omega_concentration_check)

__all__ = [name for name in dir() if not name.startswith("_")]
