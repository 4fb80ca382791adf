"""Command-line interface: JSON reports on stdout, optional CSV per trial.

Subcommands: recover, certify, uncertainty, dh, lacunary, band, mc-iv,
mc-recovery, mc-omega, failure-example.

Every report is a single JSON object with the fields ``version``,
``config``, ``results``, ``bounds`` and ``threshold_vacuous`` (schema
documented in the README).  Reports are byte-identical across repeated
runs with the same arguments and seed.  Exit codes: 0 success, 1
operational error, 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib.metadata import PackageNotFoundError, version as _pkg_version

import numpy as np

from . import backend
from .core import Signal, SupportSet, dft, l0_norm, l1_norm
from .certificates import (certified_recovery_trials, check_kernel_flatness,
                           make_kernel, parseval_min_samples)
from .harness import (ExperimentConfig, bernoulli_frequency_sample,
                      mc_kernel_flatness_probability, mc_recovery_probability,
                      omega_concentration_check)
from .lacunary import (CannotSatisfyMassCondition, LacunaryParams, ParamsViolate29,
                       band_recovery_experiment, construct_failure_example,
                       majorant_chain, recovery_threshold_conditions)
from .rng import SplitMix64
from .solver import (EmptyConstraint, NonConvergence, exhaustive_bp_oracle,
                     minimal_extension_recover, split_time_frequency_l0,
                     split_time_frequency_l1)
from .uncertainty import comb_witness, max_zero_run, sum_bound, verify_support_product

try:
    VERSION = _pkg_version("znsparse")
except PackageNotFoundError:  # pragma: no cover - package not installed
    VERSION = "0.0.0"

CSV_COLUMNS = ["trial_index", "seed", "omega_size", "success", "objective", "residual"]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _emit(command, config, results, bounds=None, threshold_vacuous=False):
    report = {
        "version": VERSION,
        "config": _jsonable({"command": command, "backend": backend.current(), **config}),
        "results": _jsonable(results),
        "bounds": _jsonable(bounds or {}),
        "threshold_vacuous": bool(threshold_vacuous),
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _write_csv(path, details):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in details:
            writer.writerow([row.get(col, "") for col in CSV_COLUMNS])


def _complex_list(values):
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _load_signal_file(path, n):
    with open(path) as fh:
        raw = json.load(fh)
    values = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
              for v in raw]
    if len(values) != n:
        raise ValueError(f"signal file has {len(values)} entries, expected {n}")
    return Signal(values)


def _load_samples_file(path):
    with open(path) as fh:
        raw = json.load(fh)
    return {int(e["omega"]): complex(float(e["re"]), float(e["im"])) for e in raw}


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok != ""]


def _apply_config_file(argv):
    """Merge key=value lines from --config as leading (overridable) flags."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise SystemExit(2)
    path = argv[idx + 1]
    rest = argv[:idx] + argv[idx + 2:]
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            flag = "--" + key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    injected.append(flag)
            else:
                injected.extend([flag, value])
    # subcommand first, config-derived flags next, explicit flags last (win)
    return rest[:1] + injected + rest[1:]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="znsparse",
        description="sparse spectral recovery on Z_N by l1-minimal extension",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="l1-minimal extension from sampled frequencies")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples-file", required=True)
    p.add_argument("--omega", type=_int_list, default=None,
                   help="comma list; cross-checked against the samples file")
    p.add_argument("--truth-file", default=None)
    p.add_argument("--oracle", action="store_true",
                   help="also run the small-N enumeration oracle")

    p = sub.add_parser("certify", help="kernel flatness check and certified recovery trials")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--omega", type=_int_list, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("uncertainty", help="support-size uncertainty diagnostics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--comb", action="store_true")
    p.add_argument("--signal-file", default=None)

    p = sub.add_parser("dh", help="mixed time/frequency decompositions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--signal-file", required=True)
    p.add_argument("--l0", action="store_true", help="exhaustive minimal-support search")

    p = sub.add_parser("lacunary", help="Gaussian majorant chain and threshold conditions")
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--a", type=float, default=None)

    p = sub.add_parser("band", help="band-sampling recovery experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--band-size", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--support-size", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path, one row per trial")

    p = sub.add_parser("mc-iv", help="Monte Carlo kernel-flatness probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--omega-size", type=int, default=None)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-phases", type=int, default=8)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("mc-recovery", help="Monte Carlo exact-recovery probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--omega", dest="omega_size", type=int, default=None,
                   help="fixed sampled-set size")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--m-exponent", type=float, default=1.0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("mc-omega", help="sampled-set size concentration check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("failure-example", help="certified band-sampling failure instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--band", type=_int_list, default=None)
    p.add_argument("--band-start", type=int, default=None)
    p.add_argument("--band-size", type=int, default=None)
    p.add_argument("--keep", type=int, default=1)
    p.add_argument("--check", action="store_true", help="run the solver cross-check")

    return parser


def _cmd_recover(args):
    samples = _load_samples_file(args.samples_file)
    if args.omega is not None and sorted(args.omega) != sorted(samples):
        raise ValueError("--omega disagrees with the samples file")
    truth = _load_signal_file(args.truth_file, args.n) if args.truth_file else None
    report = minimal_extension_recover(samples, args.n, truth=truth)
    results = {
        "objective": report.objective,
        "feasibility_residual": report.feasibility_residual,
        "iterations": report.iterations,
        "converged": report.converged,
        "recovered": report.recovered,
        "minimizer": _complex_list(report.minimizer.values),
    }
    if args.oracle:
        obj, minimizers = exhaustive_bp_oracle(samples, sorted(samples), args.n)
        results["oracle_objective"] = obj
        results["oracle_minimizer_count"] = len(minimizers)
    _emit("recover", {"n": args.n, "omega": sorted(samples)}, results)


def _cmd_certify(args):
    n = args.n
    if (args.omega is None) == (args.tau is None):
        raise ValueError("give exactly one of --omega / --tau")
    if args.omega is not None:
        omega = SupportSet.from_iterable(n, args.omega)
    else:
        omega = bernoulli_frequency_sample(args.tau, n, SplitMix64(args.seed))
    kernel = make_kernel(omega, n)
    holds, margin = check_kernel_flatness(kernel, args.t)
    results = {
        "omega_size": len(omega),
        "flatness_holds": holds,
        "flatness_margin": margin,
    }
    if args.trials and holds:
        rep = certified_recovery_trials(kernel, args.t, args.trials, args.seed)
        results["trials"] = rep.trials
        results["certificate_ok"] = rep.certificate_ok
        results["recovered"] = rep.recovered
        results["all_ok"] = rep.all_ok
    bounds = {"parseval_min_samples": parseval_min_samples(args.t, n)}
    _emit("certify", {"n": n, "t": args.t, "omega": list(omega.members),
                      "tau": args.tau, "seed": args.seed, "trials": args.trials},
          results, bounds)


def _cmd_uncertainty(args):
    n = args.n
    if args.comb == (args.signal_file is not None):
        raise ValueError("give exactly one of --comb / --signal-file")
    x = comb_witness(n).signal if args.comb else _load_signal_file(args.signal_file, n)
    product, p_holds = verify_support_product(x)
    total, s_holds = sum_bound(x)
    results = {
        "l0_time": l0_norm(x),
        "l0_freq": l0_norm(dft(x)),
        "product": product,
        "product_holds": p_holds,
        "equality": product == n,
        "sum": total,
        "sum_holds": s_holds,
        "max_zero_run": max_zero_run(dft(x)),
    }
    _emit("uncertainty", {"n": n, "comb": args.comb}, results)


def _cmd_dh(args):
    x = _load_signal_file(args.signal_file, args.n)
    if args.l0:
        best_total, decomps = split_time_frequency_l0(x)
        results = {
            "best_total": best_total,
            "decomposition_count": len(decomps),
            "decompositions": [
                {"y": _complex_list(y.values), "z": _complex_list(z.values)}
                for y, z in decomps
            ],
        }
    else:
        y, z, objective = split_time_frequency_l1(x)
        results = {
            "objective": objective,
            "y": _complex_list(y.values),
            "z": _complex_list(z.values),
            "split_l0_total": l0_norm(y) + l0_norm(dft(z)),
        }
    _emit("dh", {"n": args.n, "l0": args.l0}, results)


def _cmd_lacunary(args):
    params = LacunaryParams(nu=args.nu, d=args.d, r=args.r, a=args.a)
    conditions = recovery_threshold_conditions(params)
    results = {
        "a": params.a,
        "step_ok": conditions.step_ok,
        "radius_ok": conditions.radius_ok,
        "radius_ok_nd": conditions.radius_ok_nd,
        "radius_ok_nd_alt": conditions.radius_ok_nd_alt,
        "step_ok_nd": conditions.step_ok_nd,
    }
    bounds = {}
    try:
        chain = majorant_chain(params)
        bounds = {
            "A_max": chain.A_max,
            "B_max": chain.B_max,
            "tail": chain.tail,
            "chain_holds": chain.chain_holds,
            "radius_condition": chain.radius_condition,
            "step_condition": chain.step_condition,
        }
    except ParamsViolate29 as exc:
        results["majorant_chain_error"] = str(exc)
    _emit("lacunary", {"nu": args.nu, "d": args.d, "r": args.r}, results, bounds)


def _cmd_band(args):
    rep = band_recovery_experiment(args.n, args.d, args.band_size, args.trials,
                                   args.seed, support_size=args.support_size)
    if args.out:
        _write_csv(args.out, rep.details)
    results = {
        "successes": rep.successes,
        "trials": rep.trials,
        "success_rate": rep.successes / rep.trials,
    }
    _emit("band", {"n": args.n, "d": args.d, "band_size": args.band_size,
                   "trials": args.trials, "seed": args.seed,
                   "support_size": args.support_size}, results)


def _mc_report_sections(mc):
    results = {
        "event": mc.event,
        "success_count": mc.success_count,
        "trials": mc.trials,
        "empirical_p": mc.empirical_p,
        "per_trial_seeds": mc.per_trial_seeds,
    }
    bounds = {"theoretical_bound": mc.theoretical_bound,
              "bound_satisfied": mc.bound_satisfied, **mc.extras}
    return results, bounds


def _cmd_mc_iv(args):
    cfg = ExperimentConfig(n=args.n, t_sparsity=args.t, trials=args.trials,
                           master_seed=args.seed, tau=args.tau,
                           omega_size=args.omega_size, delta=args.delta,
                           n_phases=args.n_phases)
    mc = mc_kernel_flatness_probability(cfg)
    if args.out:
        _write_csv(args.out, mc.details)
    results, bounds = _mc_report_sections(mc)
    _emit("mc-iv", {"n": args.n, "t": args.t, "tau": args.tau,
                    "omega_size": args.omega_size, "trials": args.trials,
                    "seed": args.seed, "n_phases": args.n_phases,
                    "delta": args.delta},
          results, bounds, threshold_vacuous=mc.extras["threshold_vacuous"])


def _cmd_mc_recovery(args):
    cfg = ExperimentConfig(n=args.n, t_sparsity=args.t, trials=args.trials,
                           master_seed=args.seed, tau=args.tau,
                           omega_size=args.omega_size, delta=args.delta,
                           m_exponent=args.m_exponent)
    mc = mc_recovery_probability(cfg)
    if args.out:
        _write_csv(args.out, mc.details)
    results, bounds = _mc_report_sections(mc)
    _emit("mc-recovery", {"n": args.n, "t": args.t, "tau": args.tau,
                          "omega_size": args.omega_size, "trials": args.trials,
                          "seed": args.seed, "delta": args.delta,
                          "m_exponent": args.m_exponent},
          results, bounds, threshold_vacuous=mc.extras["threshold_vacuous"])


def _cmd_mc_omega(args):
    mc = omega_concentration_check(args.tau, args.n, args.trials, args.lam, args.seed)
    if args.out:
        _write_csv(args.out, mc.details)
    results, bounds = _mc_report_sections(mc)
    _emit("mc-omega", {"n": args.n, "tau": args.tau, "lam": args.lam,
                       "trials": args.trials, "seed": args.seed},
          results, bounds)


def _cmd_failure_example(args):
    n = args.n
    if args.band is not None:
        band = args.band
    elif args.band_start is not None and args.band_size is not None:
        band = [(args.band_start + i) % n for i in range(args.band_size)]
    else:
        raise ValueError("give --band or both --band-start and --band-size")
    ex = construct_failure_example(band, n, args.keep)
    band_values = dft(ex.x).values[ex.band.to_array()]
    comp_band_values = dft(ex.competitor).values[ex.band.to_array()]
    results = {
        "keep": ex.keep,
        "carrier_frequency": ex.carrier_frequency,
        "x_l1": l1_norm(ex.x),
        "competitor_l1": l1_norm(ex.competitor),
        "band_agreement": float(np.max(np.abs(band_values - comp_band_values))),
        "x": _complex_list(ex.x.values),
        "competitor": _complex_list(ex.competitor.values),
    }
    if args.check:
        om = ex.band.to_array()
        samples = dict(zip(om.tolist(), dft(ex.x).values[om].tolist()))
        rep = minimal_extension_recover(samples, n, truth=ex.x)
        results["solver_objective"] = rep.objective
        results["solver_recovered"] = rep.recovered
    _emit("failure-example", {"n": n, "band": sorted(int(b) for b in band),
                              "keep": args.keep, "check": args.check}, results)


_COMMANDS = {
    "recover": _cmd_recover,
    "certify": _cmd_certify,
    "uncertainty": _cmd_uncertainty,
    "dh": _cmd_dh,
    "lacunary": _cmd_lacunary,
    "band": _cmd_band,
    "mc-iv": _cmd_mc_iv,
    "mc-recovery": _cmd_mc_recovery,
    "mc-omega": _cmd_mc_omega,
    "failure-example": _cmd_failure_example,
}

_OPERATIONAL_ERRORS = (NonConvergence, EmptyConstraint, ParamsViolate29,
                       CannotSatisfyMassCondition, ValueError, OSError,
                       KeyError, json.JSONDecodeError)


def run_cli(argv) -> int:
    try:
        argv = _apply_config_file(list(argv))
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _COMMANDS[args.command](args)
    except _OPERATIONAL_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
