"""Command-line entry point: ``scaledsa {scaling,samplesize,run,validate}``.

Errors go to stderr as one JSON line ``{"error": <kind>, "message": <text>}``.
Usage and configuration errors exit with status 2, other failures with 1.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from scaledsa.errors import ConfigError, ScaledSAError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _emit_error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.replace(" ", "").split(",") if v != ""])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1 or v != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scaledsa", description="Decision-scaled scenario approach toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scaling", help="identify scaling exponents of an algebraic constraint")
    sc.add_argument("constraint_file")
    sc.add_argument("--budget", type=_positive_int, default=10_000, help="sampling budget per check")
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--exhaustive", action="store_true", help="check every candidate")

    ss = sub.add_parser("samplesize", help="scenario sample size N")
    ss.add_argument("--epsilon", type=float, required=True)
    ss.add_argument("--beta", type=float, required=True)
    ss.add_argument("--n", type=_positive_int, required=True, help="decision dimension")
    g = ss.add_mutually_exclusive_group()
    g.add_argument("--s", type=float, default=None)
    g.add_argument("--s-alpha", type=float, default=None, help="give s**alpha instead of s")
    ss.add_argument("--alpha", type=float, default=None, help="tail index (needed with --s or --s-alpha)")

    rn = sub.add_parser("run", help="run an experiment config and write the CSVs")
    rn.add_argument("config")
    rn.add_argument("--trials-csv", default=None)
    rn.add_argument("--aggregate-csv", default=None)
    rn.add_argument("--workers", type=_positive_int, default=None)

    va = sub.add_parser("validate", help="Monte Carlo violation estimate for a decision")
    va.add_argument("--x", type=_vector, required=True, help="comma-separated decision vector")
    va.add_argument("--benchmark", required=True, choices=("portfolio", "short_column", "norm_opt"))
    va.add_argument("--mc", type=_positive_int, required=True)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--instance-seed", type=int, default=0)
    return p


def cmd_scaling(a) -> int:
    from scaledsa.algebra import identify_scaling
    from scaledsa.harness.specfile import load_constraint

    c, x_set, xi_set = load_constraint(a.constraint_file)
    ident = identify_scaling(c, x_set, xi_set, a.budget, a.seed, exhaustive=a.exhaustive)
    if ident:
        p = ident.profile
        print(f"gamma = {p.gamma:.12g}")
        print(f"rho = {p.rho:.12g}")
        print(f"J* = {list(p.active_terms)}")
        print(f"g* = {p.limit_constraint.to_string('y', 'w')}")
        if p.flags:
            print(f"flags = {', '.join(p.flags)}")
    else:
        print("NONE")
    for rec in ident.trail:
        print(f"  candidate {rec.describe()}")
    if a.exhaustive:
        print(f"passing = {[float(g) for g in ident.passing]}")
    return 0


def cmd_samplesize(a) -> int:
    from scaledsa.scenario import classical_sample_size, s_from_s_alpha, scaled_sample_size

    try:
        if a.s is None and a.s_alpha is None:
            print(classical_sample_size(a.epsilon, a.beta, a.n))
            return 0
        if a.alpha is None:
            raise _UsageError("samplesize: --alpha is required with --s or --s-alpha")
        s = a.s if a.s is not None else s_from_s_alpha(a.s_alpha, a.alpha)
        print(scaled_sample_size(a.epsilon, a.beta, a.n, s, a.alpha))
    except ValueError as exc:
        raise _UsageError(f"samplesize: {exc}") from None
    return 0


def cmd_run(a) -> int:
    from dataclasses import replace

    from scaledsa.harness.config import ExperimentConfig
    from scaledsa.validation import run_trials

    cfg = ExperimentConfig.load(a.config)
    if a.workers is not None:
        cfg = replace(cfg, workers=a.workers)
    out = cfg.output
    trials_csv = a.trials_csv or out.trials_csv
    agg_csv = a.aggregate_csv or out.aggregate_csv
    report = run_trials(cfg, progress=_progress if a.verbose else None)
    report.write_csv(trials_csv, agg_csv, out.record_timing)
    for c in report.cells:
        print(f"{c.benchmark} eps={c.epsilon:g} s={c.s:.6g} N={c.N}: optimal {c.optimal}/{c.trials}, "
              f"p_hat<=eps {c.below_epsilon}, median objective {c.objective_median:.6g}, "
              f"median p_hat {c.p_hat_median:.3g}, intractable {c.intractable}")
    print(f"wrote {trials_csv} and {agg_csv}")
    return 0


def _progress(rec) -> None:
    logging.getLogger("scaledsa").info("eps=%g s=%.4g trial=%d status=%s p_hat=%s",
                                       rec.epsilon, rec.s, rec.trial, rec.status, rec.p_hat)


def cmd_validate(a) -> int:
    from scaledsa.harness.benchmarks import make_instance
    from scaledsa.validation import estimate_violation

    inst = make_instance(a.benchmark, a.instance_seed, verify=False)
    if a.x.size != inst.n:
        raise _UsageError(f"validate: --x has {a.x.size} entries, {a.benchmark} needs {inst.n}")
    est = estimate_violation(a.x, inst.constraint, inst.distribution, a.mc, a.seed)
    print(f"p_hat={est.p_hat!r} violations={est.violations} mc_samples={est.mc_samples} "
          f"std_err={est.std_err!r} seed={est.seed}")
    return 0


COMMANDS = {"scaling": cmd_scaling, "samplesize": cmd_samplesize, "run": cmd_run, "validate": cmd_validate}


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
        if a.verbose:
            logging.basicConfig(level=logging.INFO, format="%(message)s")
        return COMMANDS[a.command](a)
    except _UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except ConfigError as exc:
        _emit_error("config", str(exc))
        return 2
    except FileNotFoundError as exc:
        _emit_error("file_not_found", str(exc))
        return 2
    except (ScaledSAError, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
