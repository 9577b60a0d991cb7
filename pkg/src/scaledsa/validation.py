"""Monte Carlo violation estimates, the LDP-ratio diagnostic, and trial sweeps."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from scaledsa.distributions import DistributionSpec, distribution_from_dict, draw
from scaledsa.rng import VALIDATION, make_rng, trial_seed
from scaledsa.scenario import SampleSizePlan, build_problem
from scaledsa.solver import SolverStatus, solve_cutting_plane

log = logging.getLogger(__name__)

BATCH = 100_000


@dataclass(frozen=True)
class ViolationEstimate:
    p_hat: float
    mc_samples: int
    std_err: float
    seed: int
    violations: int

    @classmethod
    def from_counts(cls, violations: int, mc_samples: int, seed: int) -> "ViolationEstimate":
        p = violations / mc_samples
        return cls(p, mc_samples, math.sqrt(p * (1.0 - p) / mc_samples), seed, violations)


def estimate_violation(x, evaluator, spec: DistributionSpec, mc_samples: int, seed: int,
                       batch: int = BATCH) -> ViolationEstimate:
    """Fraction of fresh draws with ``g(x, z) > 0``.

    ``evaluator`` must be the original (unscaled) constraint and expose
    ``batch_values(x, Z)``.  Draws come from the validation stream of
    ``seed``, so they never coincide with the scenarios used to solve.
    """
    if mc_samples < 1:
        raise ValueError("mc_samples must be >= 1")
    if batch < 1:
        raise ValueError("batch must be >= 1")
    rng = make_rng(seed, VALIDATION)
    x = np.asarray(x, dtype=float)
    hits = 0
    left = int(mc_samples)
    while left:
        b = min(batch, left)
        Z = draw(spec, b, rng)
        hits += int(np.count_nonzero(evaluator.batch_values(x, Z) > 0))
        left -= b
    return ViolationEstimate.from_counts(hits, int(mc_samples), int(seed))


@dataclass(frozen=True)
class LdpRatio:
    value: float
    lower_bound: bool  # True when no violation was observed


def ldp_ratio(est: ViolationEstimate, epsilon: float) -> LdpRatio:
    """``log p_hat / log epsilon``; with ``p_hat = 0`` the flagged bound ``log(1/mc) / log epsilon``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if est.p_hat > 0:
        return LdpRatio(math.log(est.p_hat) / math.log(epsilon), False)
    return LdpRatio(math.log(1.0 / est.mc_samples) / math.log(epsilon), True)


# -- trial sweeps ----------------------------------------------------------------

TRIAL_COLUMNS = (
    "benchmark", "epsilon", "beta", "s", "alpha", "N", "trial", "seed", "status",
    "objective", "p_hat", "std_err", "mc_samples", "solve_ms", "ldp_ratio", "ldp_flag",
)
AGGREGATE_COLUMNS = (
    "benchmark", "epsilon", "s", "alpha", "N", "trials", "optimal", "infeasible", "failed",
    "intractable", "below_epsilon", "objective_median", "objective_q25", "objective_q75",
    "p_hat_median", "p_hat_q25", "p_hat_q75", "ldp_median", "ldp_lower_bounds",
)

INTRACTABLE = "intractable"
FAILED = "failed"


@dataclass(frozen=True)
class TrialRecord:
    benchmark: str
    epsilon: float
    beta: float
    s: float
    alpha: float
    N: int
    trial: int
    seed: int
    status: str
    objective: float = math.nan
    p_hat: float = math.nan
    std_err: float = math.nan
    mc_samples: int = 0
    solve_ms: float = math.nan
    ldp_ratio: float = math.nan
    ldp_flag: str = ""
    x_star: tuple = ()


def quantiles(values) -> tuple[float, float, float]:
    """(median, q25, q75) with the 'lower' convention: always an observed value."""
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return math.nan, math.nan, math.nan
    q = np.quantile(a, [0.5, 0.25, 0.75], method="lower")
    return float(q[0]), float(q[1]), float(q[2])


@dataclass(frozen=True)
class CellSummary:
    benchmark: str
    epsilon: float
    s: float
    alpha: float
    N: int
    trials: int
    optimal: int
    infeasible: int
    failed: int
    intractable: int
    below_epsilon: int
    objective_median: float
    objective_q25: float
    objective_q75: float
    p_hat_median: float
    p_hat_q25: float
    p_hat_q75: float
    ldp_median: float
    ldp_lower_bounds: int

    @classmethod
    def fold(cls, recs: list[TrialRecord]) -> "CellSummary":
        r0 = recs[0]
        ok = [r for r in recs if r.status == SolverStatus.OPTIMAL.value]
        est = [r for r in ok if not math.isnan(r.p_hat)]
        obj = quantiles([r.objective for r in ok])
        ph = quantiles([r.p_hat for r in est])
        ldp = quantiles([r.ldp_ratio for r in est])
        return cls(
            r0.benchmark, r0.epsilon, r0.s, r0.alpha, r0.N, len(recs), len(ok),
            sum(r.status == SolverStatus.INFEASIBLE.value for r in recs),
            sum(r.status not in (SolverStatus.OPTIMAL.value, SolverStatus.INFEASIBLE.value, INTRACTABLE)
                for r in recs),
            sum(r.status == INTRACTABLE for r in recs),
            sum(r.p_hat <= r.epsilon for r in est),
            *obj, *ph, ldp[0], sum(r.ldp_flag == "lower_bound" for r in est),
        )


@dataclass
class TrialReport:
    records: list[TrialRecord]
    cells: list[CellSummary]
    config: object = None

    def cell(self, epsilon: float, s: float) -> CellSummary:
        for c in self.cells:
            if math.isclose(c.epsilon, epsilon) and math.isclose(c.s, s):
                return c
        raise KeyError((epsilon, s))

    def write_csv(self, trials_path, aggregate_path, record_timing: bool = True) -> None:
        with open(trials_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRIAL_COLUMNS)
            for r in self.records:
                row = [getattr(r, k) for k in TRIAL_COLUMNS]
                if not record_timing:
                    row[TRIAL_COLUMNS.index("solve_ms")] = math.nan
                w.writerow([_fmt(v) for v in row])
        with open(aggregate_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(AGGREGATE_COLUMNS)
            for c in self.cells:
                w.writerow([_fmt(getattr(c, k)) for k in AGGREGATE_COLUMNS])


def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def run_single(instance, epsilon: float, beta: float, s: float, alpha: float, trial: int, seed: int,
               mc_samples: int, *, tol_feas=1e-7, max_iter=500, top_k=50, max_scenarios=None) -> TrialRecord:
    """One trial: sample, build, solve the scaled problem, validate on the original one."""
    plan = SampleSizePlan.make(epsilon, beta, instance.n, s, alpha)
    head = dict(benchmark=instance.name, epsilon=epsilon, beta=beta, s=s, alpha=alpha, N=plan.N,
                trial=trial, seed=seed)
    if max_scenarios is not None and plan.N > max_scenarios:
        return TrialRecord(**head, status=INTRACTABLE)
    try:
        t0 = time.perf_counter()
        prob = build_problem(instance.objective, instance.constraint, plan, instance.gamma, instance.x_set,
                             instance.box, seed, sense=instance.sense, distribution=instance.distribution)
        res = solve_cutting_plane(prob, tol_feas, max_iter, top_k)
        ms = (time.perf_counter() - t0) * 1e3
        if res.status not in (SolverStatus.OPTIMAL, SolverStatus.ITERATION_LIMIT):
            return TrialRecord(**head, status=res.status.value, solve_ms=ms)
        est = estimate_violation(res.x_star, instance.constraint, instance.distribution, mc_samples, seed)
        ratio = ldp_ratio(est, epsilon)
        return TrialRecord(
            **head, status=res.status.value, objective=res.objective_value, p_hat=est.p_hat,
            std_err=est.std_err, mc_samples=est.mc_samples, solve_ms=ms, ldp_ratio=ratio.value,
            ldp_flag="lower_bound" if ratio.lower_bound else "", x_star=tuple(res.x_star.tolist()),
        )
    except Exception as exc:  # recorded, never aborts a sweep
        log.warning("trial %d (eps=%g, s=%g) failed: %s", trial, epsilon, s, exc)
        return TrialRecord(**head, status=FAILED)


def run_trials(config, instance=None, progress=None) -> TrialReport:
    """Run every (epsilon, s, trial) of an experiment and fold the statistics.

    Records are ordered by (epsilon, s, trial) whatever the completion order.
    """
    from scaledsa.harness.benchmarks import make_instance

    if instance is None:
        instance = make_instance(config.benchmark, config.instance_seed)
    if config.distribution is not None:
        spec = distribution_from_dict(config.distribution)
        if spec.dim != instance.distribution.dim:
            raise ValueError(f"distribution dimension {spec.dim} does not match the benchmark's "
                             f"{instance.distribution.dim}")
        instance = replace(instance, distribution=spec, alpha=spec.tail_index)
    alpha = config.alpha if config.alpha is not None else instance.alpha
    opts = config.solver
    jobs = []
    for eps in config.epsilons:
        for s in config.scale_values(alpha):
            for t in range(config.trials):
                jobs.append((eps, s, t))

    def job(j):
        eps, s, t = j
        rec = run_single(instance, eps, config.beta, s, alpha, t, trial_seed(config.base_seed, t),
                         config.mc_for(eps), tol_feas=opts.tol_feas, max_iter=opts.max_iter,
                         top_k=opts.top_k, max_scenarios=opts.max_scenarios)
        if progress is not None:
            progress(rec)
        return rec

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            records = list(pool.map(job, jobs))
    else:
        records = [job(j) for j in jobs]
    cells = []
    for i in range(0, len(records), config.trials):
        cells.append(CellSummary.fold(records[i:i + config.trials]))
    return TrialReport(records, cells, config)
