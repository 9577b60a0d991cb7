"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line (visible even with
output capture) before asserting.  Run on its own with::

    pytest tests/test_acceptance.py -v
    python3 tests/test_acceptance.py
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import corpus
from scaledsa.algebra import (
    AlgebraicConstraint,
    SetDescriptor,
    Status,
    asymptotic_cone,
    check_residual_negligible,
    compose_multiplicative,
    identify_scaling,
    max_combine,
    sample_unit_directions,
    unit_limit,
)
from scaledsa.distributions import sample, weibull_iid
from scaledsa.harness.benchmarks import ShortColumnConstraint, make_instance
from scaledsa.harness.config import ExperimentConfig
from scaledsa.rng import make_rng
from scaledsa.scenario import SampleSizePlan, build_problem, classical_sample_size, complexity_ratio, scaled_sample_size
from scaledsa.solver import LinearProgram, lp_as_problem, solve_cutting_plane, solve_lp
from scaledsa.validation import estimate_violation, run_trials

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture
def report(capsys):
    def _report(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail

    return _report


# -- 1 -----------------------------------------------------------------------------------

def test_criterion_1_sample_sizes(report):
    got = (classical_sample_size(1e-3, 0.01, 1), classical_sample_size(1e-3, 0.05, 1),
           scaled_sample_size(1e-3, 0.01, 1, 1.2, 2))
    report(1, got == (11211, 7992, 1359), f"N = {got}, want (11211, 7992, 1359)")


# -- 2 and 3: scaling profiles of the worked examples ------------------------------------

def _corpus_profiles():
    """name -> (profile or None, expected, reference g*, limit parts, x_set, xi_set, components)."""
    out = {}
    for name, make in corpus.SINGLE.items():
        c, X, Xi, expected, ref = make()
        prof = identify_scaling(c, X, Xi).profile
        if name == "ball_product":
            # f = (x^T z - 1)/(1 + |x|^2) times h = 1 + |x|^2 with h* = 1
            prof = compose_multiplicative(prof, -1.0, 0.0, unit_limit, y_cone=asymptotic_cone(X, -1.0), w_cone=Xi)
        parts = [prof.limit_constraint] if prof is not None else []
        out[name] = (prof, expected, ref, parts, X, Xi, [c])
    for name, make in corpus.JOINT.items():
        comps, X, Xi, expected, ref = make()
        profs = [identify_scaling(c, X, Xi).profile for c in comps]
        if any(p is None for p in profs):
            out[name] = (None, expected, ref, [], X, Xi, comps)
            continue
        joint = max_combine(comps, profs)
        out[name] = (joint.profile, expected, ref, [p.limit_constraint for p in profs], X, Xi, comps)
    return out


def _points(prof, X, Xi, count, rng):
    cone = asymptotic_cone(X, prof.gamma)
    Y = sample_unit_directions(cone, count, rng) * 10.0 ** rng.uniform(-1, 1, (count, 1))
    W = sample_unit_directions(Xi, count, rng) * 10.0 ** rng.uniform(-1, 1, (count, 1))
    return Y, W


def _magnitude(parts, y, w):
    return max(float(np.abs(p.term_values(y, w)).sum()) for p in parts)


def test_criterion_2_algorithm_corpus(report):
    t0 = time.perf_counter()
    profiles = _corpus_profiles()
    rng = make_rng(2)
    bad = []
    worst = 0.0
    for name, (prof, expected, ref, parts, X, Xi, _) in profiles.items():
        if expected is None:
            if prof is not None:
                bad.append(f"{name}: expected no profile")
            continue
        if prof is None or (prof.gamma, prof.rho) != expected:
            bad.append(f"{name}: got {None if prof is None else (prof.gamma, prof.rho)}, want {expected}")
            continue
        Y, W = _points(prof, X, Xi, 100, rng)
        for y, w in zip(Y, W):
            a, b = prof.limit(y, w), ref(y, w)
            err = abs(a - b) / max(abs(b), _magnitude(parts, y, w))
            worst = max(worst, err)
            if err > 1e-9:
                bad.append(f"{name}: g* mismatch {a!r} vs {b!r}")
                break
    # benchmark profiles as declared by the harness
    for bench in ("portfolio", "norm_opt", "short_column"):
        inst = make_instance(bench)
        prof, _, ref, parts, X, Xi, _ = profiles[bench]
        if (inst.profile.gamma, inst.profile.rho) != (prof.gamma, prof.rho):
            bad.append(f"{bench}: declared profile differs from identified one")
        Y, W = _points(prof, X, Xi, 100, rng)
        for y, w in zip(Y, W):
            if abs(inst.profile.limit(y, w) - ref(y, w)) > 1e-9 * max(abs(ref(y, w)), _magnitude(parts, y, w)):
                bad.append(f"{bench}: declared g* differs from the reference")
                break
    # the short column's log-sum-exp residual must vanish along the scaling
    prof, *_, X, Xi, _ = profiles["short_column"]
    v = check_residual_negligible(ShortColumnConstraint().log_form, prof.limit, prof, X, Xi)
    if v.status is Status.FALSIFIED:
        bad.append(f"short_column residual: {v.describe()}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    report(2, ok, f"{len(profiles)} examples + 3 benchmarks, worst g* error {worst:.2e}, {dt:.2f}s"
           + (f"; {bad}" if bad else ""))


def test_criterion_3_homogeneity_and_uniqueness(report):
    t0 = time.perf_counter()
    profiles = _corpus_profiles()
    rng = make_rng(3)
    bad = []
    worst = 0.0
    n_profiles = 0
    for name, (prof, _, _, parts, X, Xi, comps) in profiles.items():
        for c in comps:
            passing = identify_scaling(c, X, Xi, exhaustive=True).passing
            if len(passing) > 1:
                bad.append(f"{name}: {len(passing)} passing candidates {passing}")
        if prof is None:
            continue
        n_profiles += 1
        Y, W = _points(prof, X, Xi, 1000, rng)
        T = 10.0 ** rng.uniform(-2, 2, 1000)
        for y, w, t in zip(Y, W, T):
            lhs = prof.limit(t**prof.gamma * y, t * w)
            rhs = t**prof.rho * prof.limit(y, w)
            err = abs(lhs - rhs) / (t**prof.rho * _magnitude(parts, y, w))
            worst = max(worst, err)
            if err > 1e-9:
                bad.append(f"{name}: homogeneity defect {err:.3g} at t={t:.3g}")
                break
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    report(3, ok, f"{n_profiles} profiles x 1000 triples, worst defect {worst:.2e}, "
           f"at most one passing candidate each, {dt:.2f}s" + (f"; {bad}" if bad else ""))


# -- 4 -------------------------------------------------------------------------------

def test_criterion_4_complexity_ratio(report):
    s = math.sqrt(2.0)  # s**alpha = 2 with alpha = 2
    ratios = [complexity_ratio(10.0**-k, 0.01, 1, s, 2.0) for k in range(3, 13)]
    monotone = all(b < a for a, b in zip(ratios, ratios[1:]))
    last = ratios[-1]
    ok = monotone and abs(last - 0.5) <= 0.05
    report(4, ok, f"ratio at eps=1e-12 is {last:.4f} (target 0.5), monotone decreasing: {monotone}")


# -- 5 -------------------------------------------------------------------------------

def _linear_scenario_lp(seed):
    """Joint-linear scenario program written both as constraint rows and as an LP."""
    rng = np.random.default_rng(seed)
    n, m, N = 4, 3, 40
    a = rng.uniform(0.5, 2.0, (n,))
    B = rng.uniform(0.2, 1.0, (m,))
    Z = rng.exponential(1.0, (N, m))
    # a^T x <= 5 + B^T z_j for every scenario, plus box [0, 10]
    A = np.tile(a, (N, 1))
    b = 5.0 + Z @ B
    c = rng.uniform(0.1, 1.0, n) * np.array([1, -1, 1, 1])
    return LinearProgram(c, np.vstack([A, rng.normal(size=(6, n))]), np.concatenate([b, rng.uniform(3, 6, 6)]),
                         np.zeros(n), np.full(n, 10.0))


def _grid_quadratic(kind):
    """Two-variable instance with a grid-aligned optimum.

    Scenario constraints ``z1 x1^2 + z2 x2^2 - z3 <= 0``; one or two of them
    pass through the chosen grid node ``x*`` and the objective gradient lies
    in the cone of their gradients, so ``x*`` is the continuous optimum.
    """
    c = AlgebraicConstraint.from_arrays([1.0, 1.0, -1.0], [[2, 0], [0, 2], [0, 0]],
                                        [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    if kind == 0:
        xs = np.array([2.0, 0.5])
        Z = np.array([[1.0, 4.0, 5.0], [2.0, 1.0, 9.0], [0.5, 3.0, 4.0]])
        obj = np.array([1.0, 1.0])
    elif kind == 1:
        xs = np.array([1.25, 1.5])
        za, zb = np.array([1.0, 2.0]), np.array([3.0, 0.5])
        Z = np.array([[*za, za @ xs**2], [*zb, zb @ xs**2], [1.0, 1.0, 9.0]])
        obj = 0.7 * 2 * za * xs + 0.3 * 2 * zb * xs
    else:
        xs = np.array([0.75, 3.25])
        za = np.array([2.0, 0.25])
        Z = np.array([[*za, za @ xs**2], [1.0, 1.0, 20.0], [0.1, 0.1, 2.0]])
        obj = 2 * za * xs
    return c, Z, obj, xs


def _grid_oracle(c, Z, obj, lo=0.0, hi=4.0, k=2001):
    g = np.linspace(lo, hi, k)
    X1, X2 = np.meshgrid(g, g, indexing="ij")
    feas = np.ones_like(X1, dtype=bool)
    for z in Z:
        feas &= z[0] * X1**2 + z[1] * X2**2 - z[2] <= 1e-12 * z[2]
    vals = np.where(feas, obj[0] * X1 + obj[1] * X2, -np.inf)
    i = np.unravel_index(np.argmax(vals), vals.shape)
    return float(vals[i]), np.array([X1[i], X2[i]])


def test_criterion_5_solver_oracles(report):
    t0 = time.perf_counter()
    lin = []
    for seed in range(10):
        lp = _linear_scenario_lp(seed)
        direct = solve_lp(lp)
        cp = solve_cutting_plane(lp_as_problem(lp))
        lin.append(abs(cp.objective_value - direct.objective_value) if cp.optimal and direct.optimal else math.inf)
    # the portfolio constraint is linear in x: each scenario is the row z_j^T x <= eta
    inst = make_instance("portfolio", verify=False)
    Z = sample(inst.distribution, 3000, 5).data
    p = build_problem(inst.objective, inst.constraint, None, inst.gamma, inst.x_set, inst.box, samples=Z)
    lp = LinearProgram(inst.objective, Z, np.full(len(Z), 1000.0), inst.lower, inst.upper)
    direct, cp = solve_lp(lp), solve_cutting_plane(p)
    lin.append(abs(cp.objective_value - direct.objective_value) if cp.optimal and direct.optimal else math.inf)
    quad = []
    for kind in range(3):
        c, Z, obj, xs = _grid_quadratic(kind)
        val, _ = _grid_oracle(c, Z, obj)
        p = build_problem(obj, c, None, 1.0, SetDescriptor.orthant(2), (np.zeros(2), np.full(2, 4.0)), samples=Z)
        r = solve_cutting_plane(p)
        quad.append(abs(r.objective_value - val) if r.optimal else math.inf)
    dt = time.perf_counter() - t0
    ok = max(lin) <= 1e-7 and max(quad) <= 1e-4 and dt < 60
    report(5, ok, f"(a) {len(lin)} linear instances incl. portfolio, max |Kelley - LP| {max(lin):.2e}; "
           f"(b) {len(quad)} quadratic instances, max |Kelley - grid| {max(quad):.2e}; {dt:.1f}s")


# -- 6 -------------------------------------------------------------------------------

def test_criterion_6_scaling_covariance(report):
    t0 = time.perf_counter()
    lines = []
    ok = True
    for bench, N in (("portfolio", 5000), ("norm_opt", 2000)):
        inst = make_instance(bench, verify=False)
        Z = sample(inst.distribution, N, 11).data
        res = {}
        for s in (1.0, 1.2):
            plan = SampleSizePlan(1e-3, 0.01, inst.n, s, inst.alpha, N)
            p = build_problem(inst.objective, inst.constraint, plan, inst.gamma, inst.x_set, inst.box,
                              sense=inst.sense, samples=Z)
            res[s] = solve_cutting_plane(p)
        r1, r2 = res[1.0], res[1.2]
        target = 1.2**inst.gamma
        obj_err = abs(r2.objective_value / r1.objective_value - target) / target
        x_err = float(np.max(np.abs(r2.x_star - target * r1.x_star)) / np.max(np.abs(target * r1.x_star)))
        ok &= r1.optimal and r2.optimal and obj_err <= 1e-5 and x_err <= 1e-5
        lines.append(f"{bench}: objective ratio error {obj_err:.2e}, x* error {x_err:.2e}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    report(6, ok, "; ".join(lines) + f"; {dt:.1f}s")


# -- 7 -------------------------------------------------------------------------------

def test_criterion_7_estimator_calibration(report):
    t0 = time.perf_counter()
    cases = [(1.0, 1.0, 0), (0.5, 1.0, 1), (2.0, 3.0, 2), (1.0, 2.5, 3), (0.25, 1.5, 4)]
    spec = weibull_iid(1.0, 1.0)  # shape 1: Exp(1)
    zs = []
    for x, eta, seed in cases:
        g = AlgebraicConstraint.from_arrays([1.0, -eta], [[1], [0]], [[1], [0]])
        est = estimate_violation([x], g, spec, 10**6, seed)
        exact = math.exp(-eta / x)
        zs.append(abs(est.p_hat - exact) / est.std_err)
    dt = time.perf_counter() - t0
    ok = max(zs) <= 3.0 and dt < 10
    report(7, ok, f"5 cases, |p_hat - exp(-eta/x)| / SE = {', '.join(f'{z:.2f}' for z in zs)}; {dt:.1f}s")


# -- 8, 9, 10: end-to-end experiments -----------------------------------------------------

_RUNS = {}


def _run(name, tmp_path_factory, tag=""):
    key = (name, tag)
    if key not in _RUNS:
        cfg = ExperimentConfig.load(CONFIGS / name)
        t0 = time.perf_counter()
        rep = run_trials(cfg)
        dt = time.perf_counter() - t0
        d = tmp_path_factory.mktemp(f"{Path(name).stem}{tag}")
        rep.write_csv(d / "trials.csv", d / "aggregate.csv", record_timing=False)
        _RUNS[key] = (rep, dt, (d / "trials.csv").read_bytes(), (d / "aggregate.csv").read_bytes())
    return _RUNS[key]


@pytest.mark.slow
def test_criterion_8_feasibility_sweep(report, tmp_path_factory):
    rep, dt, *_ = _run("feasibility.toml", tmp_path_factory)
    ok = dt <= 15 * 60
    parts = []
    for cell in rep.cells:
        recs = [r for r in rep.records if r.s == cell.s]
        good = sum(r.status == "optimal" and r.p_hat <= r.epsilon for r in recs)
        ok &= good >= 19 and cell.ldp_median >= 1.0
        parts.append(f"s^a={cell.s ** cell.alpha:.2f}: {good}/{cell.trials} optimal with p_hat<=eps, "
                     f"median p_hat {cell.p_hat_median:.2e}, median LDP ratio {cell.ldp_median:.3f} "
                     f"({cell.ldp_lower_bounds} lower bounds)")
    report(8, ok, "; ".join(parts) + f"; {dt:.0f}s")


@pytest.mark.slow
def test_criterion_9_sample_reduction(report, tmp_path_factory):
    rep, dt, *_ = _run("sample_reduction.toml", tmp_path_factory)
    alpha = rep.cells[0].alpha
    s_scaled = 1.2 ** (1 / alpha)
    classical, scaled = rep.cell(1e-3, 1.0), rep.cell(1e-3, s_scaled)
    factor = classical.N / scaled.N
    both = classical.optimal == classical.trials and scaled.optimal == scaled.trials
    c4, s4 = rep.cell(1e-4, 1.0), rep.cell(1e-4, s_scaled)
    recorded = c4.intractable + c4.optimal + c4.infeasible + c4.failed == c4.trials
    ok = factor >= 3 and both and recorded and s4.optimal == s4.trials and dt <= 30 * 60
    report(9, ok, f"eps=1e-3: N classical {classical.N}, scaled {scaled.N} (factor {factor:.2f}), "
           f"optimal {classical.optimal}/{classical.trials} and {scaled.optimal}/{scaled.trials}; "
           f"eps=1e-4: classical N {c4.N} recorded as intractable x{c4.intractable}, "
           f"scaled N {s4.N} optimal {s4.optimal}/{s4.trials}; {dt:.0f}s")


@pytest.mark.slow
def test_criterion_10_determinism(report, tmp_path_factory):
    same = []
    for name in ("feasibility.toml", "sample_reduction.toml"):
        _, _, t1, a1 = _run(name, tmp_path_factory)
        _, _, t2, a2 = _run(name, tmp_path_factory, tag="_rerun")
        same.append(t1 == t2 and a1 == a2)
    report(10, all(same), f"byte-identical CSVs on re-run: feasibility {same[0]}, sample reduction {same[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
