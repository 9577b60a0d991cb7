"""Identification of scaling exponents (gamma, rho) and the limit function.

Along ``x = u**gamma * y`` and ``z = u * w`` each term of an algebraic
constraint grows like ``u**(gamma * sum(a) + sum(b))``.  The limit function
keeps the terms of maximal growth.  Candidate values of ``gamma`` are those
that balance two terms; each is accepted only if the limit satisfies the
regularity checks implemented in :func:`check_conditions`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from scaledsa.algebra.monomial import EXP_TOL, AlgebraicConstraint
from scaledsa.algebra.sets import SetDescriptor, SetKind, asymptotic_cone, sample_unit_directions
from scaledsa.rng import CHECKS, make_rng

DEFAULT_BUDGET = 10_000
# radial scales used when searching for w with g*(y, w) > 0 or z with g(0, z) > 0
_SEARCH_SCALES = 10.0 ** np.arange(-2, 7)


class Status(str, Enum):
    VERIFIED = "verified_structural"
    FALSIFIED = "falsified"
    INCONCLUSIVE = "inconclusive_sampling"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: np.ndarray | None = None
    samples: int = 0
    skipped: int = 0
    note: str = ""

    @property
    def falsified(self) -> bool:
        return self.status is Status.FALSIFIED

    def describe(self) -> str:
        s = self.status.value
        if self.status is Status.FALSIFIED and self.witness is not None:
            s += f"(witness={np.array2string(np.asarray(self.witness), precision=4)})"
        elif self.status is Status.INCONCLUSIVE:
            s += f"(samples={self.samples}, skipped={self.skipped})"
        if self.note:
            s += f" [{self.note}]"
        return s


@dataclass(frozen=True)
class ConditionReport:
    a2: Verdict
    a3: Verdict
    a4: Verdict
    a5: Verdict

    @property
    def passed(self) -> bool:
        checks = (self.a2, self.a3, self.a4, self.a5)
        return self.a2.status is Status.VERIFIED and not any(v.falsified for v in checks)

    def lines(self) -> list[str]:
        return [f"{k.upper()}: {getattr(self, k).describe()}" for k in ("a2", "a3", "a4", "a5")]


@dataclass(frozen=True)
class ScalingProfile:
    """Scaling exponents and limit function of a constraint.

    For algebraic constraints ``limit_constraint`` holds the sub-sum of
    active terms.  Profiles produced by composition carry a callable
    ``limit_fn`` instead.
    """

    gamma: float
    rho: float
    active_terms: tuple[int, ...] = ()
    limit_constraint: AlgebraicConstraint | None = None
    limit_fn: Callable | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.gamma == 0:
            raise ValueError("gamma must be nonzero")
        if self.rho < -EXP_TOL:
            raise ValueError("rho must be nonnegative")
        if self.limit_constraint is None and self.limit_fn is None:
            raise ValueError("profile needs a limit constraint or a limit function")

    def limit(self, y, w) -> float:
        if self.limit_constraint is not None:
            return self.limit_constraint.evaluate(y, w)
        return float(self.limit_fn(np.asarray(y, float), np.asarray(w, float)))

    def describe(self) -> str:
        g = self.limit_constraint.to_string("y", "w") if self.limit_constraint is not None else "<composite>"
        return f"gamma={self.gamma:g} rho={self.rho:g} J*={list(self.active_terms)} g*={g}"


def _rate(c: AlgebraicConstraint, gamma: float) -> np.ndarray:
    return gamma * c.dec_degrees + c.unc_degrees


def enumerate_gamma_candidates(c: AlgebraicConstraint) -> list[float]:
    """Values of gamma equalising the growth rate of some pair of terms.

    Sorted ascending; values within ``EXP_TOL`` of each other are merged.
    """
    deg_a, deg_b = c.dec_degrees, c.unc_degrees
    vals = []
    T = len(c)
    for i in range(T):
        for j in range(i + 1, T):
            da = deg_a[i] - deg_a[j]
            if abs(da) <= EXP_TOL:
                continue
            vals.append(float((deg_b[j] - deg_b[i]) / da))
    vals.sort()
    out: list[float] = []
    for v in vals:
        if abs(v) <= EXP_TOL:
            v = 0.0
        if not out or abs(v - out[-1]) > EXP_TOL:
            out.append(v)
    return out


def rho_and_active_set(c: AlgebraicConstraint, gamma: float) -> tuple[float, tuple[int, ...]]:
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    p = _rate(c, gamma)
    rho = float(p.max())
    active = tuple(int(i) for i in np.flatnonzero(p >= rho - EXP_TOL))
    if abs(rho) <= EXP_TOL:
        rho = 0.0
    return rho, active


def candidate_profile(c: AlgebraicConstraint, gamma: float) -> ScalingProfile:
    """Profile for a given gamma without any acceptance checks."""
    rho, active = rho_and_active_set(c, gamma)
    limit = c.subset(active)
    flags = ()
    if np.any(limit.A < 0) or np.any(limit.B < 0):
        flags = ("negative_active_exponent",)
    return ScalingProfile(gamma, rho, active, limit, flags=flags)


# -- structural sufficient conditions -------------------------------------------

def _covers(c: AlgebraicConstraint, terms, cone: SetDescriptor) -> bool:
    """True if every nonzero y in the cone makes some listed term's x-part positive."""
    terms = list(terms)
    if not terms:
        return False
    if any(np.all(c.A[t] == 0) for t in terms):
        return True
    for i in range(c.n):
        ok = False
        for t in terms:
            support = np.flatnonzero(c.A[t])
            if list(support) != [i]:
                continue
            if cone.kind is SetKind.NONNEG_ORTHANT:
                ok = True
            elif cone.kind is SetKind.FULL_SPACE and c.A[t, i] > 0 and c.dec_even(t):
                ok = True
            if ok:
                break
        if not ok:
            return False
    return True


def _x_part_nonneg(c: AlgebraicConstraint, t: int, cone: SetDescriptor) -> bool:
    return cone.kind is SetKind.NONNEG_ORTHANT or c.dec_even(t)


def _weights_rows(c: AlgebraicConstraint, Y: np.ndarray):
    """Decision weights for many y at once, with a domain mask."""
    valid = ~np.any(c.x_needs_positive[None, :] & ~(Y > 0), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        W = c.coeffs[None, :] * np.prod(np.power(Y[:, None, :], c.A[None, :, :]), axis=2)
    return W, valid


def _check_a3(g: AlgebraicConstraint, cone: SetDescriptor, budget, rng) -> Verdict:
    b_zero = [t for t in range(len(g)) if np.all(g.B[t] == 0)]
    b_nonzero = [t for t in range(len(g)) if t not in b_zero]
    if (
        all(np.all(g.B[t] >= 0) for t in b_nonzero)
        and b_zero
        and all(g.coeffs[t] < 0 and _x_part_nonneg(g, t, cone) for t in b_zero)
        and _covers(g, b_zero, cone)
    ):
        return Verdict(Status.VERIFIED)
    if not g.z_in_domain(np.zeros(g.m)):
        return Verdict(Status.INCONCLUSIVE, samples=0, skipped=budget,
                       note="w = 0 outside the limit function's domain")
    F0 = g.uncertainty_features(np.zeros((1, g.m)))[0]
    Y = sample_unit_directions(cone, budget, rng)
    W, valid = _weights_rows(g, Y)
    vals = W @ F0
    bad = np.flatnonzero(valid & ~(vals < 0))
    if bad.size:
        return Verdict(Status.FALSIFIED, witness=Y[bad[0]], samples=int(valid.sum()),
                       note=f"g*(y,0) = {vals[bad[0]]:.6g}")
    return Verdict(Status.INCONCLUSIVE, samples=int(valid.sum()), skipped=int((~valid).sum()))


def _check_a4(g: AlgebraicConstraint, cone: SetDescriptor, xi_set: SetDescriptor, budget, rng) -> Verdict:
    b_nonzero = [t for t in range(len(g)) if np.any(g.B[t] != 0)]
    if (
        b_nonzero
        and all(g.coeffs[t] > 0 and np.all(g.B[t] >= 0) and _x_part_nonneg(g, t, cone) for t in b_nonzero)
        and _covers(g, b_nonzero, cone)
    ):
        return Verdict(Status.VERIFIED)
    n_y = max(1, min(100, budget // 100))
    n_w = max(1, budget // n_y)
    Y = sample_unit_directions(cone, n_y, rng)
    W_y, valid_y = _weights_rows(g, Y)
    dirs = sample_unit_directions(xi_set, n_w, rng)
    Wpts = (_SEARCH_SCALES[:, None, None] * dirs[None, :, :]).reshape(-1, g.m)
    w_ok = ~np.any(g.z_needs_positive[None, :] & ~(Wpts > 0), axis=1)
    Wpts = Wpts[w_ok]
    skipped = int((~valid_y).sum())
    if Wpts.shape[0] == 0 or not valid_y.any():
        return Verdict(Status.INCONCLUSIVE, samples=0, skipped=budget, note="no sample inside the domain")
    F = g.uncertainty_features(Wpts)
    for k in np.flatnonzero(valid_y):
        if not np.any(F @ W_y[k] > 0):
            return Verdict(Status.FALSIFIED, witness=Y[k], samples=int(k + 1) * F.shape[0],
                           note="no w with g*(y, w) > 0 found along sampled rays")
    return Verdict(Status.INCONCLUSIVE, samples=int(valid_y.sum()) * F.shape[0], skipped=skipped)


def _check_a5(c: AlgebraicConstraint, gamma: float, xi_set: SetDescriptor, budget, rng) -> Verdict:
    if gamma > 0:
        return Verdict(Status.VERIFIED, note="vacuous for gamma > 0")
    neg = [t for t in range(len(c)) if np.any(c.A[t] < 0)]
    if neg:
        return Verdict(Status.FALSIFIED, witness=np.zeros(c.n), note="g(0, z) undefined")
    const = [t for t in range(len(c)) if np.all(c.A[t] == 0)]
    if not const:
        return Verdict(Status.VERIFIED, note="g(0, z) = 0")
    h = c.subset(const)
    z_nonneg = lambda t: xi_set.kind is SetKind.NONNEG_ORTHANT or h.unc_even(t)
    if all(h.coeffs[t] < 0 and z_nonneg(t) for t in range(len(h))):
        return Verdict(Status.VERIFIED)
    dirs = sample_unit_directions(xi_set, max(1, budget // len(_SEARCH_SCALES)), rng)
    Z = (_SEARCH_SCALES[:, None, None] * dirs[None, :, :]).reshape(-1, c.m)
    ok = ~np.any(h.z_needs_positive[None, :] & ~(Z > 0), axis=1)
    if not ok.any():
        return Verdict(Status.INCONCLUSIVE, samples=0, skipped=Z.shape[0])
    vals = h.batch_values(np.zeros(c.n), Z[ok])
    bad = np.flatnonzero(vals > 0)
    if bad.size:
        return Verdict(Status.FALSIFIED, witness=Z[ok][bad[0]], samples=int(ok.sum()),
                       note=f"g(0, z) = {vals[bad[0]]:.6g}")
    return Verdict(Status.INCONCLUSIVE, samples=int(ok.sum()), skipped=int((~ok).sum()))


def check_conditions(
    c: AlgebraicConstraint,
    profile: ScalingProfile,
    x_set: SetDescriptor,
    xi_set: SetDescriptor,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    *,
    rng: np.random.Generator | None = None,
) -> ConditionReport:
    """Run the nontriviality / sign checks on a candidate profile.

    Structural sufficient conditions are tried first; otherwise sampled
    directions are used to search for a counterexample.  A sampled search
    that finds nothing is reported as inconclusive, never as verified.
    """
    if xi_set.kind not in (SetKind.NONNEG_ORTHANT, SetKind.FULL_SPACE):
        raise ValueError("uncertainty support must be a closed cone (orthant or full space)")
    if rng is None:
        rng = make_rng(seed, CHECKS)
    g = profile.limit_constraint
    cone = asymptotic_cone(x_set, profile.gamma)
    if cone.kind is SetKind.ZERO:
        a2 = Verdict(Status.FALSIFIED, witness=np.zeros(x_set.dim), note="asymptotic cone is {0}")
        skip = Verdict(Status.INCONCLUSIVE, note="not evaluated: trivial cone")
        return ConditionReport(a2, skip, skip, _check_a5(c, profile.gamma, xi_set, budget, rng))
    a2 = Verdict(Status.VERIFIED, note=f"cone = {cone.kind.value}")
    a3 = _check_a3(g, cone, budget, rng)
    a4 = _check_a4(g, cone, xi_set, budget, rng)
    a5 = _check_a5(c, profile.gamma, xi_set, budget, rng)
    return ConditionReport(a2, a3, a4, a5)


@dataclass(frozen=True)
class CandidateRecord:
    gamma: float
    rho: float | None
    active_terms: tuple[int, ...] = ()
    skipped: str = ""
    report: ConditionReport | None = None

    def describe(self) -> str:
        head = f"gamma={self.gamma:g}"
        if self.skipped:
            return f"{head}: skipped ({self.skipped})"
        head += f" rho={self.rho:g} J*={list(self.active_terms)}"
        verdict = "PASS" if self.report.passed else "FAIL"
        return f"{head}: {verdict}; " + "; ".join(self.report.lines())


@dataclass(frozen=True)
class Identification:
    profile: ScalingProfile | None
    trail: tuple[CandidateRecord, ...]
    passing: tuple[float, ...] = field(default=())

    def __bool__(self):
        return self.profile is not None


def identify_scaling(
    c: AlgebraicConstraint,
    x_set: SetDescriptor,
    xi_set: SetDescriptor,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    *,
    exhaustive: bool = False,
) -> Identification:
    """Search the candidate exponents in ascending order.

    Returns the first candidate that passes every check.  With
    ``exhaustive=True`` all candidates are checked and ``passing`` lists
    every accepted gamma; the returned profile is still the first one.
    Each candidate draws from its own random stream so both modes see
    identical verdicts.
    """
    if x_set.dim != c.n or xi_set.dim != c.m:
        raise ValueError("set dimensions do not match the constraint")
    trail: list[CandidateRecord] = []
    passing: list[float] = []
    found: ScalingProfile | None = None
    for k, gamma in enumerate(enumerate_gamma_candidates(c)):
        if gamma == 0:
            trail.append(CandidateRecord(gamma, None, skipped="gamma = 0"))
            continue
        rho, active = rho_and_active_set(c, gamma)
        if rho < 0:
            trail.append(CandidateRecord(gamma, rho, active, skipped="rho < 0"))
            continue
        if len(active) < 2:
            trail.append(CandidateRecord(gamma, rho, active, skipped="single dominant term"))
            continue
        prof = candidate_profile(c, gamma)
        rng = make_rng(seed, CHECKS * 1000 + k)
        report = check_conditions(c, prof, x_set, xi_set, budget, rng=rng)
        trail.append(CandidateRecord(gamma, rho, active, report=report))
        if report.passed:
            passing.append(gamma)
            if found is None:
                found = prof
            if not exhaustive:
                break
    return Identification(found, tuple(trail), tuple(passing))
