"""Combining profiles: joint (max) constraints, positive multipliers, and
dominant-part decompositions of non-algebraic constraints."""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from scaledsa.algebra.monomial import EXP_TOL, AlgebraicConstraint
from scaledsa.algebra.scaling import ScalingProfile, Status, Verdict
from scaledsa.algebra.sets import SetDescriptor, asymptotic_cone, sample_unit_directions
from scaledsa.errors import DomainError, PositivityViolationError, ProfileMismatchError
from scaledsa.rng import CHECKS, make_rng


class JointConstraint:
    """``g(x, z) = max_i g_i(x, z)`` over algebraic components.

    The subgradient at a tie is taken from the lowest-index maximising
    component so that generated cuts are deterministic.
    """

    def __init__(self, components: Sequence[AlgebraicConstraint], profile: ScalingProfile | None = None):
        if not components:
            raise ValueError("need at least one component")
        n, m = components[0].n, components[0].m
        if any(c.n != n or c.m != m for c in components):
            raise ValueError("components must share dimensions")
        self.components = tuple(components)
        self.n, self.m = n, m
        self.profile = profile

    def __len__(self):
        return len(self.components)

    def component_values(self, x, Z) -> np.ndarray:
        """Shape (batch, K)."""
        return np.stack([c.batch_values(x, Z) for c in self.components], axis=1)

    def batch_values(self, x, Z) -> np.ndarray:
        return self.component_values(x, Z).max(axis=1)

    def evaluate(self, x, z) -> float:
        return float(self.batch_values(x, np.asarray(z, float)[None, :])[0])

    __call__ = evaluate

    def subgradient(self, x, z) -> np.ndarray:
        z = np.asarray(z, float)
        vals = [c.evaluate(x, z) for c in self.components]
        i = int(np.argmax(vals))  # first maximiser
        return self.components[i].subgradient(x, z)

    def scale_decision(self, factor: float) -> "JointConstraint":
        return JointConstraint([c.scale_decision(factor) for c in self.components], self.profile)


def max_combine(
    constraints: Sequence[AlgebraicConstraint],
    profiles: Sequence[ScalingProfile],
) -> JointConstraint:
    """Joint constraint from components sharing the same (gamma, rho)."""
    if len(constraints) != len(profiles) or not constraints:
        raise ValueError("need one profile per component")
    g0, r0 = profiles[0].gamma, profiles[0].rho
    for p in profiles[1:]:
        if abs(p.gamma - g0) > EXP_TOL or abs(p.rho - r0) > EXP_TOL:
            raise ProfileMismatchError(
                f"component profile ({p.gamma:g}, {p.rho:g}) differs from ({g0:g}, {r0:g})"
            )
    if len(profiles) == 1:
        return JointConstraint(constraints, profiles[0])
    limits = tuple(profiles)

    def limit_fn(y, w):
        return max(p.limit(y, w) for p in limits)

    active = tuple(i for i, _ in enumerate(profiles))
    joint_profile = ScalingProfile(g0, r0, active, None, limit_fn=limit_fn)
    return JointConstraint(constraints, joint_profile)


def compose_multiplicative(
    f_profile: ScalingProfile,
    h_gamma: float,
    h_rho: float,
    h_limit: Callable,
    *,
    y_cone: SetDescriptor | None = None,
    w_cone: SetDescriptor | None = None,
    spot_checks: int = 1000,
    seed: int = 0,
) -> ScalingProfile:
    """Profile of ``g = h * f`` for a strictly positive multiplier ``h``.

    Positivity of ``h*`` is asserted by the caller; when the cones are given
    it is spot-checked on sampled directions and radii.
    """
    if abs(h_gamma - f_profile.gamma) > EXP_TOL:
        raise ProfileMismatchError(
            f"multiplier gamma {h_gamma:g} differs from constraint gamma {f_profile.gamma:g}"
        )
    if y_cone is not None and w_cone is not None and spot_checks > 0:
        rng = make_rng(seed, CHECKS)
        Y = sample_unit_directions(y_cone, spot_checks, rng)
        Wd = sample_unit_directions(w_cone, spot_checks, rng)
        radii = 10.0 ** rng.uniform(-2, 2, size=(spot_checks, 2))
        for y, w, (ry, rw) in zip(Y, Wd, radii):
            v = float(h_limit(ry * y, rw * w))
            if not v > 0:
                raise PositivityViolationError(
                    f"h*(y, w) = {v:g} is not strictly positive", witness=(ry * y, rw * w)
                )
    f_limit = f_profile.limit

    def limit_fn(y, w):
        return float(h_limit(y, w)) * f_limit(y, w)

    if h_rho == 0 and getattr(h_limit, "is_unit", False):
        # identity multiplier keeps the algebraic limit
        return f_profile
    return ScalingProfile(
        f_profile.gamma,
        f_profile.rho + h_rho,
        f_profile.active_terms,
        None,
        limit_fn=limit_fn,
        flags=f_profile.flags,
    )


def unit_limit(y, w):
    """The limit function ``h* = 1``."""
    return 1.0


unit_limit.is_unit = True


def check_residual_negligible(
    full_g: Callable,
    dominant: Callable,
    profile: ScalingProfile,
    x_set: SetDescriptor,
    xi_set: SetDescriptor,
    u_grid: Sequence[float] = (10.0, 1e2, 1e3, 1e4),
    directions: int = 100,
    seed: int = 0,
    tol: float = 1e-3,
) -> Verdict:
    """Heuristic falsifier for ``(full_g - dominant)(u^gamma y, u w) / u^rho -> 0``.

    Reports FALSIFIED when, along some sampled direction, the ratio at the
    largest ``u`` exceeds the ratio at the smallest ``u`` or exceeds
    ``tol``.  Otherwise the result is INCONCLUSIVE: sampling can refute but
    never prove negligibility.
    """
    rng = make_rng(seed, CHECKS)
    cone = asymptotic_cone(x_set, profile.gamma)
    Y = sample_unit_directions(cone, directions, rng)
    Wd = sample_unit_directions(xi_set, directions, rng)
    u = np.asarray(u_grid, dtype=float)
    used = skipped = 0
    worst = 0.0
    for y, w in zip(Y, Wd):
        try:
            r = np.array([
                abs(full_g(ui ** profile.gamma * y, ui * w) - dominant(ui ** profile.gamma * y, ui * w))
                / ui ** profile.rho
                for ui in u
            ])
        except DomainError:
            skipped += 1
            continue
        used += 1
        worst = max(worst, float(r[-1]))
        if r[-1] > r[0] or r[-1] > tol:
            return Verdict(Status.FALSIFIED, witness=np.concatenate([y, w]), samples=used,
                           skipped=skipped, note=f"residual ratios {np.array2string(r, precision=3)}")
    return Verdict(Status.INCONCLUSIVE, samples=used, skipped=skipped,
                   note=f"max final ratio {worst:.3g}")
