"""Algebraic constraints and their asymptotic scaling structure."""
from scaledsa.algebra.composition import (
    JointConstraint,
    check_residual_negligible,
    compose_multiplicative,
    max_combine,
    unit_limit,
)
from scaledsa.algebra.monomial import AlgebraicConstraint, Monomial
from scaledsa.algebra.scaling import (
    ConditionReport,
    Identification,
    ScalingProfile,
    Status,
    Verdict,
    candidate_profile,
    check_conditions,
    enumerate_gamma_candidates,
    identify_scaling,
    rho_and_active_set,
)
from scaledsa.algebra.sets import SetDescriptor, SetKind, asymptotic_cone, sample_unit_directions

__all__ = [
    "AlgebraicConstraint",
    "ConditionReport",
    "Identification",
    "JointConstraint",
    "Monomial",
    "ScalingProfile",
    "SetDescriptor",
    "SetKind",
    "Status",
    "Verdict",
    "asymptotic_cone",
    "candidate_profile",
    "check_conditions",
    "check_residual_negligible",
    "compose_multiplicative",
    "enumerate_gamma_candidates",
    "identify_scaling",
    "max_combine",
    "rho_and_active_set",
    "sample_unit_directions",
    "unit_limit",
]
