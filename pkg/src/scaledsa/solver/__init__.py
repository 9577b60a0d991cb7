"""Dense simplex LP solver and Kelley cutting-plane loop."""
from scaledsa.solver._kernel import BACKEND, ext_available, kernel
from scaledsa.solver.cutting_plane import lp_as_problem, solve_cutting_plane
from scaledsa.solver.lp import LinearProgram, SolverResult, SolverStatus, Tableau, solve_lp


def monomial_subgradient(c, x, z):
    """Termwise gradient of an algebraic constraint in ``x``; raises DomainError off-domain."""
    return c.subgradient(x, z)


__all__ = [
    "BACKEND",
    "LinearProgram",
    "SolverResult",
    "SolverStatus",
    "Tableau",
    "ext_available",
    "kernel",
    "lp_as_problem",
    "monomial_subgradient",
    "solve_cutting_plane",
    "solve_lp",
]
