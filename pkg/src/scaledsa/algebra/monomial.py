"""Finite sums of monomials in a decision vector ``x`` and an uncertainty vector ``z``.

A constraint is stored as ``g(x, z) = sum_t C_t * x**a_t * z**b_t`` with real
exponent vectors ``a_t`` (length n) and ``b_t`` (length m).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from scaledsa.errors import DomainError

EXP_TOL = 1e-12


@dataclass(frozen=True)
class Monomial:
    coeff: float
    dec_exp: tuple[float, ...]
    unc_exp: tuple[float, ...]

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("monomial coefficient must be nonzero")
        object.__setattr__(self, "coeff", float(self.coeff))
        object.__setattr__(self, "dec_exp", tuple(float(v) for v in self.dec_exp))
        object.__setattr__(self, "unc_exp", tuple(float(v) for v in self.unc_exp))

    @property
    def dec_degree(self) -> float:
        return float(sum(self.dec_exp))

    @property
    def unc_degree(self) -> float:
        return float(sum(self.unc_exp))

    def rate(self, gamma: float) -> float:
        """Growth exponent of the term along ``x = u**gamma y``, ``z = u w``."""
        return gamma * self.dec_degree + self.unc_degree


def _needs_positive(exps: np.ndarray) -> np.ndarray:
    """Per-coordinate flag: some term raises it to a negative or fractional power."""
    if exps.size == 0:
        return np.zeros(exps.shape[1], dtype=bool)
    frac = np.abs(exps - np.round(exps)) > EXP_TOL
    return np.any((exps < 0) | frac, axis=0)


def _same_exponents(m1: Monomial, m2: Monomial) -> bool:
    return (
        np.allclose(m1.dec_exp, m2.dec_exp, rtol=0, atol=EXP_TOL)
        and np.allclose(m1.unc_exp, m2.unc_exp, rtol=0, atol=EXP_TOL)
    )


def _is_even_int(v: float) -> bool:
    return abs(v - round(v)) <= EXP_TOL and int(round(v)) % 2 == 0


class AlgebraicConstraint:
    """Sum of monomials with merged duplicate exponents.

    Terms whose exponent pairs coincide (within ``EXP_TOL``) are merged at
    construction and terms whose merged coefficient vanishes are dropped.
    The object is treated as immutable once built.
    """

    def __init__(self, terms: Iterable[Monomial], n: int, m: int):
        if n < 1 or m < 1:
            raise ValueError("dimensions n and m must be positive")
        merged: list[Monomial] = []
        for t in terms:
            if len(t.dec_exp) != n or len(t.unc_exp) != m:
                raise ValueError(
                    f"term exponent lengths ({len(t.dec_exp)}, {len(t.unc_exp)}) "
                    f"do not match (n, m) = ({n}, {m})"
                )
            for i, u in enumerate(merged):
                if u is not None and _same_exponents(u, t):
                    c = u.coeff + t.coeff
                    merged[i] = Monomial(c, u.dec_exp, u.unc_exp) if c != 0 else None
                    break
            else:
                merged.append(t)
        kept = [t for t in merged if t is not None]
        if not kept:
            raise ValueError("constraint has no nonzero terms")
        self.terms: tuple[Monomial, ...] = tuple(kept)
        self.n = int(n)
        self.m = int(m)
        self.coeffs = np.array([t.coeff for t in kept])
        self.A = np.array([t.dec_exp for t in kept], dtype=float).reshape(len(kept), n)
        self.B = np.array([t.unc_exp for t in kept], dtype=float).reshape(len(kept), m)
        self.dec_degrees = self.A.sum(axis=1)
        self.unc_degrees = self.B.sum(axis=1)
        self.x_needs_positive = _needs_positive(self.A)
        self.z_needs_positive = _needs_positive(self.B)
        # sparse view of the uncertainty exponents, used by the batch kernels
        self._b_support = [tuple(np.flatnonzero(row)) for row in self.B]
        for arr in (self.coeffs, self.A, self.B, self.dec_degrees, self.unc_degrees):
            arr.setflags(write=False)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_arrays(cls, coeffs, A, B) -> "AlgebraicConstraint":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        terms = [Monomial(c, a, b) for c, a, b in zip(coeffs, A, B)]
        return cls(terms, A.shape[1], B.shape[1])

    def subset(self, indices: Sequence[int]) -> "AlgebraicConstraint":
        return AlgebraicConstraint([self.terms[i] for i in indices], self.n, self.m)

    def with_coeffs(self, coeffs) -> "AlgebraicConstraint":
        return AlgebraicConstraint.from_arrays(coeffs, self.A, self.B)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraicConstraint):
            return NotImplemented
        if (self.n, self.m, len(self)) != (other.n, other.m, len(other)):
            return False
        return all(
            any(_same_exponents(t, u) and t.coeff == u.coeff for u in other.terms)
            for t in self.terms
        )

    def __hash__(self):
        return hash((self.n, self.m, len(self)))

    def __repr__(self):
        return f"AlgebraicConstraint({self.to_string()!r}, n={self.n}, m={self.m})"

    def to_string(self, xname="x", zname="z") -> str:
        parts = []
        for t in self.terms:
            factors = [f"{t.coeff:g}"]
            for name, exps in ((xname, t.dec_exp), (zname, t.unc_exp)):
                for i, e in enumerate(exps):
                    if e == 1:
                        factors.append(f"{name}{i}")
                    elif e != 0:
                        factors.append(f"{name}{i}^{e:g}")
            parts.append("*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    # -- domain guards -----------------------------------------------------------
    def _check_x(self, x: np.ndarray):
        bad = self.x_needs_positive & ~(x > 0)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise DomainError(
                f"x[{i}] = {x[i]!r} must be strictly positive for this constraint",
                point=x,
            )

    def _check_z(self, Z: np.ndarray):
        if not np.any(self.z_needs_positive):
            return
        bad = self.z_needs_positive[None, :] & ~(Z > 0)
        if np.any(bad):
            k, j = (int(v) for v in np.argwhere(bad)[0])
            raise DomainError(
                f"z[{j}] = {Z[k, j]!r} must be strictly positive for this constraint",
                point=Z[k],
            )

    def x_in_domain(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return not np.any(self.x_needs_positive & ~(x > 0))

    def z_in_domain(self, z) -> bool:
        z = np.asarray(z, dtype=float)
        return not np.any(self.z_needs_positive & ~(z > 0))

    # -- evaluation -------------------------------------------------------------
    def decision_weights(self, x) -> np.ndarray:
        """Vector ``C_t * x**a_t`` over terms."""
        x = np.asarray(x, dtype=float)
        self._check_x(x)
        return self.coeffs * np.prod(np.power(x[None, :], self.A), axis=1)

    def decision_jacobian(self, x) -> np.ndarray:
        """Matrix ``D[t, i] = d/dx_i (C_t x**a_t)``, shape (terms, n)."""
        x = np.asarray(x, dtype=float)
        self._check_x(x)
        T, n = self.A.shape
        D = np.zeros((T, n))
        for i in range(n):
            ai = self.A[:, i]
            rows = np.flatnonzero(ai != 0)
            if rows.size == 0:
                continue
            A_red = self.A[rows].copy()
            A_red[:, i] -= 1.0
            D[rows, i] = self.coeffs[rows] * ai[rows] * np.prod(np.power(x[None, :], A_red), axis=1)
        return D

    def uncertainty_features(self, Z) -> np.ndarray:
        """Matrix ``F[k, t] = Z[k]**b_t`` for a batch of uncertainty rows."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != self.m:
            raise ValueError(f"expected {self.m} uncertainty columns, got {Z.shape[1]}")
        self._check_z(Z)
        F = np.ones((Z.shape[0], len(self.terms)))
        for t, support in enumerate(self._b_support):
            for j in support:
                e = self.B[t, j]
                col = Z[:, j]
                if e == 1.0:
                    F[:, t] *= col
                elif e == 2.0:
                    F[:, t] *= col * col
                else:
                    F[:, t] *= np.power(col, e)
        return F

    def batch_values(self, x, Z) -> np.ndarray:
        return self.uncertainty_features(Z) @ self.decision_weights(x)

    def evaluate(self, x, z) -> float:
        return float(self.batch_values(x, np.asarray(z, dtype=float)[None, :])[0])

    __call__ = evaluate

    def subgradient(self, x, z) -> np.ndarray:
        """Gradient in ``x``: termwise ``C a_i x**(a - e_i) z**b``."""
        F = self.uncertainty_features(np.asarray(z, dtype=float)[None, :])
        return (F @ self.decision_jacobian(x))[0]

    def batch_subgradients(self, x, Z) -> np.ndarray:
        return self.uncertainty_features(Z) @ self.decision_jacobian(x)

    def term_values(self, x, z) -> np.ndarray:
        """Individual term values at a single point (no summation)."""
        F = self.uncertainty_features(np.asarray(z, dtype=float)[None, :])[0]
        return F * self.decision_weights(x)

    # -- structural helpers used by the condition checks ------------------------
    def term_nonneg_on_orthant_z(self, t: int) -> bool:
        return bool(np.all(self.B[t] >= 0))

    def unc_even(self, t: int) -> bool:
        return all(_is_even_int(v) for v in self.B[t])

    def dec_even(self, t: int) -> bool:
        return all(_is_even_int(v) for v in self.A[t])

    def scale_decision(self, factor: float) -> "AlgebraicConstraint":
        """Constraint ``x -> g(factor * x, z)``; exact for monomial sums."""
        return self.with_coeffs(self.coeffs * np.power(float(factor), self.dec_degrees))
