"""Constraint specification files (TOML).

Schema::

    n = 1                      # decision dimension
    m = 1                      # uncertainty dimension
    x_set = "full_space"       # or "nonneg_orthant", or a table
    xi_set = "full_space"      # {kind = "ball", radius = 2.0}
                               # {kind = "box", lower = [..], upper = [..]}

    [[terms]]                  # one table per monomial C * x^a * z^b
    coeff = 1.0
    a = [1]
    b = [1]

A term may omit ``a`` or ``b`` (all zeros).  ``x_set`` and ``xi_set``
default to the full space.  Infinite box bounds are written ``inf``.
"""
from __future__ import annotations

import numpy as np
import tomli
import tomli_w

from scaledsa.algebra import AlgebraicConstraint, Monomial, SetDescriptor
from scaledsa.errors import ConfigError


def _vector(v, size, what):
    if not isinstance(v, list) or len(v) != size:
        raise ConfigError(f"{what} must be a list of {size} numbers")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise ConfigError(f"{what} must contain only numbers")
    return [float(x) for x in v]


def constraint_from_dict(d: dict):
    """Return ``(constraint, x_set, xi_set)``."""
    extra = set(d) - {"n", "m", "terms", "x_set", "xi_set", "name"}
    if extra:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(extra))}")
    try:
        n, m, raw_terms = d["n"], d["m"], d["terms"]
    except KeyError as exc:
        raise ConfigError(f"missing field {exc.args[0]!r}") from None
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise ConfigError("n and m must be positive integers")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise ConfigError("'terms' must be a non-empty list of tables")
    terms = []
    for i, t in enumerate(raw_terms):
        if not isinstance(t, dict) or "coeff" not in t:
            raise ConfigError(f"term {i} needs a 'coeff'")
        bad = set(t) - {"coeff", "a", "b"}
        if bad:
            raise ConfigError(f"term {i}: unknown key(s) {', '.join(sorted(bad))}")
        a = _vector(t.get("a", [0] * n), n, f"term {i} 'a'")
        b = _vector(t.get("b", [0] * m), m, f"term {i} 'b'")
        coeff = t["coeff"]
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)) or coeff == 0:
            raise ConfigError(f"term {i}: coeff must be a nonzero number")
        terms.append(Monomial(float(coeff), a, b))
    try:
        c = AlgebraicConstraint(terms, n, m)
        x_set = SetDescriptor.from_dict(d.get("x_set", "full_space"), n)
        xi_set = SetDescriptor.from_dict(d.get("xi_set", "full_space"), m)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    return c, x_set, xi_set


def load_constraint(path):
    try:
        with open(path, "rb") as fh:
            d = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None
    return constraint_from_dict(d)


def constraint_to_dict(c: AlgebraicConstraint, x_set: SetDescriptor, xi_set: SetDescriptor) -> dict:
    return {
        "n": c.n,
        "m": c.m,
        "x_set": x_set.to_dict(),
        "xi_set": xi_set.to_dict(),
        "terms": [
            {"coeff": float(t.coeff), "a": [float(v) for v in t.dec_exp], "b": [float(v) for v in t.unc_exp]}
            for t in c.terms
        ],
    }


def dumps_constraint(c, x_set, xi_set) -> str:
    return tomli_w.dumps(_plain(constraint_to_dict(c, x_set, xi_set)))


def _plain(v):
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items() if x is not None}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v
