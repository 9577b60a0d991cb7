"""Set descriptors for the decision set X and the uncertainty support."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from scaledsa.errors import UnsupportedGeometryError


class SetKind(str, Enum):
    NONNEG_ORTHANT = "nonneg_orthant"
    FULL_SPACE = "full_space"
    BALL = "ball"
    BOX = "box"
    ZERO = "zero"  # the cone {0}; only produced by asymptotic_cone


CONE_KINDS = (SetKind.NONNEG_ORTHANT, SetKind.FULL_SPACE, SetKind.ZERO)


@dataclass(frozen=True)
class SetDescriptor:
    """One of the closed convex sets used by the benchmark problems.

    ``ball`` is centred at the origin.  ``box`` upper bounds may be ``inf``;
    lower bounds must be finite.
    """

    kind: SetKind
    dim: int
    radius: float | None = None
    lower: tuple[float, ...] | None = field(default=None)
    upper: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        kind = SetKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.dim < 1:
            raise ValueError("set dimension must be positive")
        if kind is SetKind.BALL:
            if self.radius is None or not self.radius > 0:
                raise ValueError("ball radius must be > 0")
        if kind is SetKind.BOX:
            if self.lower is None or self.upper is None:
                raise ValueError("box needs lower and upper bounds")
            lo = tuple(float(v) for v in self.lower)
            hi = tuple(float(v) for v in self.upper)
            if len(lo) != self.dim or len(hi) != self.dim:
                raise ValueError("box bound lengths must equal dim")
            if not all(np.isfinite(lo)):
                raise ValueError("box lower bounds must be finite")
            if any(l > h for l, h in zip(lo, hi)):
                raise ValueError("box requires lower <= upper componentwise")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)

    # constructors
    @classmethod
    def orthant(cls, dim):
        return cls(SetKind.NONNEG_ORTHANT, dim)

    @classmethod
    def full(cls, dim):
        return cls(SetKind.FULL_SPACE, dim)

    @classmethod
    def ball(cls, dim, radius):
        return cls(SetKind.BALL, dim, radius=float(radius))

    @classmethod
    def box(cls, lower, upper):
        lower = tuple(np.atleast_1d(np.asarray(lower, dtype=float)))
        upper = tuple(np.atleast_1d(np.asarray(upper, dtype=float)))
        return cls(SetKind.BOX, len(lower), lower=lower, upper=upper)

    @classmethod
    def zero(cls, dim):
        return cls(SetKind.ZERO, dim)

    @property
    def is_cone(self) -> bool:
        return self.kind in CONE_KINDS

    def contains(self, x, tol=0.0) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            return False
        if self.kind is SetKind.FULL_SPACE:
            return bool(np.all(np.isfinite(x)))
        if self.kind is SetKind.NONNEG_ORTHANT:
            return bool(np.all(x >= -tol))
        if self.kind is SetKind.ZERO:
            return bool(np.all(np.abs(x) <= tol))
        if self.kind is SetKind.BALL:
            return bool(np.linalg.norm(x) <= self.radius + tol)
        lo, hi = np.array(self.lower), np.array(self.upper)
        return bool(np.all(x >= lo - tol) and np.all(x <= hi + tol))

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.kind is SetKind.BALL:
            d["radius"] = self.radius
        if self.kind is SetKind.BOX:
            d["lower"] = list(self.lower)
            d["upper"] = list(self.upper)
        return d

    @classmethod
    def from_dict(cls, d, dim: int) -> "SetDescriptor":
        if isinstance(d, str):
            d = {"kind": d}
        kind = SetKind(d["kind"])
        if kind is SetKind.BALL:
            return cls.ball(dim, d["radius"])
        if kind is SetKind.BOX:
            lo = np.broadcast_to(np.asarray(d["lower"], dtype=float), (dim,))
            hi = np.broadcast_to(np.asarray(d["upper"], dtype=float), (dim,))
            return cls.box(lo, hi)
        return cls(kind, dim)


def asymptotic_cone(x_set: SetDescriptor, gamma: float) -> SetDescriptor:
    """Closed-form rate-``gamma`` asymptotic cone of a supported set.

    For ``gamma > 0`` this is the horizon cone, for ``gamma < 0`` the tangent
    cone at the origin.  Combinations without a closed form here raise
    :class:`UnsupportedGeometryError`.
    """
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    kind, dim = x_set.kind, x_set.dim
    if x_set.is_cone:
        return x_set
    if kind is SetKind.BALL:
        if gamma > 0:
            return SetDescriptor.zero(dim)
        return SetDescriptor.full(dim)  # origin is interior since radius > 0
    # box
    lo, hi = np.array(x_set.lower), np.array(x_set.upper)
    if gamma > 0:
        if np.all(np.isfinite(hi)):
            return SetDescriptor.zero(dim)
        if np.all(np.isinf(hi)):
            return SetDescriptor.orthant(dim)
        raise UnsupportedGeometryError(
            "horizon cone of a box with mixed finite/infinite upper bounds"
        )
    if np.all(lo == 0) and np.all(hi > 0):
        return SetDescriptor.orthant(dim)
    if np.all(lo < 0) and np.all(hi > 0):
        return SetDescriptor.full(dim)
    raise UnsupportedGeometryError(
        f"tangent cone at the origin of box lower={x_set.lower}, upper={x_set.upper}"
    )


def sample_unit_directions(cone: SetDescriptor, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform directions on the unit sphere intersected with a cone."""
    if not cone.is_cone:
        raise ValueError("directions can only be sampled from a cone descriptor")
    if cone.kind is SetKind.ZERO:
        return np.zeros((0, cone.dim))
    G = rng.standard_normal((count, cone.dim))
    if cone.kind is SetKind.NONNEG_ORTHANT:
        G = np.abs(G)
    norms = np.linalg.norm(G, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return G / norms
