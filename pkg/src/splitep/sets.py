"""Closed convex feasible sets with metric projection oracles."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import bisect

from .linalg import as_vector


class ConvexSet:
    """Base class: a closed convex set in R^dim with a projection oracle."""

    dim: int

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x, tol=0.0) -> bool:
        raise NotImplementedError

    def _check(self, x):
        return as_vector(x, self.dim, "point")


class BoxSet(ConvexSet):
    """Axis-aligned box ``{x : lo <= x <= hi}``."""

    def __init__(self, lo, hi):
        lo = as_vector(lo, name="lo")
        hi = as_vector(hi, lo.shape[0], name="hi")
        if np.any(lo > hi):
            raise ValueError("box is empty: some lo_i > hi_i")
        self.lo = lo
        self.hi = hi
        self.dim = lo.shape[0]
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)

    @classmethod
    def cube(cls, dim, lo, hi):
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    def project(self, x):
        return project_box(x, self)

    def contains(self, x, tol=0.0):
        x = self._check(x)
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def __eq__(self, other):
        return (isinstance(other, BoxSet) and np.array_equal(self.lo, other.lo)
                and np.array_equal(self.hi, other.hi))

    def __repr__(self):
        return f"BoxSet(dim={self.dim})"


def project_box(x, box: BoxSet) -> np.ndarray:
    """Componentwise clamp of ``x`` into ``box``."""
    x = as_vector(x, box.dim, "point")
    return np.minimum(box.hi, np.maximum(box.lo, x))


class WholeSpace(ConvexSet):
    """All of R^dim; projection is the identity."""

    def __init__(self, dim):
        self.dim = int(dim)

    def project(self, x):
        return self._check(x).copy()

    def contains(self, x, tol=0.0):
        self._check(x)
        return True

    def __eq__(self, other):
        return isinstance(other, WholeSpace) and other.dim == self.dim


class HalfLine(ConvexSet):
    """The ray ``{(t, 0) : t >= 1}`` in R^2."""

    dim = 2

    def project(self, x):
        x = self._check(x)
        return np.array([max(1.0, x[0]), 0.0])

    def contains(self, x, tol=0.0):
        x = self._check(x)
        return bool(x[0] >= 1.0 - tol and abs(x[1]) <= tol)

    def __eq__(self, other):
        return isinstance(other, HalfLine)


class UnsupportedProjection(ValueError):
    """The special-purpose projection oracle was called outside its domain."""


class InverseSqrtEpigraph(ConvexSet):
    """``{(x, y) : x >= 1, y >= 1/sqrt(x)}`` in R^2.

    Only two kinds of input are supported: points already in the set (returned
    unchanged) and points ``(x, 0)`` with ``x >= 1``, whose projection lies on
    the curved boundary.
    """

    dim = 2

    def contains(self, x, tol=0.0):
        x = self._check(x)
        return bool(x[0] >= 1.0 - tol and x[1] >= 1.0 / math.sqrt(max(x[0], 1.0)) - tol)

    def project(self, x):
        x = self._check(x)
        if self.contains(x):
            return x.copy()
        if x[1] != 0.0 or x[0] < 1.0:
            raise UnsupportedProjection(
                f"projection onto the set is only implemented for points (x, 0), x >= 1; got {x}")
        t = boundary_foot(float(x[0]))
        return np.array([t, 1.0 / math.sqrt(t)])


def boundary_foot(x1, xtol=1e-300) -> float:
    """Minimizer over ``t >= 1`` of ``(t - x1)**2 + 1/t`` for ``x1 >= 1``.

    The derivative ``2 (t - x1) - 1/t**2`` is negative at ``x1`` and positive
    at ``x1 + 1``. Bisection runs on the offset ``d = t - x1`` so the
    derivative is resolved to full relative precision even for large ``x1``.
    """
    if x1 < 1.0:
        raise UnsupportedProjection("x1 must be >= 1")

    def dh(d):
        t = x1 + d
        return 2.0 * d - 1.0 / (t * t)

    d = bisect(dh, 0.0, 1.0, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=2000)
    if abs(dh(d)) > 1e-12:
        raise RuntimeError(f"bisection residual {dh(d):.3e} exceeds 1e-12")
    return float(x1 + d)
