"""Bifunction oracles: values ``f(x, y)`` and diagonal subgradients."""
from __future__ import annotations

import numpy as np

from .linalg import as_vector


class SubgradientError(ValueError):
    """The oracle cannot supply a diagonal subgradient at the given point."""


class Bifunction:
    """Base class. Subclasses implement ``value`` and ``subgradient``."""

    dim: int

    def value(self, x, y) -> float:
        raise NotImplementedError

    def subgradient(self, x, eps=0.0) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x, y):
        return eval_bifunction(self, x, y)


def eval_bifunction(f: Bifunction, x, y) -> float:
    """Evaluate ``f(x, y)`` after checking both points have ``f.dim`` entries."""
    x = as_vector(x, f.dim, "x")
    y = as_vector(y, f.dim, "y")
    return float(f.value(x, y))


def diagonal_subgradient(f: Bifunction, x, eps=0.0) -> np.ndarray:
    """Return an element of the eps-subdifferential of ``f(x, .)`` at ``x``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = as_vector(x, f.dim, "x")
    return f.subgradient(x, eps)


class QuadraticBifunction(Bifunction):
    """``f(x, y) = <P x + R y + c, y - x>``.

    With ``R`` symmetric the gradient of ``f(x, .)`` at ``y = x`` is
    ``(P + R) x + c``; that exact gradient lies in every eps-subdifferential,
    so ``eps`` is ignored.
    """

    def __init__(self, P, R, c=None):
        P = np.array(P, dtype=float)
        R = np.array(R, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape != R.shape:
            raise ValueError(f"P and R must be square of equal shape, got {P.shape}, {R.shape}")
        self.dim = P.shape[0]
        c = np.zeros(self.dim) if c is None else as_vector(c, self.dim, "c")
        self.P, self.R, self.c = P, R, np.array(c)
        self._G = P + R
        for a in (self.P, self.R, self.c, self._G):
            a.setflags(write=False)

    @property
    def resolvent_friendly(self):
        """True when both coefficient matrices coincide, so the resolvent is a prox."""
        return np.array_equal(self.P, self.R)

    def value(self, x, y):
        return (self.P @ x + self.R @ y + self.c) @ (y - x)

    def subgradient(self, x, eps=0.0):
        return self._G @ x + self.c

    def __eq__(self, other):
        return (isinstance(other, QuadraticBifunction) and np.array_equal(self.P, other.P)
                and np.array_equal(self.R, other.R) and np.array_equal(self.c, other.c))


class RotationBifunction(Bifunction):
    """``f(x, y) = x1 y2 - x2 y1`` on R^2. Antisymmetric, never paramonotone."""

    dim = 2

    def value(self, x, y):
        return x[0] * y[1] - x[1] * y[0]

    def subgradient(self, x, eps=0.0):
        return np.array([-x[1], x[0]])

    def __eq__(self, other):
        return isinstance(other, RotationBifunction)


class IndicatorBifunction(Bifunction):
    """``f(x, y) = delta_S(y) - delta_S(x)`` for a set ``S``.

    Defined on ``S x S`` only, where it vanishes identically; zero is a
    subgradient at every point of ``S``.
    """

    def __init__(self, target, tol=1e-12):
        self.target = target
        self.dim = target.dim
        self.tol = tol

    def value(self, x, y):
        inside_x = self.target.contains(x, self.tol)
        inside_y = self.target.contains(y, self.tol)
        if inside_x and inside_y:
            return 0.0
        if inside_x:
            return np.inf
        if inside_y:
            return -np.inf
        return np.nan

    def subgradient(self, x, eps=0.0):
        if not self.target.contains(x, self.tol):
            raise SubgradientError(f"indicator bifunction has no subgradient off its set: {x}")
        return np.zeros(self.dim)
