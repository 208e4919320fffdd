"""Convex quadratic programs over boxes, and the quadratic resolvent built on them."""
from __future__ import annotations

import numpy as np

from .bifunctions import QuadraticBifunction
from .linalg import as_vector
from .sets import BoxSet


class NonconvexQPError(ValueError):
    pass


class QPConvergenceError(RuntimeError):
    def __init__(self, message, residual, x):
        super().__init__(message)
        self.residual = residual
        self.x = x


def solve_box_qp(M, linear, box: BoxSet, tol=1e-10, max_iter=200_000, x0=None):
    """Minimize ``<M v, v> + <linear, v>`` over ``box``.

    Accelerated projected gradient with step ``1/L``, ``L = ||M + M^T|| + 1``,
    and gradient-based restarts. Terminates once the projected-gradient
    fixed-point residual ``||v - P(v - grad/L)||`` is at most ``tol``.

    Raises:
        NonconvexQPError: ``M + M^T`` has an eigenvalue below ``-1e-8``.
        QPConvergenceError: residual still above ``tol`` after ``max_iter``.
    """
    M = np.asarray(M, dtype=float)
    n = box.dim
    if M.shape != (n, n):
        raise ValueError(f"M has shape {M.shape}, expected {(n, n)}")
    b = as_vector(linear, n, "linear")
    H = M + M.T
    eig = np.linalg.eigvalsh(H)
    if eig[0] < -1e-8:
        raise NonconvexQPError(f"objective is not convex: min eigenvalue {eig[0]:.3e}")
    step = 1.0 / (max(abs(eig[0]), abs(eig[-1])) + 1.0)
    lo, hi = box.lo, box.hi

    x = np.clip(np.zeros(n) if x0 is None else as_vector(x0, n, "x0"), lo, hi)
    y = x.copy()
    t = 1.0
    res = np.inf
    for _ in range(max_iter):
        g = H @ x + b
        res = np.linalg.norm(x - np.clip(x - step * g, lo, hi))
        if res <= tol:
            return x
        x_new = np.clip(y - step * (H @ y + b), lo, hi)
        if (y - x_new) @ (x_new - x) > 0:
            # momentum points uphill: restart
            t = 1.0
            y = x_new
        else:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            y = x_new + ((t - 1.0) / t_new) * (x_new - x)
            t = t_new
        x = x_new
    raise QPConvergenceError(f"box QP residual {res:.3e} > {tol:.1e} after {max_iter} iterations",
                             res, x)


def prox_quadratic(M, r, u, box: BoxSet, tol=1e-12):
    """``argmin { <M v, v> + (1/r) ||v - u||^2 : v in box }``."""
    if r <= 0:
        raise ValueError("r must be positive")
    M = np.asarray(M, dtype=float)
    u = as_vector(u, box.dim, "u")
    return solve_box_qp(M + np.eye(box.dim) / r, -2.0 * u / r, box, tol)


def solve_resolvent(F: QuadraticBifunction, r, u, box: BoxSet, tol=1e-12):
    """Resolvent of ``F(x, y) = <M x + M y + c, y - x>`` at ``u`` over ``box``.

    Returns the point ``z`` in the box with
    ``F(z, y) + (1/r) <y - z, z - u> >= 0`` for every ``y`` in the box.
    Since ``F(z, y) = g(y) - g(z)`` with ``g(v) = <M v, v> + <c, v>``, this
    ``z`` minimizes ``g(v) + (1/(2r)) ||v - u||^2``; for ``c = 0`` it equals
    ``prox_quadratic(M, 2r, u, box)``.

    Raises:
        ValueError: ``F`` has distinct coefficient matrices, so no prox form.
    """
    if not isinstance(F, QuadraticBifunction) or not F.resolvent_friendly:
        raise ValueError("resolvent is only available for quadratic bifunctions with P == R")
    if r <= 0:
        raise ValueError("r must be positive")
    u = as_vector(u, box.dim, "u")
    return solve_box_qp(F.R + np.eye(box.dim) / (2.0 * r), F.c - u / r, box, tol)
