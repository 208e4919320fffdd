"""Dense numeric substrate: seeded generators, operator norms, random matrices.

Vectors and matrices are plain float64 ``numpy`` arrays. Every random draw
goes through :func:`make_rng`, which wraps the counter-based Philox
generator so that a seed fixes the whole draw sequence. Matrices are
filled row-major, one draw call per matrix.
"""
from __future__ import annotations

import numpy as np

_EPS = np.finfo(float).eps


class NormEstimationError(RuntimeError):
    """Power iteration did not settle within the iteration cap."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


def make_rng(seed: int) -> np.random.Generator:
    """Return a Philox-backed generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def as_vector(x, dim=None, name="vector") -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"{name} has dimension {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _start_vectors(n):
    yield np.ones(n)
    yield np.arange(1.0, n + 1.0)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        yield e


def power_iteration_norm(A, tol=1e-10, max_iter=10_000) -> float:
    """Estimate the spectral norm of ``A`` by power iteration on ``A.T @ A``.

    The start vector is the normalized all-ones vector. If that vector lies in
    the null space of ``A`` the next deterministic start is tried, so the
    result depends only on ``A``.

    Args:
        A: dense matrix, not identically zero.
        tol: relative accuracy target for the returned estimate.
        max_iter: cap on power steps.

    Returns:
        The estimate (not inflated). Rayleigh quotients approach the largest
        singular value from below.

    Raises:
        ValueError: ``A`` is zero or ``tol`` is not positive.
        NormEstimationError: no convergence within ``max_iter``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not np.any(A):
        raise ValueError("A must be nonzero")
    # Rayleigh-quotient changes below this are noise.
    stop = max(0.01 * tol, 8 * _EPS)
    for v in _start_vectors(A.shape[1]):
        v = v / np.linalg.norm(v)
        Av = A @ v
        if np.linalg.norm(Av) == 0.0:
            continue
        sigma = np.linalg.norm(Av)
        for _ in range(max_iter):
            w = A.T @ Av
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            v = w / nw
            Av = A @ v
            new_sigma = np.linalg.norm(Av)
            if abs(new_sigma - sigma) <= stop * new_sigma:
                return float(new_sigma)
            sigma = new_sigma
        else:
            raise NormEstimationError(
                f"power iteration did not converge in {max_iter} steps", float(sigma))
    raise NormEstimationError("no start vector escaped the null space of A", 0.0)


def operator_norm(A, tol=1e-10, max_iter=10_000) -> float:
    """Spectral norm estimate inflated by ``1 + tol``.

    The inflation makes ``1 / operator_norm(A)**2`` a safe upper bound for
    step sizes that must not exceed ``1 / ||A||**2``.
    """
    return power_iteration_norm(A, tol, max_iter) * (1.0 + tol)


def uniform_matrix(rows, cols, lo, hi, rng) -> np.ndarray:
    """I.i.d. uniform entries in ``[lo, hi]``, filled row-major."""
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    return rng.uniform(lo, hi, size=(rows, cols))


def _mgs(G):
    """Modified Gram-Schmidt with one reorthogonalization sweep.

    Returns ``None`` when a column collapses (numerically rank deficient).
    """
    n = G.shape[1]
    Q = G.copy()
    for j in range(n):
        orig = np.linalg.norm(G[:, j])
        for _ in range(2):
            for i in range(j):
                Q[:, j] -= (Q[:, i] @ Q[:, j]) * Q[:, i]
        nrm = np.linalg.norm(Q[:, j])
        if nrm <= 1e-10 * orig or nrm == 0.0:
            return None
        Q[:, j] /= nrm
    return Q


def random_orthogonal(dim, rng, max_retries=8) -> np.ndarray:
    """Orthogonal matrix from the QR factor of a standard normal draw."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    for _ in range(max_retries):
        Q = _mgs(rng.standard_normal((dim, dim)))
        if Q is not None:
            return Q
    raise RuntimeError(f"rank-deficient normal draws {max_retries} times in a row")
