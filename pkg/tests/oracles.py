"""Independent reference computations used only by the tests."""
import itertools

import numpy as np


def jacobi_eigenvalues(S, sweeps=100, tol=1e-15):
    """Cyclic Jacobi rotations on a symmetric matrix."""
    S = np.array(S, dtype=float)
    n = S.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(S, -1) ** 2))
        if off <= tol * np.sqrt(np.sum(S ** 2)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if S[p, q] == 0.0:
                    continue
                theta = (S[q, q] - S[p, p]) / (2.0 * S[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                S = J.T @ S @ J
    return np.sort(np.diag(S))


def jacobi_spectral_norm(A):
    A = np.asarray(A, dtype=float)
    return float(np.sqrt(max(jacobi_eigenvalues(A.T @ A)[-1], 0.0)))


def box_qp_enumerate(M, linear, lo, hi):
    """Exact minimizer of <Mv, v> + <linear, v> over a box by trying every
    active set (each coordinate at lo, at hi, or free) and keeping the best
    feasible stationary point."""
    H = M + M.T
    n = len(lo)
    best, best_val = None, np.inf
    for pattern in itertools.product((0, 1, 2), repeat=n):
        v = np.zeros(n)
        free = [i for i, p in enumerate(pattern) if p == 2]
        fixed = [i for i, p in enumerate(pattern) if p != 2]
        for i in fixed:
            v[i] = lo[i] if pattern[i] == 0 else hi[i]
        if free:
            Hff = H[np.ix_(free, free)]
            rhs = -(linear[free] + H[np.ix_(free, fixed)] @ v[fixed]) if fixed else -linear[free]
            try:
                v[free] = np.linalg.solve(Hff, rhs)
            except np.linalg.LinAlgError:
                continue
        if np.any(v < lo - 1e-12) or np.any(v > hi + 1e-12):
            continue
        val = v @ M @ v + linear @ v
        if val < best_val:
            best, best_val = v, val
    return best


def box_projection_kkt_gap(x, z, lo, hi):
    """max over box vertices y of <x - z, y - z>; nonpositive iff z = P(x).

    The map y -> <x - z, y - z> is linear, so its maximum over the box is
    attained at a vertex."""
    d = x - z
    y = np.where(d > 0, hi, lo)
    return float(d @ (y - z))


def grid_argmin(fun, a, b, step):
    t = np.arange(a, b + step / 2, step)
    return float(t[np.argmin(fun(t))])
