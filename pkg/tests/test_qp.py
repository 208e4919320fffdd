import numpy as np
import pytest

from oracles import box_qp_enumerate
from splitep.bifunctions import QuadraticBifunction
from splitep.instances import generate_psd, generate_spectral_pair
from splitep.linalg import make_rng
from splitep.qp import (NonconvexQPError, QPConvergenceError, prox_quadratic, solve_box_qp,
                        solve_resolvent)
from splitep.sets import BoxSet, project_box


def _fixed_point_residual(M, b, box, v):
    H = M + M.T
    s = 1.0 / (np.max(np.abs(np.linalg.eigvalsh(H))) + 1.0)
    return np.linalg.norm(v - box.project(v - s * (H @ v + b)))


class TestBoxQP:
    def test_interior_minimum(self):
        box = BoxSet.cube(4, -1, 5)
        assert np.allclose(solve_box_qp(np.eye(4), np.zeros(4), box), 0.0, atol=1e-10)

    def test_clipped_to_corner(self):
        box = BoxSet.cube(3, -1, 5)
        assert np.allclose(solve_box_qp(np.eye(3), np.full(3, -20.0), box), 5.0)

    def test_random_3d_against_enumeration(self):
        rng = make_rng(8)
        for _ in range(30):
            B = rng.normal(size=(3, 3))
            M = B @ B.T + rng.normal(size=(3, 3)) * 0.3
            M = M + 1e-3 * np.eye(3) if np.linalg.eigvalsh(M + M.T)[0] < 0 else M
            if np.linalg.eigvalsh(M + M.T)[0] < 1e-6:
                continue
            b = rng.uniform(-20, 20, 3)
            box = BoxSet(rng.uniform(-3, 0, 3), rng.uniform(0.5, 4, 3))
            v = solve_box_qp(M, b, box, tol=1e-10)
            ref = box_qp_enumerate(M, b, box.lo, box.hi)
            assert np.allclose(v, ref, atol=1e-6)
            assert _fixed_point_residual(M, b, box, v) <= 1e-10

    def test_grid_brute_force_2d(self):
        M = np.array([[2.0, 0.5], [0.0, 1.0]])
        b = np.array([-3.0, 4.0])
        box = BoxSet([-1.0, -2.0], [1.0, 2.0])
        g = np.arange(-2.0, 2.0 + 1e-9, 1e-3)
        X, Y = np.meshgrid(g[(g >= -1) & (g <= 1)], g, indexing="ij")
        V = 2 * X * X + 0.5 * X * Y + Y * Y + b[0] * X + b[1] * Y
        i = np.unravel_index(np.argmin(V), V.shape)
        assert np.allclose(solve_box_qp(M, b, box), [X[i], Y[i]], atol=1e-3)

    def test_nonconvex_rejected(self):
        with pytest.raises(NonconvexQPError):
            solve_box_qp(-np.eye(2), np.zeros(2), BoxSet.cube(2, -1, 1))

    def test_iteration_cap(self):
        with pytest.raises(QPConvergenceError) as info:
            solve_box_qp(np.diag([1.0, 100.0]), np.array([1.0, -3.0]), BoxSet.cube(2, -5, 5),
                         tol=1e-14, max_iter=3)
        assert info.value.residual > 1e-14


def _eq1_min(F, r, u, z, box, rng, n=100):
    ys = rng.uniform(box.lo, box.hi, size=(n, box.dim))
    return min(F(z, y) + (1.0 / r) * (y - z) @ (z - u) for y in ys)


class TestResolvent:
    def test_zero_matrix_is_projection(self):
        box = BoxSet.cube(3, -2, 5)
        F = QuadraticBifunction(np.zeros((3, 3)), np.zeros((3, 3)))
        u = np.array([7.0, -4.0, 1.0])
        assert np.allclose(solve_resolvent(F, 1.0, u, box), project_box(u, box))

    def test_small_r_limit(self):
        rng = make_rng(1)
        N = generate_psd(3, rng)
        F = QuadraticBifunction(N, N)
        box = BoxSet.cube(3, -2, 5)
        u = np.array([1.0, 0.5, -1.0])
        assert np.allclose(solve_resolvent(F, 1e-6, u, box), u, atol=1e-3)

    def test_identity_closed_form(self):
        # 2 M z + (z - u)/r = 0  =>  z = (I + 2 r M)^-1 u
        F = QuadraticBifunction(np.eye(2), np.eye(2))
        z = solve_resolvent(F, 1.0, np.array([2.0, 2.0]), BoxSet.cube(2, -2, 5))
        assert np.allclose(z, [2.0 / 3.0, 2.0 / 3.0], atol=1e-9)

    def test_prox_closed_form(self):
        # argmin <v, v> + ||v - u||^2: 2v + 2(v - u) = 0  =>  v = u/2
        z = prox_quadratic(np.eye(2), 1.0, np.array([2.0, 2.0]), BoxSet.cube(2, -2, 5))
        assert np.allclose(z, [1.0, 1.0], atol=1e-9)

    def test_resolvent_is_prox_with_doubled_parameter(self):
        rng = make_rng(4)
        N = generate_psd(4, rng)
        box = BoxSet.cube(4, -2, 5)
        u = rng.uniform(-6, 6, 4)
        assert np.allclose(solve_resolvent(QuadraticBifunction(N, N), 0.7, u, box),
                           prox_quadratic(N, 1.4, u, box), atol=1e-10)

    def test_resolvent_inequality(self):
        rng = make_rng(2)
        for _ in range(10):
            k = int(rng.integers(2, 8))
            N = generate_psd(k, rng)
            F = QuadraticBifunction(N, N)
            box = BoxSet.cube(k, -2, 5)
            u = rng.uniform(-10, 10, k)
            r = float(rng.uniform(0.1, 3.0))
            z = solve_resolvent(F, r, u, box)
            assert box.contains(z)
            assert _eq1_min(F, r, u, z, box, rng) >= -1e-6

    def test_general_bifunction_refused(self):
        F = QuadraticBifunction(*generate_spectral_pair(3, make_rng(0)))
        with pytest.raises(ValueError):
            solve_resolvent(F, 1.0, np.zeros(3), BoxSet.cube(3, -2, 5))
