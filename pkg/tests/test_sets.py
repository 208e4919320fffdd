import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import box_projection_kkt_gap, grid_argmin
from splitep.linalg import make_rng
from splitep.sets import (BoxSet, HalfLine, InverseSqrtEpigraph, UnsupportedProjection, WholeSpace,
                          boundary_foot, project_box)

BOX = BoxSet.cube(2, -1, 5)


def test_interior_point_fixed():
    assert np.array_equal(project_box([0.0, 0.0], BOX), [0.0, 0.0])


def test_clamp():
    assert np.array_equal(project_box([7.0, -3.0], BOX), [5.0, -1.0])


def test_empty_box_rejected():
    with pytest.raises(ValueError):
        BoxSet([0.0, 1.0], [1.0, 0.0])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        project_box([1.0, 2.0, 3.0], BOX)


def test_random_projections_against_kkt_and_grid():
    rng = make_rng(0)
    for _ in range(100):
        dim = int(rng.integers(1, 6))
        lo = rng.uniform(-5, 0, dim)
        hi = lo + rng.uniform(0, 5, dim)
        box = BoxSet(lo, hi)
        x = rng.uniform(-10, 10, dim)
        z = project_box(x, box)
        assert box.contains(z)
        assert box_projection_kkt_gap(x, z, lo, hi) <= 1e-12
    # 2-D: brute-force grid search of ||y - x|| over the box
    for _ in range(20):
        x = rng.uniform(-4, 8, 2)
        g = np.arange(-1, 5 + 1e-9, 1e-3)
        gx = g[np.argmin(np.abs(g - x[0]))]
        gy = g[np.argmin(np.abs(g - x[1]))]
        assert np.allclose(project_box(x, BOX), [gx, gy], atol=1e-3)


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=200)
@given(arrays(float, 4, elements=finite), arrays(float, 4, elements=finite))
def test_firmly_nonexpansive(x, y):
    box = BoxSet.cube(4, -1, 5)
    px, py = box.project(x), box.project(y)
    lhs = (px - py) @ (x - y)
    assert lhs >= (px - py) @ (px - py) - 1e-10 * max(1.0, abs(lhs))


@settings(max_examples=200)
@given(arrays(float, 3, elements=st.floats(-1, 5)), arrays(float, 3, elements=finite))
def test_pythagoras_inequality(x, y):
    box = BoxSet.cube(3, -1, 5)
    p = box.project(y)
    lhs = np.sum((x - p) ** 2) + np.sum((p - y) ** 2)
    rhs = np.sum((x - y) ** 2)
    assert lhs <= rhs + 1e-9 * max(1.0, rhs)


@given(arrays(float, 3, elements=finite))
def test_idempotent(y):
    box = BoxSet.cube(3, -2, 5)
    p = box.project(y)
    assert np.array_equal(box.project(p), p)


def test_whole_space_identity():
    x = np.array([3.0, -7.5])
    assert np.array_equal(WholeSpace(2).project(x), x)


class TestHalfLine:
    def test_projection_closed_form(self):
        rng = make_rng(3)
        for a, b in rng.uniform(-5, 5, (50, 2)):
            assert np.array_equal(HalfLine().project([a, b]), [max(1.0, a), 0.0])

    def test_disjoint_from_epigraph(self):
        Q = InverseSqrtEpigraph()
        for t in [1.0, 2.0, 1e3, 1e9]:
            assert HalfLine().contains([t, 0.0]) and not Q.contains([t, 0.0])


class TestEpigraphProjection:
    def test_x_equal_one(self):
        t = boundary_foot(1.0)
        # root of 2t^3 - 2t^2 - 1, 30-digit reference
        assert t == pytest.approx(1.29715650817742437, abs=1e-13)
        assert t > 1.0 + 1.0 / 4.0

    def test_x_equal_four(self):
        t = boundary_foot(4.0)
        assert t == pytest.approx(4.03077463916727988, abs=1e-13)
        assert t > 4.0 + 1.0 / 64.0

    def test_x_equal_two_against_grid(self):
        t_grid = grid_argmin(lambda t: (t - 2.0) ** 2 + 1.0 / t, 2.0, 3.0, 1e-6)
        assert boundary_foot(2.0) == pytest.approx(t_grid, abs=1e-5)

    @pytest.mark.parametrize("x", [1.0, 1.5, 3.0, 10.0, 1e4])
    def test_derivative_residual_and_membership(self, x):
        t = boundary_foot(x)
        # rounding t to a float costs up to ulp(x) in 2 (t - x)
        assert abs(2 * (t - x) - 1 / t ** 2) <= max(1e-12, 4 * np.spacing(x))
        p = InverseSqrtEpigraph().project([x, 0.0])
        assert p[0] == t and p[1] == 1 / math.sqrt(t)
        assert InverseSqrtEpigraph().contains(p, 1e-10)

    def test_projection_characterization(self):
        # <x - p, q - p> <= 0 on sampled points q of the set
        Q = InverseSqrtEpigraph()
        x = np.array([2.0, 0.0])
        p = Q.project(x)
        rng = make_rng(1)
        for _ in range(1000):
            s = rng.uniform(1, 10)
            q = np.array([s, 1 / math.sqrt(s) + rng.exponential()])
            assert (x - p) @ (q - p) <= 1e-12

    def test_points_in_set_returned(self):
        q = np.array([4.0, 0.5])
        assert np.array_equal(InverseSqrtEpigraph().project(q), q)

    def test_unsupported_input(self):
        with pytest.raises(UnsupportedProjection):
            InverseSqrtEpigraph().project([0.5, -3.0])
