import numpy as np
import pytest

from splitep.instances import (InstanceSpec, generate_scep_instance, generate_sep_instance,
                               generate_spectral_pair, make_empty_solution_instance,
                               make_rotation_instance, spectral_pair, verify_known_solution)
from splitep.linalg import make_rng
from splitep.serialization import instance_fingerprint
from splitep.sets import BoxSet


def test_scalar_pair():
    P, R = spectral_pair(np.array([-3.0]), np.array([2.0]), np.eye(1), -np.eye(1))
    assert R[0, 0] == 2.0 and P[0, 0] == 5.0 and (R - P)[0, 0] == -3.0


@pytest.mark.parametrize("dim,seed", [(1, 0), (3, 1), (10, 2), (40, 3)])
def test_pair_spectra(dim, seed):
    P, R = generate_spectral_pair(dim, make_rng(seed))
    assert np.array_equal(R, R.T)
    assert np.linalg.eigvalsh(R)[0] >= -1e-8
    assert np.linalg.eigvalsh(0.5 * ((R - P) + (R - P).T))[-1] <= 1e-8


def test_pair_monotone_on_samples():
    rng = make_rng(9)
    P, R = generate_spectral_pair(6, rng)
    for _ in range(200):
        x, y = rng.uniform(-5, 5, (2, 6))
        fxy = (P @ x + R @ y) @ (y - x)
        fyx = (P @ y + R @ x) @ (x - y)
        assert fxy + fyx <= 1e-8 * np.sum((y - x) ** 2)


def test_sep_shapes_and_defaults():
    inst = generate_sep_instance(InstanceSpec(30, 20, seed=4))
    assert inst.A.shape == (20, 30)
    assert inst.C == BoxSet.cube(30, -1, 5) and inst.Q == BoxSet.cube(20, -2, 5)
    assert np.all(np.abs(inst.A) <= 10)
    assert np.array_equal(inst.known_solution, np.zeros(30))
    assert not np.any(inst.f.c) and not np.any(inst.F.c)


def test_zero_is_a_solution():
    for seed in range(5):
        inst = generate_sep_instance(InstanceSpec(6, 4, seed=seed))
        assert verify_known_solution(inst, 1000, seed) >= -1e-10


def test_deterministic():
    a = generate_sep_instance(InstanceSpec(8, 5, seed=77))
    b = generate_sep_instance(InstanceSpec(8, 5, seed=77))
    c = generate_sep_instance(InstanceSpec(8, 5, seed=78))
    assert instance_fingerprint(a) == instance_fingerprint(b) != instance_fingerprint(c)


def test_resolvent_friendly():
    inst = generate_sep_instance(InstanceSpec(8, 5, seed=1, variant="resolvent_friendly"))
    assert np.array_equal(inst.F.P, inst.F.R) and inst.F.resolvent_friendly
    assert not inst.f.resolvent_friendly
    assert verify_known_solution(inst) >= -1e-10


def test_scep_instance():
    inst = generate_scep_instance(InstanceSpec(6, 4, seed=3, variant="scep", n_f=3, n_F=2))
    assert len(inst.f_list) == 3 and len(inst.F_list) == 2
    z = np.zeros(6)
    assert all(f(z, z) == 0.0 for f in inst.f_list)
    assert verify_known_solution(inst) >= -1e-10


def test_scep_with_single_components_matches_sep():
    a = generate_scep_instance(InstanceSpec(6, 4, seed=3, variant="scep"))
    b = generate_sep_instance(InstanceSpec(6, 4, seed=3))
    assert np.array_equal(a.A, b.A)
    assert a.f_list[0] == b.f and a.F_list[0] == b.F


def test_spec_validation():
    with pytest.raises(ValueError):
        InstanceSpec(0, 3)
    with pytest.raises(ValueError):
        InstanceSpec(3, 3, variant="weird")
    with pytest.raises(ValueError):
        InstanceSpec(3, 3, n_f=2)


def test_rotation_instance():
    inst = make_rotation_instance()
    rng = make_rng(0)
    zero = np.zeros(2)
    for _ in range(100):
        x, y = rng.normal(size=(2, 2))
        assert inst.f(x, x) == 0.0
        assert inst.f(y, zero) == 0.0
        assert inst.f(x, y) == -inst.f(y, x)


def test_empty_solution_instance():
    inst = make_empty_solution_instance()
    assert inst.known_solution is None
    rng = make_rng(1)
    for a, b in rng.uniform(-3, 6, (50, 2)):
        assert np.array_equal(inst.C.project([a, b]), [max(1.0, a), 0.0])
    for t in rng.uniform(1, 100, 20):
        assert not inst.Q.contains([t, 0.0])
        assert np.array_equal(inst.f.subgradient(np.array([t, 0.0])), [0.0, 0.0])
