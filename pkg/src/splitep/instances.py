"""Seeded generators for Nash-Cournot-style split equilibrium test problems,
plus the two fixed counterexample instances.

Draw order for one spectral pair of size ``d``: ``d`` uniform values in
``[-10, 0]``, ``d`` uniform values in ``[1, 10]``, the orthogonal matrix for
the negative part, the orthogonal matrix for the positive part. An instance
draws the pairs for ``f`` (or each ``f_i``), then for ``F`` (or each
``F_j``), then ``A`` row-major. The resolvent-friendly ``F`` skips the
negative part entirely.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Tuple

import numpy as np

from .bifunctions import IndicatorBifunction, QuadraticBifunction, RotationBifunction
from .linalg import make_rng, random_orthogonal, uniform_matrix
from .problem import ScepInstance, SepInstance
from .sets import BoxSet, HalfLine, InverseSqrtEpigraph, WholeSpace

VARIANTS = ("general", "resolvent_friendly", "scep")

NEG_RANGE = (-10.0, 0.0)
POS_RANGE = (1.0, 10.0)


@dataclass(frozen=True)
class InstanceSpec:
    m: int
    k: int
    seed: int = 0
    variant: str = "general"
    n_f: int = 1
    n_F: int = 1
    box_C: Tuple[float, float] = (-1.0, 5.0)
    box_Q: Tuple[float, float] = (-2.0, 5.0)
    A_range: Tuple[float, float] = (-10.0, 10.0)

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise ValueError("m and k must be >= 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.n_f < 1 or self.n_F < 1:
            raise ValueError("component counts must be >= 1")
        if self.variant != "scep" and (self.n_f, self.n_F) != (1, 1):
            raise ValueError("component counts other than 1 need variant 'scep'")
        for name in ("box_C", "box_Q", "A_range"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (float(lo), float(hi)))
            if lo > hi:
                raise ValueError(f"{name} is empty")

    def to_dict(self):
        d = asdict(self)
        for name in ("box_C", "box_Q", "A_range"):
            d[name] = list(d[name])
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown instance spec field(s): {sorted(unknown)}")
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in d.items()})


def spectral_pair(lam_neg, lam_pos, Q_neg, Q_pos):
    """Assemble ``(P, R)`` with ``R = Q_pos diag(lam_pos) Q_pos^T`` and
    ``P = R - Q_neg diag(lam_neg) Q_neg^T``.

    ``R`` is symmetric PSD when ``lam_pos >= 0`` and ``R - P`` is NSD when
    ``lam_neg <= 0``.
    """
    R = (Q_pos * lam_pos) @ Q_pos.T
    T = (Q_neg * lam_neg) @ Q_neg.T
    R = 0.5 * (R + R.T)
    T = 0.5 * (T + T.T)
    return R - T, R


def generate_spectral_pair(dim, rng):
    """Random ``(P, R)``: ``R`` symmetric PSD, ``R - P`` NSD."""
    lam_neg = rng.uniform(*NEG_RANGE, size=dim)
    lam_pos = rng.uniform(*POS_RANGE, size=dim)
    Q_neg = random_orthogonal(dim, rng)
    Q_pos = random_orthogonal(dim, rng)
    return spectral_pair(lam_neg, lam_pos, Q_neg, Q_pos)


def generate_psd(dim, rng):
    """Random symmetric PSD matrix with eigenvalues in ``[1, 10]``."""
    lam = rng.uniform(*POS_RANGE, size=dim)
    Qm = random_orthogonal(dim, rng)
    R = (Qm * lam) @ Qm.T
    return 0.5 * (R + R.T)


def _boxes(spec):
    return BoxSet.cube(spec.m, *spec.box_C), BoxSet.cube(spec.k, *spec.box_Q)


def _check_zero_feasible(C, Q):
    if not C.contains(np.zeros(C.dim)) or not Q.contains(np.zeros(Q.dim)):
        return False
    return True


def generate_sep_instance(spec: InstanceSpec) -> SepInstance:
    """Build the instance described by ``spec`` (variants general / resolvent_friendly).

    ``p = q = 0`` so ``x* = 0`` solves the problem whenever both boxes
    contain the origin; ``known_solution`` is ``None`` otherwise.
    """
    if spec.variant == "scep":
        raise ValueError("use generate_scep_instance for variant 'scep'")
    rng = make_rng(spec.seed)
    f = QuadraticBifunction(*generate_spectral_pair(spec.m, rng))
    if spec.variant == "resolvent_friendly":
        N = generate_psd(spec.k, rng)
        F = QuadraticBifunction(N, N.copy())
    else:
        F = QuadraticBifunction(*generate_spectral_pair(spec.k, rng))
    A = uniform_matrix(spec.k, spec.m, *spec.A_range, rng)
    C, Q = _boxes(spec)
    xstar = np.zeros(spec.m) if _check_zero_feasible(C, Q) else None
    return SepInstance(C, Q, A, f, F, xstar, meta={"spec": spec.to_dict()})


def generate_scep_instance(spec: InstanceSpec) -> ScepInstance:
    """``n_f`` components on ``C`` and ``n_F`` on ``Q`` sharing one ``A``."""
    rng = make_rng(spec.seed)
    fs = [QuadraticBifunction(*generate_spectral_pair(spec.m, rng)) for _ in range(spec.n_f)]
    Fs = [QuadraticBifunction(*generate_spectral_pair(spec.k, rng)) for _ in range(spec.n_F)]
    A = uniform_matrix(spec.k, spec.m, *spec.A_range, rng)
    C, Q = _boxes(spec)
    xstar = np.zeros(spec.m) if _check_zero_feasible(C, Q) else None
    return ScepInstance(C, Q, A, fs, Fs, xstar, meta={"spec": spec.to_dict()})


def generate_instance(spec: InstanceSpec):
    if spec.variant == "scep":
        return generate_scep_instance(spec)
    return generate_sep_instance(spec)


def make_rotation_instance() -> SepInstance:
    """Unconstrained 2-D problem with ``f = F = x1 y2 - x2 y1`` and ``A = I``.

    The origin is the unique solution, yet ``f(y, 0) = 0`` for every ``y``.
    """
    rot = RotationBifunction()
    return SepInstance(WholeSpace(2), WholeSpace(2), np.eye(2), rot, rot, np.zeros(2),
                       meta={"name": "rotation"})


def make_empty_solution_instance() -> SepInstance:
    """Half-line ``C`` and inverse-sqrt epigraph ``Q``: disjoint, so no solution."""
    C, Q = HalfLine(), InverseSqrtEpigraph()
    return SepInstance(C, Q, np.eye(2), IndicatorBifunction(C), IndicatorBifunction(Q), None,
                       meta={"name": "empty_solution"})


def verify_known_solution(inst, n_samples=1000, seed=0, tol=1e-10):
    """Sample points of ``C`` and ``Q`` and check every bifunction is
    nonnegative at the known solution. Boxes only. Returns the worst value."""
    xstar = inst.known_solution
    if xstar is None:
        raise ValueError("instance has no known solution")
    rng = make_rng(seed)
    C, Q = inst.C, inst.Q
    ustar = inst.A @ xstar
    if not C.contains(xstar) or not Q.contains(ustar):
        return -np.inf
    worst = np.inf
    for _ in range(n_samples):
        y = rng.uniform(C.lo, C.hi)
        v = rng.uniform(Q.lo, Q.hi)
        for f in inst.f_list:
            worst = min(worst, f(xstar, y))
        for F in inst.F_list:
            worst = min(worst, F(ustar, v))
    if worst < -tol:
        raise AssertionError(f"known solution fails: min bifunction value {worst:.3e}")
    return worst
