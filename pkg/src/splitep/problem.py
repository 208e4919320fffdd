"""Assembled split equilibrium problems."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bifunctions import Bifunction
from .linalg import as_vector, operator_norm
from .sets import ConvexSet


@dataclass(frozen=True, eq=False)
class SepInstance:
    """Find ``x`` in ``C`` solving EP(f, C) whose image ``A x`` solves EP(F, Q).

    ``meta`` carries provenance (generator spec, seed) and is not used by the
    solvers.
    """

    C: ConvexSet
    Q: ConvexSet
    A: np.ndarray
    f: Bifunction
    F: Bifunction
    known_solution: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2:
            raise ValueError("A must be a matrix")
        if A.shape != (self.Q.dim, self.C.dim):
            raise ValueError(f"A has shape {A.shape}, expected (dim Q, dim C) = "
                             f"{(self.Q.dim, self.C.dim)}")
        if self.f.dim != self.C.dim or self.F.dim != self.Q.dim:
            raise ValueError("bifunction dimensions do not match their sets")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        if self.known_solution is not None:
            object.__setattr__(self, "known_solution",
                               as_vector(self.known_solution, self.C.dim, "known_solution"))

    @property
    def f_list(self):
        return [self.f]

    @property
    def F_list(self):
        return [self.F]

    def norm_A(self, tol=1e-10):
        """Inflated spectral norm of ``A`` (cached)."""
        return _cached_norm(self, tol)


@dataclass(frozen=True, eq=False)
class ScepInstance:
    """Common solution of several equilibrium problems on each side of ``A``."""

    C: ConvexSet
    Q: ConvexSet
    A: np.ndarray
    f_list: Sequence[Bifunction]
    F_list: Sequence[Bifunction]
    known_solution: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.f_list) < 1 or len(self.F_list) < 1:
            raise ValueError("need at least one bifunction on each side")
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape != (self.Q.dim, self.C.dim):
            raise ValueError(f"A has shape {A.shape}, expected {(self.Q.dim, self.C.dim)}")
        if any(f.dim != self.C.dim for f in self.f_list):
            raise ValueError("every f_i must live on C")
        if any(F.dim != self.Q.dim for F in self.F_list):
            raise ValueError("every F_j must live on Q")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "f_list", tuple(self.f_list))
        object.__setattr__(self, "F_list", tuple(self.F_list))
        if self.known_solution is not None:
            object.__setattr__(self, "known_solution",
                               as_vector(self.known_solution, self.C.dim, "known_solution"))

    @classmethod
    def from_sep(cls, inst: SepInstance):
        return cls(inst.C, inst.Q, inst.A, [inst.f], [inst.F], inst.known_solution,
                   dict(inst.meta))

    def norm_A(self, tol=1e-10):
        return _cached_norm(self, tol)


def _cached_norm(inst, tol):
    cache = inst.__dict__.setdefault("_norm_cache", {})
    if tol not in cache:
        cache[tol] = operator_norm(inst.A, tol)
    return cache[tol]
