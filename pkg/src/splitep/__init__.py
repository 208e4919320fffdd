"""Projection-only solvers for split equilibrium problems in R^n."""
from .algorithms import (IncompatibleInstanceError, NumericalError, pm_step, ppsm_step,
                         pspm_step, run_pm, run_ppsm, run_pspm, run_scep, scep_step)
from .bifunctions import (IndicatorBifunction, QuadraticBifunction, RotationBifunction,
                          diagonal_subgradient, eval_bifunction)
from .counterexamples import empty_solution_counterexample_run, rotation_counterexample_run
from .instances import (InstanceSpec, generate_instance, generate_scep_instance,
                        generate_sep_instance, generate_spectral_pair, make_empty_solution_instance,
                        make_rotation_instance)
from .linalg import make_rng, operator_norm, random_orthogonal, uniform_matrix
from .problem import ScepInstance, SepInstance
from .serialization import dump_instance, load_instance
from .qp import prox_quadratic, solve_box_qp, solve_resolvent
from .schedule import ParamSchedule
from .sets import BoxSet, HalfLine, InverseSqrtEpigraph, WholeSpace, project_box
from .trace import IterateTrace, StopRule

__version__ = "0.1.0"
