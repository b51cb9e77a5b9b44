"""Rational Gaudin models for sl(2) and sl(3): Bethe roots, eigenvectors and their verification."""

from .betheroots import BetheConfig, SolveReport, eigenvalue, multistart_solve, newton_solve
from .config import DEFAULT_SEED, TOL, Tolerances
from .gaudin import CollisionError, MarkedPoints, TensorSpace, make_space, marked_points
from .ketcalc import FormalKetSum, KetLabel, apply_P, evaluate, p_power_closed, p_series
from .liealg import SL2, SL3, casimir_terms, commutator
from .repmod import ModuleRep, build_module, build_sl2_module, build_sl3_module, casimir_scalar
from .verify import VerificationReport, dense_spectrum, eigen_residual, match_to_spectrum

__all__ = [
    "BetheConfig", "SolveReport", "eigenvalue", "multistart_solve", "newton_solve",
    "DEFAULT_SEED", "TOL", "Tolerances",
    "CollisionError", "MarkedPoints", "TensorSpace", "make_space", "marked_points",
    "FormalKetSum", "KetLabel", "apply_P", "evaluate", "p_power_closed", "p_series",
    "SL2", "SL3", "casimir_terms", "commutator",
    "ModuleRep", "build_module", "build_sl2_module", "build_sl3_module", "casimir_scalar",
    "VerificationReport", "dense_spectrum", "eigen_residual", "match_to_spectrum",
]
