"""Krylov methods that solve a linear system together with its adjoint.

The solvers share one matrix-free iteration per step (one forward and
one adjoint product) and split it between an LQ-type primal method and
a quasi-minimum-residual adjoint method, over either the oblique
two-sided Lanczos process or the orthogonal tridiagonalization process.
"""

from .bilq import bicg_solve, bilq_solve
from .biorth import Breakdown, biorth_init, biorth_step
from .dual import bilqr_solve, trilqr_solve, usymlq_solve, usymqr_solve
from .functional import (FunctionalEstimate, SplineInterpolant, cubic_spline,
                         estimate_functional, gauss3_integrate)
from .linop import (LinearOperator, MatrixMarketError, SparseMatrix,
                    adjoint_probe, augmented_operator, from_sparse,
                    jacobi_scaled, read_matrix_market, write_matrix_market)
from .minres import minres_augmented_solve
from .problems import TestProblem, convdiff_2d, ode_1d, polar_poisson
from .qmr import qmr_solve
from .results import (ConvergenceRecord, DualSolution, InitializationBreakdown,
                      SolveResult, SolverError, StagnationError, Status,
                      StoppingRule, UndefinedTransferError)
from .rotations import GivensReflection, apply_reflection, sym_ortho
from .ssy import ssy_init, ssy_step

__version__ = "0.1.0"

__all__ = [
    "GivensReflection", "sym_ortho", "apply_reflection",
    "SparseMatrix", "LinearOperator", "from_sparse", "jacobi_scaled",
    "augmented_operator", "adjoint_probe",
    "read_matrix_market", "write_matrix_market", "MatrixMarketError",
    "biorth_init", "biorth_step", "ssy_init", "ssy_step", "Breakdown",
    "bilq_solve", "bicg_solve", "qmr_solve",
    "usymlq_solve", "usymqr_solve", "bilqr_solve", "trilqr_solve",
    "minres_augmented_solve",
    "TestProblem", "ode_1d", "convdiff_2d", "polar_poisson",
    "cubic_spline", "SplineInterpolant", "gauss3_integrate",
    "estimate_functional", "FunctionalEstimate",
    "Status", "StoppingRule", "ConvergenceRecord", "SolveResult",
    "DualSolution", "SolverError", "InitializationBreakdown",
    "StagnationError", "UndefinedTransferError",
    "__version__",
]
