"""Extended Lagrange finite elements for Maxwell source and eigenvalue problems.

The discrete space is ``L_{h,0} + grad U_h``: continuous vector Lagrange
elements of order ``p`` with tangential boundary constraints, enriched by
gradients of scalar Lagrange elements of order ``p + 1``.
"""
from .assembly import PencilSystem, SourceSystem, assemble_pencil, assemble_source, load_vector
from .eigensolve import EigenResult, dense_gep, filter_spurious, shift_invert_eigs
from .estimators import MaxwellEigensolver
from .exceptions import (ConvergenceError, ExtLagError, FactorizationError, MeshError,
                         QuadratureError, SpaceError)
from .fespace import ExtendedSpace, build_extended_space, dof_counts, evaluate_field
from .harness import (ConvergenceTable, ManufacturedSolution, compute_rate, reference_spectrum,
                      run_eigen_study, run_recovery_study, run_source_study)
from .linalg import SourceSolution, SymmetricFactorization, error_norms, factorize, solve_saddle
from .mesh import SimplicialMesh, generate_domain, refine_red
from .quadrature import quadrature_rule
from .recovery import CorrectedEigenvalue, RecoveredField, estimator_eta, recover_curl, recovery_error

__version__ = "0.1.0"

__all__ = [
    "PencilSystem", "SourceSystem", "assemble_pencil", "assemble_source", "load_vector",
    "EigenResult", "dense_gep", "filter_spurious", "shift_invert_eigs", "MaxwellEigensolver",
    "ConvergenceError", "ExtLagError", "FactorizationError", "MeshError", "QuadratureError", "SpaceError",
    "ExtendedSpace", "build_extended_space", "dof_counts", "evaluate_field",
    "ConvergenceTable", "ManufacturedSolution", "compute_rate", "reference_spectrum",
    "run_eigen_study", "run_recovery_study", "run_source_study",
    "SourceSolution", "SymmetricFactorization", "error_norms", "factorize", "solve_saddle",
    "SimplicialMesh", "generate_domain", "refine_red", "quadrature_rule",
    "CorrectedEigenvalue", "RecoveredField", "estimator_eta", "recover_curl", "recovery_error",
]
