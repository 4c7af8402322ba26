"""Estimator-style wrappers and input validation.

The solver is not a learner: "fitting" assembles and solves the pencil on a
mesh, and ``predict`` returns eigenvalues. The wrappers exist so the solver
composes with ``get_params``/``set_params``, ``clone`` and grid searches over
solver options.
"""
import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .eigensolve import dense_gep, shift_invert_eigs
from .assembly import assemble_pencil
from .fespace import ExtendedSpace
from .mesh import SimplicialMesh, generate_domain, normalize_domain
from .recovery import estimator_eta

BACKENDS = ("dense", "shift-invert")


def check_order(p):
    """Validate the element order (1 or 2)."""
    if isinstance(p, bool) or not isinstance(p, numbers.Integral) or p not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {p!r}")
    return int(p)


def check_positive(name, value, allow_none=True):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_mesh(X):
    """Accept a mesh, or a ``(domain, n)`` pair that generates one."""
    if isinstance(X, SimplicialMesh):
        return X
    if isinstance(X, tuple) and len(X) == 2:
        return generate_domain(normalize_domain(X[0]), X[1])
    raise TypeError(f"expected a SimplicialMesh or (domain, n), got {type(X).__name__}")


class MaxwellEigensolver(BaseEstimator):
    """Smallest Maxwell eigenvalues with the extended Lagrange element.

    Parameters
    ----------
    order : {1, 2}
    count : int
        Number of physical eigenpairs to keep.
    shift : float
        Target for shift-invert; required by that backend. A safe choice is
        half the smallest expected eigenvalue.
    backend : {'dense', 'shift-invert'}
    filter_tol : float, optional
        Spurious-mode filter tolerance; ``None`` uses the library default.

    Attributes
    ----------
    space_ : ExtendedSpace
    eigenvalues_ : ndarray
    eigenvectors_ : ndarray
    zero_mode_count_ : int
    """

    def __init__(self, order=1, count=8, shift=1.0, backend="shift-invert", filter_tol=None):
        self.order = order
        self.count = count
        self.shift = shift
        self.backend = backend
        self.filter_tol = filter_tol

    def _validate(self):
        check_order(self.order)
        if isinstance(self.count, bool) or not isinstance(self.count, numbers.Integral) or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        check_positive("shift", self.shift, allow_none=self.backend == "dense")
        check_positive("filter_tol", self.filter_tol)

    def fit(self, X, y=None):
        """Assemble and solve on mesh ``X``; ``y`` is ignored."""
        self._validate()
        mesh = check_mesh(X)
        space = ExtendedSpace(mesh, self.order)
        P = assemble_pencil(space)
        zt = 1e-6 * (self.shift or 1.0)
        if self.backend == "dense":
            res = dense_gep(P.A, P.B, k=self.count, zero_tol=zt, filter_tol=self.filter_tol)
        else:
            res = shift_invert_eigs(P.A, P.B, self.shift, min(self.count + 4, P.N1), n_vector=P.N1,
                                    zero_tol=zt, filter_tol=self.filter_tol)
        self.space_ = space
        self.eigenvalues_ = res.eigenvalues[:self.count]
        self.eigenvectors_ = res.eigenvectors[:, :self.count]
        self.zero_mode_count_ = res.zero_mode_count
        return self

    def predict(self, X=None):
        """Computed eigenvalues (``X`` is ignored; refit to change the mesh)."""
        check_is_fitted(self, "eigenvalues_")
        return self.eigenvalues_.copy()

    def corrected_eigenvalues(self):
        """``lambda - eta`` for each computed pair (linear element only)."""
        check_is_fitted(self, "eigenvalues_")
        return np.array([estimator_eta(self.space_, u, lam).lambda_tilde
                         for lam, u in zip(self.eigenvalues_, self.eigenvectors_.T)])
