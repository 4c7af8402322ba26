"""Symmetric factorizations, the saddle-point source solve, and error norms."""
from dataclasses import dataclass

import numpy as np
import pymetis
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import FactorizationError
from .fespace import evaluate_field
from .quadrature import quadrature_rule

DENSE_LIMIT = 2000


class SymmetricFactorization:
    """Factorization of a sparse symmetric, possibly indefinite, matrix.

    ``method='sparse'`` uses a pivoted sparse LU (SuperLU) on a nested
    dissection ordering (METIS); ``method='dense'``
    uses the Bunch-Kaufman ``L D L^T`` of LAPACK and is meant as a reference
    for small matrices (up to about :data:`DENSE_LIMIT` unknowns).

    Parameters
    ----------
    M : sparse matrix or ndarray
    method : {'sparse', 'dense'}
    singular_tol : float
        A pivot below ``singular_tol * |M|_1`` means singular.
    regularization : float
        Factor ``M + regularization * |diag M|`` instead of ``M``. Together
        with ``refine`` this solves consistent singular systems: iterative
        refinement against the unregularized ``M`` restores full accuracy on
        the range while the null-space component stays bounded.
    refine : int
        Maximum number of iterative refinement steps applied by
        :meth:`solve`. Refinement stops early once the residual reaches
        rounding level or stops decreasing.
    pivot_threshold : float
        Sparse method only: the diagonal entry is kept as pivot while it is
        at least this fraction of the largest entry in its column. Small
        values preserve the fill-reducing ordering; pair them with
        ``refine``.

    Raises
    ------
    FactorizationError
        When the matrix is numerically singular; ``pivot`` holds the index of
        the smallest pivot when it can be located.
    """

    def __init__(self, M, method="sparse", singular_tol=1e-13, regularization=0.0, refine=0,
                 pivot_threshold=0.1):
        if method not in ("sparse", "dense"):
            raise ValueError(f"unknown factorization method {method!r}")
        self.method = method
        self.shape = M.shape
        self.refine = refine
        self.pivot_threshold = pivot_threshold
        self._M = sp.csr_matrix(M) if refine else None
        self._norm = _norm1(M)
        if regularization:
            diag = np.abs(M.diagonal())
            M = M + (sp.diags(regularization * diag) if sp.issparse(M) else np.diag(regularization * diag))
            singular_tol = min(singular_tol, 1e-3 * regularization)
        if method == "dense":
            self._factor_dense(M, singular_tol)
        else:
            self._factor_sparse(M, singular_tol)

    def _factor_sparse(self, M, tol):
        M = sp.csc_matrix(M)
        self._order = nested_dissection(M)
        Mp = M[self._order][:, self._order].tocsc()
        try:
            self._lu = spla.splu(Mp, permc_spec="NATURAL", diag_pivot_thresh=self.pivot_threshold,
                                 options={"SymmetricMode": True})
        except RuntimeError as exc:
            raise FactorizationError(f"sparse factorization failed: {exc}") from exc
        piv = np.abs(self._lu.U.diagonal())
        k = int(np.argmin(piv))
        if piv[k] <= tol * max(self._norm, np.finfo(float).tiny):
            col = int(self._order[self._lu.perm_c[k]])
            raise FactorizationError(f"matrix is numerically singular (pivot {piv[k]:.3e} at column {col})",
                                     pivot=col)

    def _factor_dense(self, M, tol):
        M = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=float)
        lu, d, perm = la.ldl(M, lower=True)
        n = len(M)
        # D is block diagonal with 1x1 and 2x2 blocks
        i = 0
        while i < n:
            if i + 1 < n and d[i + 1, i] != 0.0:
                piv = abs(np.linalg.det(d[i:i + 2, i:i + 2])) ** 0.5
                step = 2
            else:
                piv = abs(d[i, i])
                step = 1
            if piv <= tol * max(self._norm, np.finfo(float).tiny):
                raise FactorizationError(f"zero pivot in block starting at {i}", pivot=int(i))
            i += step
        self._L = lu[perm]
        self._perm = perm
        self._dband = np.vstack([np.r_[0.0, np.diag(d, 1)], np.diag(d), np.r_[np.diag(d, -1), 0.0]])

    def solve(self, b):
        b = np.asarray(b, dtype=float)
        x = self._solve(b)
        if not self.refine:
            return x
        r = b - self._M @ x
        rn = np.linalg.norm(r, axis=0)
        floor = 8 * np.finfo(float).eps * np.linalg.norm(b, axis=0)
        for _ in range(self.refine):
            if np.all(rn <= floor):
                break
            x_new = x + self._solve(r)
            r_new = b - self._M @ x_new
            rn_new = np.linalg.norm(r_new, axis=0)
            if np.all(rn_new >= 0.5 * rn):
                break
            x, r, rn = x_new, r_new, rn_new
        return x

    def _solve(self, b):
        if self.method == "sparse":
            x = np.empty_like(b)
            x[self._order] = self._lu.solve(np.ascontiguousarray(b[self._order]))
            return x
        y = la.solve_triangular(self._L, b[self._perm], lower=True, unit_diagonal=True)
        z = la.solve_banded((1, 1), self._dband, y)
        w = la.solve_triangular(self._L.T, z, lower=False, unit_diagonal=True)
        x = np.empty_like(w)
        x[self._perm] = w
        return x


def nested_dissection(M):
    """Fill-reducing symmetric ordering of the pattern of ``M + M^T``.

    Returns ``order`` such that ``M[order][:, order]`` is to be factored.
    """
    G = sp.csr_matrix(abs(M) + abs(M.T))
    G.setdiag(0)
    G.eliminate_zeros()
    if G.nnz == 0:
        return np.arange(M.shape[0])
    perm, _ = pymetis.nested_dissection(adjacency=pymetis.CSRAdjacency(G.indptr, G.indices))
    return np.asarray(perm, dtype=np.int64)


def factorize(M, method="sparse", **kwargs):
    return SymmetricFactorization(M, method=method, **kwargs)


def _norm1(M):
    if sp.issparse(M):
        return float(abs(M).sum(axis=0).max()) if M.nnz else 0.0
    return float(np.abs(M).sum(axis=0).max()) if M.size else 0.0


@dataclass
class SourceSolution:
    """Discrete solution of the source problem.

    Attributes
    ----------
    u : ndarray
        Coefficients over the extended space.
    rho : ndarray
        Multiplier coefficients over ``U_h``; zero for divergence-free data.
    residual : float
        Relative residual of the saddle system.
    constraint_residual : float
        ``|G^T u| / (|G| |u|)``.
    """
    u: np.ndarray
    rho: np.ndarray
    residual: float
    constraint_residual: float


def solve_saddle(system, method="sparse", regularization=1e-12, refine=2):
    """Solve ``[[A, G], [G^T, 0]] [u; rho] = [F; 0]``.

    The saddle matrix is singular exactly when some coefficient vector
    represents the zero field; ``u`` is then determined only up to such
    vectors, which do not change the represented field. A tiny diagonal
    regularization of the ``A`` block plus iterative refinement handles
    that case and leaves regular systems unaffected.
    """
    K = system.saddle_matrix()
    rhs = system.rhs()
    fac = SymmetricFactorization(K, method=method, regularization=regularization, refine=refine)
    x = fac.solve(rhs)
    nd = system.A.shape[0]
    u, rho = x[:nd], x[nd:]
    res = np.linalg.norm(K @ x - rhs) / max(_norm1(K) * np.linalg.norm(x) + np.linalg.norm(rhs), 1e-300)
    gu = system.G.T @ u
    cres = np.linalg.norm(gu) / max(_norm1(system.G) * np.linalg.norm(u), 1e-300)
    return SourceSolution(u, rho, float(res), float(cres))


def error_norms(space, u, exact, exact_curl, degree=8):
    """``(||u_h - u||, ||curl u_h - curl u||)`` by elementwise quadrature.

    ``exact`` and ``exact_curl`` map points ``(n, dim)`` to values; in 2D the
    curl is scalar and may be returned with shape ``(n,)`` or ``(n, 1)``.
    """
    rule = quadrature_rule(space.dim, degree)
    vals, curls, ev = evaluate_field(space, u, rule.points)
    x = ev.physical_points(rule.points)
    flat = x.reshape(-1, space.dim)
    ue = np.asarray(exact(flat), dtype=float).reshape(vals.shape)
    ce = np.asarray(exact_curl(flat), dtype=float).reshape(curls.shape)
    w = ev.detB[:, None] * rule.weights[None, :]
    l2 = np.sqrt(np.sum(w * np.sum((vals - ue) ** 2, axis=-1)))
    lc = np.sqrt(np.sum(w * np.sum((curls - ce) ** 2, axis=-1)))
    return float(l2), float(lc)
