"""Generalized symmetric eigensolvers for the pencil ``A u = lambda B u``.

``A`` is positive semidefinite with a large kernel (all discrete gradients)
and ``B`` is positive semidefinite; ``B`` is singular exactly when some
coefficient vector represents the zero function. Two backends:

* :func:`dense_gep`, the reference: deflates the null space of ``B`` and
  diagonalizes the reduced pencil.
* :func:`shift_invert_eigs`, a block Lanczos iteration on
  ``(A - sigma B)^{-1} B`` with full reorthogonalization in the ``B`` inner
  product. Gradient components are purged from every Krylov vector, so the
  kernel of ``A`` never enters the iteration.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .exceptions import ConvergenceError, FactorizationError
from .linalg import SymmetricFactorization

logger = logging.getLogger(__name__)


@dataclass
class EigenResult:
    """Physical eigenpairs of the pencil.

    Attributes
    ----------
    eigenvalues : ndarray
        Ascending, zero modes and spurious modes removed.
    eigenvectors : ndarray, shape (ndofs, n)
        ``B``-normalized coefficient vectors.
    zero_mode_count : int
        Number of eigenvalues at or below the zero tolerance (only known for
        the dense backend; the shift-invert backend reports the number of
        zero Ritz values it met, normally 0).
    spurious : list of (float, float)
        Discarded ``(lambda, residual)`` pairs.
    backend : str
    residuals : ndarray
        Relative pencil residuals of the retained pairs.
    b_rank_deficiency : int
        Dimension of the null space of ``B`` (dense backend only).
    spectrum : ndarray or None
        Every eigenvalue of the deflated pencil (dense backend only).
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_mode_count: int
    spurious: list = field(default_factory=list)
    backend: str = ""
    residuals: np.ndarray = None
    b_rank_deficiency: int = 0
    spectrum: np.ndarray = None
    sigma: float = None

    def __len__(self):
        return len(self.eigenvalues)


# safety factor on the rounding estimate of the filter residual
FLOOR_FACTOR = 64.0


def default_filter_tol(lam):
    return 1e-6 * (1.0 + abs(lam))


def rounding_floor(lam, u, A, B, absA=None, absB=None):
    """Attainable accuracy of the filter residual ``r`` in floating point.

    ``u'Au - lam u'Bu`` cancels to a small difference of sums whose terms
    are bounded by ``|u|'|A||u|`` and ``|lam| |u|'|B||u|``; its rounding
    error therefore grows like ``h^-2`` relative to ``u'Bu``.
    """
    absA = abs(A) if absA is None else absA
    absB = abs(B) if absB is None else absB
    au = np.abs(u)
    scale = float(au @ (absA @ au)) + abs(lam) * float(au @ (absB @ au))
    uBu = float(u @ (B @ u))
    return float(np.sqrt(FLOOR_FACTOR * np.finfo(float).eps * scale / uBu)) if uBu > 0 else 0.0


def filter_spurious(lam, u, A, B, tol_E=None):
    """Residual test for algebraic spurious eigenpairs.

    Computes ``r = sqrt(|u'Au - lam u'Bu|) / sqrt(u'Bu)``.

    Parameters
    ----------
    tol_E : float, optional
        Default ``max(1e-6 (1 + |lam|), rounding_floor(...))``: the fixed
        tolerance, raised to the floating-point floor of ``r`` on fine meshes.

    Returns
    -------
    keep : bool
        False when ``r > tol_E`` or when ``u'Bu <= 1e-12 |u|^2`` (the
        coefficient vector represents the zero function).
    r : float
    """
    u = np.asarray(u, dtype=float)
    uBu = float(u @ (B @ u))
    uu = float(u @ u)
    if uu == 0.0:
        raise ValueError("zero coefficient vector")
    if uBu <= 1e-12 * uu:
        return False, float("inf")
    if tol_E is None:
        tol_E = max(default_filter_tol(lam), rounding_floor(lam, u, A, B))
    uAu = float(u @ (A @ u))
    r = np.sqrt(abs(uAu - lam * uBu)) / np.sqrt(uBu)
    return bool(r <= tol_E), float(r)


def _onenorm(M):
    if sp.issparse(M):
        return float(abs(M).sum(axis=0).max()) if M.nnz else 0.0
    return float(np.abs(M).sum(axis=0).max())


def pencil_residuals(A, B, lams, U):
    """``|A u - lam B u| / ((|A| + |lam| |B|) |u|)`` column by column."""
    na, nb = _onenorm(A), _onenorm(B)
    R = A @ U - (B @ U) * lams[None, :]
    return np.linalg.norm(R, axis=0) / ((na + np.abs(lams) * nb) * np.linalg.norm(U, axis=0))


def _finish(lams, U, A, B, zero_tol, filter_tol, backend, k=None, **extra):
    keep_l, keep_u, spurious = [], [], []
    zero = 0
    absA, absB = abs(A), abs(B)
    for lam, u in zip(lams, U.T):
        if abs(lam) <= zero_tol:
            zero += 1
            continue
        if filter_tol is None:
            tol = max(default_filter_tol(lam), rounding_floor(lam, u, A, B, absA, absB))
        else:
            tol = filter_tol * (1 + abs(lam))
        ok, r = filter_spurious(lam, u, A, B, tol)
        if ok and lam > zero_tol:
            keep_l.append(lam)
            keep_u.append(u)
        else:
            spurious.append((float(lam), r))
    lam = np.array(keep_l)
    vec = np.array(keep_u).T if keep_u else np.zeros((A.shape[0], 0))
    order = np.argsort(lam, kind="stable")
    lam, vec = lam[order], vec[:, order]
    if k is not None:
        lam, vec = lam[:k], vec[:, :k]
    res = pencil_residuals(A, B, lam, vec) if len(lam) else np.zeros(0)
    return EigenResult(lam, vec, zero, spurious, backend, res, **extra)


def dense_gep(A, B, k=None, zero_tol=1e-6, filter_tol=None, rank_tol=1e-12):
    """Full spectrum of a symmetric pencil with semidefinite ``B``.

    Parameters
    ----------
    A, B : array_like or sparse matrix
    k : int, optional
        Keep only the ``k`` smallest physical eigenpairs.
    zero_tol : float
        Eigenvalues with ``|lambda| <= zero_tol`` count as zero modes.
    filter_tol : float, optional
        Relative spurious-filter tolerance; the threshold is
        ``filter_tol * (1 + lambda)`` (default ``1e-6``, raised to the
        rounding floor of the residual, see :func:`rounding_floor`).
    rank_tol : float
        Eigenvalues of ``B`` below ``rank_tol * max`` span its null space.

    Returns
    -------
    EigenResult
        ``b_rank_deficiency`` counts the deflated ``B``-null directions,
        which are also listed in ``spurious`` as ``(nan, inf)``.
    """
    Ad = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    Bd = B.toarray() if sp.issparse(B) else np.asarray(B, dtype=float)
    n = len(Ad)
    if n > 4000:
        raise ValueError(f"dense backend limited to 4000 unknowns, got {n}")
    mu, Q = la.eigh(Bd)
    scale = max(mu.max(initial=0.0), np.finfo(float).tiny)
    rng = mu > rank_tol * scale
    null = int(n - rng.sum())
    Qr = Q[:, rng] / np.sqrt(mu[rng])[None, :]
    C = Qr.T @ Ad @ Qr
    C = 0.5 * (C + C.T)
    theta, Y = la.eigh(C)
    U = Qr @ Y
    result = _finish(theta, U, A, B, zero_tol, filter_tol, "dense", k=k,
                     b_rank_deficiency=null, spectrum=theta)
    result.spurious = [(float("nan"), float("inf"))] * null + result.spurious
    return result


class GradientPurge:
    """``B``-orthogonal projection away from the gradient block.

    For coefficient vectors laid out as ``[vector part; gradient part]``
    with ``N1`` vector unknowns, removes the component lying in the span
    of the gradient unit vectors: ``v <- v - [0; B22^{-1} (B v)[N1:]]``.
    """

    def __init__(self, B, N1):
        B = sp.csr_matrix(B)
        self.N1 = N1
        self.rows = B[N1:, :]
        self._fac = SymmetricFactorization(B[N1:, N1:].tocsc()) if B.shape[0] > N1 else None

    def __call__(self, X):
        if self._fac is None:
            return X
        X = X.copy()
        X[self.N1:] -= self._fac.solve(np.asarray(self.rows @ X))
        return X


def _b_orthonormalize(X, B, ref=None, tol=1e-10, null_tol=1e-12):
    """``B``-orthonormal basis of ``span X``.

    Drops directions whose ``B``-norm fell below ``tol * ref`` (``ref`` being
    the largest norm before any orthogonalization), and directions whose
    Rayleigh quotient ``x'Bx / x'x`` is below ``null_tol * |B|``: those lie
    in the null space of ``B`` up to rounding.
    """
    G = X.T @ (B @ X)
    G = 0.5 * (G + G.T)
    mu, Q = la.eigh(G)
    if ref is None:
        ref = np.sqrt(max(mu.max(initial=0.0), 1e-300))
    Y = X @ Q
    eucl = np.einsum("ij,ij->j", Y, Y)
    keep = (mu > (tol * ref) ** 2) & (mu > null_tol * _onenorm(B) * eucl)
    return Y[:, keep] / np.sqrt(mu[keep])


def _b_norms(X, B):
    return np.sqrt(np.abs(np.einsum("ij,ij->j", X, B @ X)))


def _expand(Z, V, B):
    ref = _b_norms(Z, B).max(initial=0.0)
    for _ in range(2):
        Z = Z - V @ (V.T @ (B @ Z))
    return _b_orthonormalize(Z, B, ref=ref) if ref > 0 else Z[:, :0]


def shift_invert_eigs(A, B, sigma, k, n_vector=None, block_size=4, tol=1e-9, max_dim=None,
                      zero_tol=None, filter_tol=None, seed=0, max_retries=3, regularization=1e-10):
    """Smallest physical eigenpairs near a shift by block Lanczos.

    Parameters
    ----------
    A, B : sparse matrix
    sigma : float
        Positive shift, below the wanted eigenvalues.
    k : int
        Number of pencil eigenpairs wanted, nearest the shift. Zero modes and
        spurious pairs among them are dropped, so fewer physical pairs may
        be returned; ask for some slack.
    n_vector : int, optional
        ``N1``; when given, gradient components (the trailing unknowns) are
        purged from every Krylov vector.
    block_size : int
        Handles eigenvalue multiplicities up to this size.
    tol : float
        Ritz residual tolerance, relative to the Ritz value of the shifted
        and inverted operator.
    max_dim : int, optional
        Krylov dimension limit (default ``max(30 k, 300)``).
    zero_tol : float, optional
        Default ``1e-6 * sigma``.
    max_retries : int
        Shift perturbations attempted when ``A - sigma B`` is singular.
    regularization : float
        Relative diagonal shift used to factor ``A - sigma B``, which is
        singular whenever ``B`` is (shared null vectors represent the zero
        field). Iterative refinement keeps the solves exact on the range.

    Raises
    ------
    ValueError
        If ``k`` exceeds the searchable dimension (``N1`` when gradients are
        purged). For most of a small spectrum the dense solver is cheaper.
    ConvergenceError
        If the ``k`` wanted pairs do not all converge within ``max_dim``;
        ``partial`` holds an :class:`EigenResult` with those that did.
    """
    if sigma <= 0:
        raise ValueError("shift must be positive")
    A = sp.csr_matrix(A)
    B = sp.csr_matrix(B)
    n = A.shape[0]
    if zero_tol is None:
        zero_tol = 1e-6 * sigma
    fac = None
    for attempt in range(max_retries + 1):
        try:
            fac = SymmetricFactorization((A - sigma * B).tocsc(), regularization=regularization,
                                         refine=10 if regularization else 0,
                                         pivot_threshold=1e-3 if regularization else 0.1)
            break
        except FactorizationError:
            if attempt == max_retries:
                raise
            sigma *= 1.0 + 1e-3 * (attempt + 1)
            logger.warning("shifted matrix singular; retrying with sigma=%g", sigma)
    purge = GradientPurge(B, n_vector) if n_vector is not None else (lambda X: X)
    # purged vectors satisfy (B v)[N1:] = 0, a subspace of dimension N1
    space_dim = n if n_vector is None else n_vector
    if k > space_dim:
        raise ValueError(f"k={k} exceeds the searchable dimension {space_dim}")
    max_dim = min(space_dim, max_dim or max(30 * k, 300))
    b = min(block_size, n)
    rng = np.random.default_rng(seed)

    def op(X):
        Y = fac.solve(np.asarray(B @ X))
        return purge(Y.reshape(X.shape))

    X = _b_orthonormalize(purge(rng.standard_normal((n, b))), B)
    V = X
    W = op(X)
    done = False
    lam = U = None
    while True:
        T = V.T @ (B @ W)
        T = 0.5 * (T + T.T)
        nu, Y = la.eigh(T)
        order = np.argsort(-np.abs(nu))
        nu, Y = nu[order], Y[:, order]
        Xr = V @ Y
        R = W @ Y - Xr * nu[None, :]
        rnorm = np.sqrt(np.abs(np.einsum("ij,ij->j", R, B @ R)))
        with np.errstate(divide="ignore"):
            lam_all = sigma + 1.0 / nu
        conv = rnorm <= tol * np.abs(nu)
        logger.debug("dim %d: nu %s res %s", V.shape[1], nu[:k], rnorm[:k] / np.abs(nu[:k]))
        wanted = min(k, len(nu))
        if wanted == k and np.all(conv[:k]) and V.shape[1] >= min(2 * b, space_dim):
            done = True
            break
        if V.shape[1] >= space_dim:
            conv[:] = True
            done = True
            break
        if V.shape[1] >= max_dim:
            break
        # expand with the newest block, fully reorthogonalized
        Z = _expand(W[:, -X.shape[1]:], V, B)
        if Z.shape[1] == 0:
            Z = _expand(purge(rng.standard_normal((n, b))), V, B)
        if Z.shape[1] == 0:
            # the Krylov space is invariant: every Ritz pair is exact
            conv[:] = True
            done = True
            break
        # keep the strongest directions; never exceed the subspace dimension
        X = Z[:, ::-1][:, :space_dim - V.shape[1]]
        V = np.hstack([V, X])
        W = np.hstack([W, op(X)])
    sel = np.nonzero(conv[:k])[0]
    lam, U = lam_all[sel], Xr[:, sel]
    result = _finish(lam, U, A, B, zero_tol, filter_tol, "shift-invert", sigma=sigma)
    if not done:
        raise ConvergenceError(
            f"only {len(sel)} of {k} eigenpairs converged (Krylov dimension {V.shape[1]})",
            partial=result)
    return result
