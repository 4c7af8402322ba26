"""Averaging recovery of the curl for the extended linear element.

The elementwise curl of a ``p = 1`` field is constant on each cell. The
recovered curl is the continuous piecewise-linear field whose value at a
vertex ``z`` is the mean of the cellwise curls over the cells sharing ``z``.
Its distance to the cellwise curl gives an eigenvalue error estimator; the
corrected eigenvalue ``lambda - eta`` is a lower bound when the eigenfunction
is smooth.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import SpaceError
from .fespace import barycentric, evaluate_field
from .quadrature import quadrature_rule


@dataclass(frozen=True)
class RecoveredField:
    """Continuous piecewise-linear field given by its vertex values.

    Attributes
    ----------
    mesh : SimplicialMesh
    values : ndarray, shape (n_vertices, 1) in 2D or (n_vertices, 3) in 3D
    """
    mesh: object
    values: np.ndarray

    def evaluate(self, ref_points, cells=None):
        """Linear interpolation at reference points of the given cells.

        Returns an array of shape ``(n_cells, n_points, n_components)``.
        """
        if cells is None:
            cells = np.arange(self.mesh.n_cells)
        lam = barycentric(np.atleast_2d(ref_points))  # (nq, d + 1)
        return np.einsum("qa,cak->cqk", lam, self.values[self.mesh.cells[cells]])


@dataclass(frozen=True)
class CorrectedEigenvalue:
    lambda_h: float
    eta: float

    @property
    def lambda_tilde(self):
        return self.lambda_h - self.eta


def patch_average(mesh, corner_values):
    """Average per-cell values at each vertex over its patch.

    Parameters
    ----------
    mesh : SimplicialMesh
    corner_values : ndarray, shape (n_cells, dim + 1, n_components)
        Value of a cellwise field at each local vertex of each cell.

    Returns
    -------
    ndarray, shape (n_vertices, n_components)
    """
    corner_values = np.asarray(corner_values, dtype=float)
    nc = corner_values.shape[-1]
    out = np.zeros((mesh.n_vertices, nc))
    np.add.at(out, mesh.cells.ravel(), corner_values.reshape(-1, nc))
    return out / mesh.patch_sizes[:, None]


def _require_linear(space):
    if space.p != 1:
        raise SpaceError(f"curl recovery is defined for the linear element only, got p={space.p}")


def _reference_vertices(dim):
    return np.vstack([np.zeros(dim), np.eye(dim)])


def recover_curl(space, u):
    """Recovered curl of the discrete field ``u`` (``p = 1`` only)."""
    _require_linear(space)
    _, curls, _ = evaluate_field(space, u, _reference_vertices(space.dim))
    return RecoveredField(space.mesh, patch_average(space.mesh, curls))


def _recovery_gap(space, u, degree):
    rule = quadrature_rule(space.dim, degree)
    vals, curls, ev = evaluate_field(space, u, rule.points)
    rec = recover_curl(space, u).evaluate(rule.points)
    w = ev.detB[:, None] * rule.weights[None, :]
    gap = np.sum(w * np.sum((curls - rec) ** 2, axis=-1))
    norm = np.sum(w * np.sum(vals ** 2, axis=-1))
    return gap, norm


def estimator_eta(space, u, lambda_h):
    """Recovery estimator ``|curl u - C u|^2 / |u|^2`` and the corrected eigenvalue.

    Parameters
    ----------
    space : ExtendedSpace
        Linear extended space.
    u : ndarray
        Coefficient vector; its scale does not matter.
    lambda_h : float

    Returns
    -------
    CorrectedEigenvalue
    """
    _require_linear(space)
    # the integrands are quadratic polynomials
    gap, norm = _recovery_gap(space, u, 2)
    if not norm > 0.0:
        raise ValueError("the coefficient vector represents the zero field")
    return CorrectedEigenvalue(float(lambda_h), float(gap / norm))


def recovery_error(space, u, exact_curl, degree=8):
    """``|C u - curl(exact)|`` in the L2 norm.

    ``exact_curl`` maps points ``(n, dim)`` to curl values, scalar in 2D.
    """
    _require_linear(space)
    rule = quadrature_rule(space.dim, degree)
    rec = recover_curl(space, u)
    vals = rec.evaluate(rule.points)
    mesh = space.mesh
    lam = barycentric(rule.points)
    x = np.einsum("qa,cad->cqd", lam, mesh.vertices[mesh.cells])
    ex = np.asarray(exact_curl(x.reshape(-1, mesh.dim)), dtype=float).reshape(vals.shape)
    w = mesh.volumes[:, None] * rule.weights[None, :] * np.prod(range(1, mesh.dim + 1))
    return float(np.sqrt(np.sum(w * np.sum((vals - ex) ** 2, axis=-1))))
