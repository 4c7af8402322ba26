"""Quadrature rules with positive weights on simplices.

Fully symmetric tabulated rules are used where available; other degrees
fall back to a collapsed-coordinate Gauss-Jacobi product rule.
"""
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.special import roots_jacobi

from ._quadrature_tables import RULES
from .exceptions import QuadratureError

MAX_DEGREE = 40


@dataclass(frozen=True)
class QuadratureRule:
    """Rule on the reference simplex.

    Attributes
    ----------
    dim : int
    degree : int
        Polynomial degree integrated exactly.
    barycentric : ndarray, shape (n_points, dim + 1)
    weights : ndarray, shape (n_points,)
        Sum to the reference measure ``1 / dim!``.
    """
    dim: int
    degree: int
    barycentric: np.ndarray
    weights: np.ndarray

    @property
    def points(self):
        """Reference (Cartesian) coordinates, shape (n_points, dim)."""
        return self.barycentric[:, 1:]

    def __len__(self):
        return len(self.weights)

    def integrate(self, func):
        """Integrate ``func(points) -> (n_points, ...)`` over the reference simplex."""
        vals = np.asarray(func(self.points))
        return np.tensordot(self.weights, vals, axes=(0, 0))


def quadrature_rule(dim, degree):
    """Cheapest tabulated rule of at least the requested degree.

    Parameters
    ----------
    dim : {2, 3}
    degree : int
        Up to :data:`MAX_DEGREE`; degrees beyond the tables use a product rule.
    """
    if dim not in (2, 3):
        raise QuadratureError(f"no rules for dimension {dim}")
    if degree > MAX_DEGREE:
        raise QuadratureError(f"no rule of degree {degree} (max {MAX_DEGREE})")
    avail = sorted(k for (d, k) in RULES if d == dim and k >= max(degree, 1))
    if avail:
        deg = avail[0]
        bary, w = RULES[(dim, deg)]
        bary = np.array(bary, dtype=float)
        w = np.array(w, dtype=float)
    else:
        deg = max(degree, 1)
        bary, w = conical_product_rule(dim, deg)
    bary.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(dim, deg, bary, w)


def _gauss_jacobi01(n, alpha):
    # nodes and weights on [0, 1] for the weight (1 - t)^alpha
    x, w = roots_jacobi(n, alpha, 0.0)
    return (x + 1.0) / 2.0, w / 2.0 ** (alpha + 1)


def conical_product_rule(dim, degree):
    """Collapsed-coordinate Gauss-Jacobi rule, exact to ``degree``.

    The Duffy map sends the unit cube onto the simplex; its Jacobian is
    absorbed into Jacobi weights, so all weights are positive.

    Returns
    -------
    barycentric : ndarray, shape (n_points, dim + 1)
    weights : ndarray, shape (n_points,)
    """
    n = degree // 2 + 1
    rules = [_gauss_jacobi01(n, dim - 1 - i) for i in range(dim)]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    t = np.column_stack([g.ravel() for g in grids])
    w = np.prod(np.column_stack([g.ravel() for g in wgrid]), axis=1)
    x = np.empty_like(t)
    rest = np.ones(len(t))
    for i in range(dim):
        x[:, i] = rest * t[:, i]
        rest = rest * (1.0 - t[:, i])
    bary = np.column_stack([1.0 - x.sum(axis=1), x])
    return bary, w


def monomial_integral(exponents):
    """Exact ``int x^a y^b (z^c)`` over the reference simplex: ``a! b! c! / (a + b + c + d)!``."""
    num = 1
    for e in exponents:
        num *= factorial(e)
    return num / factorial(sum(exponents) + len(exponents))
