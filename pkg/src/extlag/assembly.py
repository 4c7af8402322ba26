"""Sparse assembly of the pencil blocks and of the source problem.

With ``xi`` the constrained vector basis and ``phi`` the Dirichlet scalar
basis of order ``p + 1``::

    A11[i, l] = (curl xi_i, curl xi_l)      B11[i, l] = (xi_i, xi_l)
    B12[i, l] = (xi_i, grad phi_l)          B22[i, l] = (grad phi_i, grad phi_l)

    A = [[A11, 0], [0, 0]]                  B = [[B11, B12], [B12^T, B22]]

Local matrices are first assembled over unconstrained vector slots and then
reduced with ``ExtendedSpace.embedding``; this is the same as substituting
``theta * n`` for a node that keeps only its normal component.
"""
from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from .fespace import eval_basis
from .quadrature import quadrature_rule


@dataclass
class PencilSystem:
    """Blocks of the generalized eigenproblem ``A u = lambda B u``."""
    A11: sp.csr_matrix
    B11: sp.csr_matrix
    B12: sp.csr_matrix
    B22: sp.csr_matrix
    A: sp.csr_matrix
    B: sp.csr_matrix
    N1: int
    N2: int

    @property
    def ndofs(self):
        return self.N1 + self.N2

    def export(self, prefix):
        """Write ``A`` and ``B`` in Matrix Market format (``<prefix>_A.mtx`` ...)."""
        paths = []
        for name in ("A", "B"):
            path = f"{prefix}_{name}.mtx"
            scipy.io.mmwrite(path, getattr(self, name), symmetry="symmetric")
            paths.append(path)
        return paths


@dataclass
class SourceSystem:
    """Saddle system ``[[A, G], [G^T, 0]] [u; rho] = [F; 0]``."""
    pencil: PencilSystem
    G: sp.csr_matrix
    F: np.ndarray

    @property
    def A(self):
        return self.pencil.A

    @property
    def B(self):
        return self.pencil.B

    def saddle_matrix(self):
        n2 = self.G.shape[1]
        return sp.bmat([[self.A, self.G], [self.G.T, sp.csr_matrix((n2, n2))]], format="csc")

    def rhs(self):
        return np.concatenate([self.F, np.zeros(self.G.shape[1])])

    def export(self, prefix):
        paths = self.pencil.export(prefix)
        path = f"{prefix}_G.mtx"
        scipy.io.mmwrite(path, self.G)
        return paths + [path]


def _scatter(local, rows, cols, shape):
    nc, na, nb = local.shape
    r = np.broadcast_to(rows[:, :, None], (nc, na, nb)).ravel()
    c = np.broadcast_to(cols[:, None, :], (nc, na, nb)).ravel()
    return sp.coo_matrix((local.ravel(), (r, c)), shape=shape).tocsr()


def _slots(space_nodes, d):
    # global vector slots (node * d + j) for every local (a, j)
    return (space_nodes[:, :, None] * d + np.arange(d)).reshape(len(space_nodes), -1)


def _symmetrize(m):
    return (0.5 * (m + m.T)).tocsr()


def _gram(w, f, g):
    """``sum_q w[c,q] f[c,q,i] g[c,q,j]`` as a batched matmul."""
    return np.matmul(np.transpose(f * w[:, :, None], (0, 2, 1)), g)


def assemble_pencil(space, degree=None):
    """Assemble :class:`PencilSystem` for an :class:`~extlag.fespace.ExtendedSpace`.

    Parameters
    ----------
    space : ExtendedSpace
    degree : int, optional
        Quadrature degree; defaults to ``2 (p + 1)``, exact for every block.
    """
    mesh, d, p = space.mesh, space.dim, space.p
    rule = quadrature_rule(d, degree if degree is not None else 2 * (p + 1))
    vs, ss = space.vector, space.scalar
    ev = eval_basis(vs, np.arange(mesh.n_cells), rule.points)
    es = eval_basis(ss, np.arange(mesh.n_cells), rule.points)
    w = ev.detB[:, None] * rule.weights[None, :]  # (nc, nq)

    # S[c, a, b, m, n] = int d_m theta_a d_n theta_b
    nc, nq, nl, _ = ev.grads.shape
    gv = ev.grads.reshape(nc, nq, nl * d)
    S = _gram(w, gv, gv).reshape(nc, nl, d, nl, d).transpose(0, 1, 3, 2, 4)
    trace = np.einsum("cabmm->cab", S)
    eye = np.eye(d)
    # K[(a,j),(b,k)] = delta_jk tr S_ab - S_ab[k, j]
    K = trace[:, :, None, :, None] * eye[None, None, :, None, :] - np.transpose(S, (0, 1, 4, 2, 3))
    K = K.reshape(nc, nl * d, nl * d)
    M = np.einsum("cq,qa,qb->cab", w, ev.values, ev.values, optimize=True)
    Mv = (M[:, :, None, :, None] * eye[None, None, :, None, :]).reshape(nc, nl * d, nl * d)
    ns = es.grads.shape[2]
    vals = np.broadcast_to(ev.values[None], (nc, nq, nl))
    gs = es.grads.transpose(0, 1, 3, 2).reshape(nc, nq, d * ns)
    C = _gram(w, vals, gs).reshape(nc, nl * d, ns)
    gsf = es.grads.reshape(nc, nq, ns * d)
    Ks = np.einsum("cambm->cab", _gram(w, gsf, gsf).reshape(nc, ns, d, ns, d))

    slots = _slots(vs.cell_nodes, d)
    nslot = vs.n_nodes * d
    E = space.embedding
    R = ss.restriction
    Kf = _scatter(K, slots, slots, (nslot, nslot))
    Mf = _scatter(Mv, slots, slots, (nslot, nslot))
    Cf = _scatter(C, slots, ss.cell_nodes, (nslot, ss.n_nodes))
    Sf = _scatter(Ks, ss.cell_nodes, ss.cell_nodes, (ss.n_nodes, ss.n_nodes))

    A11 = _symmetrize(E.T @ Kf @ E)
    B11 = _symmetrize(E.T @ Mf @ E)
    B12 = (E.T @ Cf @ R).tocsr()
    B22 = _symmetrize(R.T @ Sf @ R)
    N1, N2 = space.N1, space.N2
    A = sp.block_diag([A11, sp.csr_matrix((N2, N2))], format="csr")
    B = _symmetrize(sp.vstack([sp.hstack([B11, B12]), sp.hstack([B12.T, B22])]))
    return PencilSystem(A11, B11, B12, B22, A, B, N1, N2)


LOAD_DEGREE = 16
LOAD_CHUNK = 2 ** 18  # quadrature points per batch


def load_vector(space, f, degree=None):
    """``F[i] = (f, basis_i)`` for every basis function of ``space``.

    ``f`` is a general callable, so the rule is chosen by accuracy rather than
    exactness: the default degree :data:`LOAD_DEGREE` resolves a smooth load
    far below discretization error, which keeps ``(f, grad q)`` at round-off
    level for divergence-free ``f``.
    """
    mesh, d = space.mesh, space.dim
    rule = quadrature_rule(d, LOAD_DEGREE if degree is None else degree)
    vs, ss = space.vector, space.scalar
    Fv = np.zeros(vs.n_nodes * d)
    Fg = np.zeros(ss.n_nodes)
    step = max(1, LOAD_CHUNK // len(rule))
    for start in range(0, mesh.n_cells, step):
        cells = np.arange(start, min(start + step, mesh.n_cells))
        ev = eval_basis(vs, cells, rule.points)
        es = eval_basis(ss, cells, rule.points)
        w = ev.detB[:, None] * rule.weights[None, :]
        x = ev.physical_points(rule.points)  # (nc, nq, d)
        fx = np.asarray(f(x.reshape(-1, d)), dtype=float).reshape(x.shape)
        Fv_loc = np.einsum("cq,qa,cqj->caj", w, ev.values, fx).reshape(len(cells), -1)
        Fg_loc = np.einsum("cq,cqbj,cqj->cb", w, es.grads, fx)
        Fv += np.bincount(_slots(vs.cell_nodes[cells], d).ravel(), Fv_loc.ravel(), minlength=len(Fv))
        Fg += np.bincount(ss.cell_nodes[cells].ravel(), Fg_loc.ravel(), minlength=len(Fg))
    return np.concatenate([space.embedding.T @ Fv, ss.restriction.T @ Fg])


def assemble_source(space, f, degree=None, pencil=None):
    """Assemble the saddle system of the source problem for right side ``f``.

    Parameters
    ----------
    space : ExtendedSpace
    f : callable
        Maps points ``(n, dim)`` to field values ``(n, dim)``.
    degree : int, optional
        Load quadrature degree, default :data:`LOAD_DEGREE`.
    pencil : PencilSystem, optional
        Reuse already assembled blocks.
    """
    if pencil is None:
        pencil = assemble_pencil(space)
    G = pencil.B[:, pencil.N1:].tocsr()
    F = load_vector(space, f, degree)
    return SourceSystem(pencil, G, F)
