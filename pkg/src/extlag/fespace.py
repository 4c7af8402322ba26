"""Lagrange spaces and the extended space ``L_h0 + grad U_h``.

Nodes are the points of the principal lattice of order ``k`` on every cell.
A node is identified globally by its carrier: the sorted global vertex ids
of the sub-simplex it lies in, together with the lattice multiplicities.
Vertex nodes take the index of their vertex, other nodes are numbered after.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
import scipy.sparse as sp

from .exceptions import SpaceError
from .mesh import NORMAL_TOL

FREE, NORMAL_ONLY, FIXED = 0, 1, 2


def lattice(dim, k):
    """Multi-indices ``alpha`` with ``|alpha| = k`` over ``dim + 1`` barycentric slots.

    Vertices come first (in vertex order), then points on edges, faces, and
    the interior.
    """
    idx = [a for a in product(range(k + 1), repeat=dim + 1) if sum(a) == k]
    idx.sort(key=lambda a: (sum(1 for x in a if x), [-x for x in a]))
    return np.array(idx, dtype=np.int64)


def barycentric(ref_points):
    ref_points = np.atleast_2d(ref_points)
    return np.column_stack([1.0 - ref_points.sum(axis=1), ref_points])


def lagrange_basis(dim, k, ref_points):
    """Nodal ``P_k`` basis on the reference simplex.

    Uses the product form ``prod_i prod_{j < alpha_i} (k lam_i - j) / (j + 1)``.

    Returns
    -------
    values : ndarray, shape (n_points, n_basis)
    grads : ndarray, shape (n_points, n_basis, dim)
        Gradients with respect to reference coordinates.
    """
    lam = barycentric(ref_points)
    alpha = lattice(dim, k)
    npts, nb = len(lam), len(alpha)
    values = np.ones((npts, nb))
    dlam = np.zeros((npts, nb, dim + 1))
    for b, a in enumerate(alpha):
        f = np.ones((npts, dim + 1))
        df = np.zeros((npts, dim + 1))
        for i in range(dim + 1):
            for j in range(a[i]):
                t = (k * lam[:, i] - j) / (j + 1)
                df[:, i] = df[:, i] * t + f[:, i] * k / (j + 1)
                f[:, i] = f[:, i] * t
        values[:, b] = np.prod(f, axis=1)
        for i in range(dim + 1):
            others = np.prod(np.delete(f, i, axis=1), axis=1)
            dlam[:, b, i] = df[:, i] * others
    grads = dlam[:, :, 1:] - dlam[:, :, :1]
    return values, grads


def lattice_points(dim, k):
    """Reference coordinates of the nodes, in :func:`lattice` order."""
    return lattice(dim, k)[:, 1:] / k


@dataclass(frozen=True)
class BasisEval:
    """Basis values and physical gradients on a set of cells.

    Attributes
    ----------
    values : ndarray, shape (n_points, n_basis)
    grads : ndarray, shape (n_cells, n_points, n_basis, dim)
    B : ndarray, shape (n_cells, dim, dim)
    b : ndarray, shape (n_cells, dim)
    detB : ndarray, shape (n_cells,)
        Absolute Jacobian determinants.
    """
    values: np.ndarray
    grads: np.ndarray
    B: np.ndarray
    b: np.ndarray
    detB: np.ndarray

    def physical_points(self, ref_points):
        return np.einsum("cij,qj->cqi", self.B, np.atleast_2d(ref_points)) + self.b[:, None, :]


class ScalarSpace:
    """Continuous ``P_k`` Lagrange space, optionally with zero Dirichlet data.

    Parameters
    ----------
    mesh : SimplicialMesh
    order : int
        Polynomial degree, 1 to 3.
    dirichlet : bool
        Drop boundary nodes from the degrees of freedom.
    """

    def __init__(self, mesh, order, dirichlet=False):
        if order not in (1, 2, 3):
            raise SpaceError(f"unsupported Lagrange order {order}")
        self.mesh = mesh
        self.order = order
        self.dirichlet = dirichlet
        self._build()

    def _build(self):
        mesh, k, d = self.mesh, self.order, self.mesh.dim
        alpha = lattice(d, k)
        nloc = len(alpha)
        nc = mesh.n_cells
        sentinel = np.iinfo(np.int64).max

        def keys(verts, mult):
            gv = np.where(mult > 0, verts, sentinel)
            order = np.argsort(gv, axis=-1, kind="stable")
            gv = np.take_along_axis(gv, order, axis=-1)
            mult = np.take_along_axis(mult, order, axis=-1)
            return np.concatenate([gv, mult], axis=-1)

        cell_verts = np.broadcast_to(mesh.cells[:, None, :], (nc, nloc, d + 1))
        cell_mult = np.broadcast_to(alpha[None, :, :], (nc, nloc, d + 1))
        ckeys = keys(cell_verts, cell_mult).reshape(nc * nloc, -1)

        # lattice points on boundary faces, padded to d + 1 slots
        bf = mesh.boundary_faces
        beta = lattice(d - 1, k)
        nf, nfl = len(bf), len(beta)
        face_verts = np.concatenate(
            [np.broadcast_to(bf[:, None, :], (nf, nfl, d)), np.full((nf, nfl, 1), sentinel)], axis=2)
        face_mult = np.concatenate(
            [np.broadcast_to(beta[None, :, :], (nf, nfl, d)), np.zeros((nf, nfl, 1), np.int64)], axis=2)
        fkeys = keys(face_verts, face_mult).reshape(nf * nfl, -1)

        allkeys = np.vstack([ckeys, fkeys])
        uniq, inv = np.unique(allkeys, axis=0, return_inverse=True)
        inv = inv.ravel()
        nnodes = len(uniq)
        # renumber: vertex nodes first, by vertex index
        is_vertex = uniq[:, d + 1] == k
        new_id = np.empty(nnodes, dtype=np.int64)
        new_id[is_vertex] = uniq[is_vertex, 0]
        nvn = int(is_vertex.sum())
        new_id[~is_vertex] = nvn + np.arange(nnodes - nvn)
        uniq_sorted = np.empty_like(uniq)
        uniq_sorted[new_id] = uniq
        self.node_keys = uniq_sorted
        self.cell_nodes = new_id[inv[:nc * nloc]].reshape(nc, nloc)
        face_nodes = new_id[inv[nc * nloc:]].reshape(nf, nfl)
        self.face_nodes = face_nodes
        self.n_nodes = nnodes

        coords = np.zeros((nnodes, d))
        pts = mesh.vertices[mesh.cells]  # (nc, d+1, d)
        xc = np.einsum("la,cad->cld", alpha / k, pts).reshape(-1, d)
        coords[self.cell_nodes.ravel()] = xc
        self.coords = coords

        # boundary normals per node
        pair_node = face_nodes.ravel()
        pair_normal = np.repeat(mesh.boundary_normals, nfl, axis=0)
        q = np.round(pair_normal / NORMAL_TOL).astype(np.int64)
        rows = np.unique(np.column_stack([pair_node, q]), axis=0, return_index=True)[1]
        dn_node = pair_node[rows]
        dn_normal = pair_normal[rows]
        n_normals = np.bincount(dn_node, minlength=nnodes)
        self.n_normals = n_normals
        first = np.zeros((nnodes, d))
        first[dn_node[::-1]] = dn_normal[::-1]
        self.first_normal = first
        self.on_boundary = n_normals > 0

        if self.dirichlet:
            dof = np.full(nnodes, -1, dtype=np.int64)
            interior = ~self.on_boundary
            dof[interior] = np.arange(int(interior.sum()))
        else:
            dof = np.arange(nnodes, dtype=np.int64)
        self.node_dof = dof
        self.n_dofs = int((dof >= 0).sum())

    @property
    def ndofs(self):
        return self.n_dofs

    @cached_property
    def restriction(self):
        """Sparse ``(n_nodes, n_dofs)`` map from DOFs to nodal values."""
        mask = self.node_dof >= 0
        rows = np.nonzero(mask)[0]
        return sp.csr_matrix((np.ones(len(rows)), (rows, self.node_dof[mask])),
                             shape=(self.n_nodes, self.n_dofs))

    def normals_at(self, node):
        """Distinct outward normals at ``node`` (empty for interior nodes)."""
        mesh = self.mesh
        key = self.node_keys[node]
        d = mesh.dim
        support = key[:d + 1][key[d + 1:] > 0]
        return mesh.normals_of_support(support)


@dataclass(frozen=True)
class NodeConstraint:
    """Tangential-trace constraint at a vector Lagrange node.

    ``kind`` is ``'free'`` (``d`` DOFs), ``'normal_only'`` (one DOF along
    ``normal``) or ``'fixed'`` (no DOF).
    """
    kind: str
    normal: tuple = None

    def n_dofs(self, dim):
        """Unknowns carried by the node in dimension ``dim``."""
        return {"free": dim, "normal_only": 1, "fixed": 0}[self.kind]


def classify_boundary_node(normals, tol=NORMAL_TOL):
    """Constraint type implied by the boundary normals at a node.

    >>> classify_boundary_node([]).kind
    'free'
    >>> classify_boundary_node([(0, 0, 1)]).kind
    'normal_only'
    >>> classify_boundary_node([(0, 0, 1), (1, 0, 0)]).kind
    'fixed'
    """
    normals = [np.asarray(n, dtype=float) for n in normals]
    if not normals:
        return NodeConstraint("free")
    ref = normals[0]
    if all(np.max(np.abs(n - ref)) <= tol for n in normals[1:]):
        return NodeConstraint("normal_only", tuple(float(c) for c in ref))
    return NodeConstraint("fixed")


class ExtendedSpace:
    """DOF layout of ``V_h = L_h0 + grad U_h``.

    The first ``N1`` unknowns are coefficients of the constrained vector
    ``P_p`` basis; the last ``N2`` are coefficients of gradients of the
    Dirichlet ``P_{p+1}`` basis.

    Parameters
    ----------
    mesh : SimplicialMesh
    p : {1, 2}

    Attributes
    ----------
    vector : ScalarSpace
        Node layout of the vector part (order ``p``, no Dirichlet condition).
    scalar : ScalarSpace
        ``U_h`` (order ``p + 1``, Dirichlet).
    kind : ndarray of {FREE, NORMAL_ONLY, FIXED}
        Constraint per vector node.
    embedding : scipy.sparse.csr_matrix, shape (dim * n_vector_nodes, N1)
        Maps constrained coefficients to unconstrained nodal vector values
        (slot ``node * dim + component``).
    """

    def __init__(self, mesh, p):
        if p not in (1, 2):
            raise SpaceError(f"extended space order must be 1 or 2, got {p!r}")
        self.mesh = mesh
        self.p = p
        self.dim = mesh.dim
        self.vector = ScalarSpace(mesh, p, dirichlet=False)
        self.scalar = ScalarSpace(mesh, p + 1, dirichlet=True)
        self._build_constraints()

    def _build_constraints(self):
        vs, d = self.vector, self.dim
        kind = np.where(vs.n_normals == 0, FREE, np.where(vs.n_normals == 1, NORMAL_ONLY, FIXED))
        self.kind = kind
        self.normals = np.where((kind == NORMAL_ONLY)[:, None], vs.first_normal, 0.0)
        per_node = np.where(kind == FREE, d, np.where(kind == NORMAL_ONLY, 1, 0))
        start = np.concatenate([[0], np.cumsum(per_node)])
        self.node_first_dof = start[:-1]
        self.N1 = int(start[-1])
        rows, cols, vals = [], [], []
        free = np.nonzero(kind == FREE)[0]
        for j in range(d):
            rows.append(free * d + j)
            cols.append(start[free] + j)
            vals.append(np.ones(len(free)))
        nrm = np.nonzero(kind == NORMAL_ONLY)[0]
        for j in range(d):
            rows.append(nrm * d + j)
            cols.append(start[nrm])
            vals.append(self.normals[nrm, j])
        rows, cols, vals = map(np.concatenate, (rows, cols, vals))
        keep = vals != 0.0
        self.embedding = sp.csr_matrix((vals[keep], (rows[keep], cols[keep])),
                                       shape=(vs.n_nodes * d, self.N1))
        # per vector DOF: node and direction
        self.dof_node = np.repeat(np.arange(vs.n_nodes), per_node)
        dirs = np.zeros((self.N1, d))
        for j in range(d):
            dirs[start[free] + j, j] = 1.0
        dirs[start[nrm]] = self.normals[nrm]
        self.dof_direction = dirs

    @property
    def N2(self):
        return self.scalar.n_dofs

    @property
    def ndofs(self):
        return self.N1 + self.N2

    def constraint(self, node):
        k = self.kind[node]
        if k == FREE:
            return NodeConstraint("free")
        if k == FIXED:
            return NodeConstraint("fixed")
        return NodeConstraint("normal_only", tuple(self.normals[node]))

    def split(self, u):
        u = np.asarray(u)
        return u[:self.N1], u[self.N1:]

    def vector_nodal_values(self, u):
        """Nodal values (n_vector_nodes, dim) of the vector part of ``u``."""
        u1, _ = self.split(u)
        return (self.embedding @ u1).reshape(-1, self.dim)

    def scalar_nodal_values(self, u):
        _, u2 = self.split(u)
        return self.scalar.restriction @ u2

    def gradient_embedding(self):
        """Sparse ``(ndofs, N2)`` injection of gradient coefficients."""
        n2 = self.N2
        return sp.csr_matrix((np.ones(n2), (self.N1 + np.arange(n2), np.arange(n2))),
                             shape=(self.ndofs, n2))

    def interpolate(self, field):
        """Coefficients of the nodal interpolant of ``field`` in the vector part.

        The normal component is kept at ``normal_only`` nodes and values at
        fixed nodes are dropped, so the result lies in ``L_h0`` and the
        gradient part is zero.
        """
        vals = np.asarray(field(self.vector.coords), dtype=float).reshape(-1, self.dim)
        u1 = np.einsum("ij,ij->i", self.dof_direction, vals[self.dof_node])
        return np.concatenate([u1, np.zeros(self.N2)])

    def __repr__(self):
        return f"ExtendedSpace(p={self.p}, N1={self.N1}, N2={self.N2}, mesh={self.mesh!r})"


def build_extended_space(mesh, p):
    """Construct :class:`ExtendedSpace` for ``mesh`` and vector order ``p``."""
    return ExtendedSpace(mesh, p)


def dof_counts(space):
    """``(N1, N2, NDofs)`` of an :class:`ExtendedSpace`."""
    return space.N1, space.N2, space.N1 + space.N2


def eval_basis(space, cells, ref_points):
    """Evaluate the local nodal basis of a :class:`ScalarSpace` on given cells.

    Parameters
    ----------
    space : ScalarSpace
    cells : array_like of int
    ref_points : array_like, shape (n_points, dim)
        Points in the reference simplex.

    Returns
    -------
    BasisEval
    """
    mesh = space.mesh
    d = mesh.dim
    ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
    lam = barycentric(ref_points)
    if np.any(lam < -1e-12):
        raise SpaceError("reference point outside the reference simplex")
    cells = np.atleast_1d(np.asarray(cells, dtype=np.int64))
    B = mesh.jacobians[cells]
    det = np.abs(np.linalg.det(B))
    if np.any(det < 1e-14 * mesh.h ** d):
        raise SpaceError("degenerate cell")
    values, rgrads = lagrange_basis(d, space.order, ref_points)
    binvT = np.transpose(np.linalg.inv(B), (0, 2, 1))
    grads = np.einsum("cij,qaj->cqai", binvT, rgrads)
    b = mesh.vertices[mesh.cells[cells, 0]]
    return BasisEval(values, grads, B, b, det)


def curl_of_gradient(grad):
    """Curl from a Jacobian ``grad[..., j, m] = d_m u_j``.

    Returns shape ``(..., 1)`` in 2D (the scalar curl) and ``(..., 3)`` in 3D.
    """
    d = grad.shape[-1]
    if d == 2:
        return (grad[..., 1, 0] - grad[..., 0, 1])[..., None]
    return np.stack([grad[..., 2, 1] - grad[..., 1, 2],
                     grad[..., 0, 2] - grad[..., 2, 0],
                     grad[..., 1, 0] - grad[..., 0, 1]], axis=-1)


def evaluate_field(space, u, ref_points, cells=None):
    """Values and curls of the discrete field ``u`` at reference points of every cell.

    Returns
    -------
    values : ndarray, shape (n_cells, n_points, dim)
    curls : ndarray, shape (n_cells, n_points, 1 or 3)
    ev : BasisEval
        Evaluation data of the vector part (for weights and physical points).
    """
    mesh = space.mesh
    if cells is None:
        cells = np.arange(mesh.n_cells)
    vs, ss = space.vector, space.scalar
    ev = eval_basis(vs, cells, ref_points)
    es = eval_basis(ss, cells, ref_points)
    U = space.vector_nodal_values(u)[vs.cell_nodes[cells]]
    phi = space.scalar_nodal_values(u)[ss.cell_nodes[cells]]
    values = np.einsum("qa,caj->cqj", ev.values, U) + np.einsum("cqbj,cb->cqj", es.grads, phi)
    jac = np.einsum("cqam,caj->cqjm", ev.grads, U)
    return values, curl_of_gradient(jac), ev
