"""Conforming simplicial meshes of the benchmark domains.

Five domains are supported:

* ``square``        the unit square ``(0, 1)^2``
* ``lshape2d``      ``(-1, 1)^2`` minus the quadrant ``[0, 1] x [-1, 0]``
* ``cube``          the unit cube ``(0, 1)^3``
* ``thick_lshape``  ``lshape2d x (0, 1)``
* ``tetra``         the reference tetrahedron, uniformly red-refined

Grid squares are split by the diagonal through their smallest corner. Grid
cubes are split into 12 tetrahedra around the cube centroid, each face
being halved by the diagonal through its smallest global vertex.
"""
from functools import cached_property
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .exceptions import MeshError

DOMAINS = ("square", "lshape2d", "cube", "thick_lshape", "tetra")

NORMAL_TOL = 1e-12


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _signed_volumes(vertices, cells):
    v = vertices[cells]
    edges = v[:, 1:, :] - v[:, :1, :]
    return np.linalg.det(edges)


class SimplicialMesh:
    """Immutable triangle or tetrahedral mesh.

    Parameters
    ----------
    vertices : array_like, shape (n_vertices, dim)
    cells : array_like, shape (n_cells, dim + 1)
        Vertex indices per cell. Negatively oriented cells are reordered so
        that every stored cell has positive signed volume.
    h : float, optional
        Nominal mesh size. Defaults to the longest edge.
    domain : str, optional
        Name of the generating domain, kept as metadata.
    refine_order : array_like, optional
        The same cells with the local vertex order used by :func:`refine_red`.
        Defaults to the sorted vertex indices.
    """

    def __init__(self, vertices, cells, h=None, domain=None, refine_order=None):
        vertices = np.asarray(vertices, dtype=float)
        cells = np.array(cells, dtype=np.int64)
        if refine_order is None:
            refine_order = np.sort(cells, axis=1)
        refine_order = np.array(refine_order, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] not in (2, 3):
            raise MeshError("vertices must have shape (n, 2) or (n, 3)")
        dim = vertices.shape[1]
        if cells.ndim != 2 or cells.shape[1] != dim + 1:
            raise MeshError(f"cells must have shape (n, {dim + 1})")
        if cells.size and (cells.min() < 0 or cells.max() >= len(vertices)):
            raise MeshError("cell refers to a nonexistent vertex")
        vol = _signed_volumes(vertices, cells)
        flip = vol < 0
        cells[flip, 0], cells[flip, 1] = cells[flip, 1].copy(), cells[flip, 0].copy()
        vol = np.abs(vol)
        if np.any(vol <= 1e-14 * np.max(vol, initial=0.0)):
            raise MeshError("degenerate cell")
        self.dim = dim
        self.vertices = _readonly(vertices)
        self.cells = _readonly(cells)
        self.refine_order = _readonly(refine_order)
        self.domain = domain
        self._h = h

    def __repr__(self):
        return (f"SimplicialMesh(domain={self.domain!r}, dim={self.dim}, "
                f"n_vertices={self.n_vertices}, n_cells={self.n_cells})")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_cells(self):
        return len(self.cells)

    @cached_property
    def h(self):
        if self._h is not None:
            return float(self._h)
        return float(self.edge_lengths().max())

    @cached_property
    def volumes(self):
        """Cell measures ``|K|``."""
        fact = 2.0 if self.dim == 2 else 6.0
        return _readonly(_signed_volumes(self.vertices, self.cells) / fact)

    @cached_property
    def jacobians(self):
        """Affine maps ``x = B_K xhat + b_K``; returns ``B`` of shape (n_cells, dim, dim)."""
        v = self.vertices[self.cells]
        return _readonly(np.transpose(v[:, 1:, :] - v[:, :1, :], (0, 2, 1)))

    @cached_property
    def inverse_transposes(self):
        return _readonly(np.transpose(np.linalg.inv(self.jacobians), (0, 2, 1)))

    def edge_lengths(self):
        e = self.edges
        return np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1)

    @cached_property
    def edges(self):
        pairs = np.vstack([self.cells[:, [i, j]] for i, j in combinations(range(self.dim + 1), 2)])
        return _readonly(np.unique(np.sort(pairs, axis=1), axis=0))

    @cached_property
    def _faces(self):
        # every (cell, local face) with the opposite local vertex
        d = self.dim
        local = [tuple(j for j in range(d + 1) if j != i) for i in range(d + 1)]
        faces = np.vstack([self.cells[:, lf] for lf in local])
        owner = np.tile(np.arange(self.n_cells), d + 1)
        opposite = np.repeat(np.arange(d + 1), self.n_cells)
        key = np.sort(faces, axis=1)
        uniq, inv, counts = np.unique(key, axis=0, return_inverse=True, return_counts=True)
        return key, owner, opposite, uniq, inv.ravel(), counts

    @cached_property
    def faces(self):
        """Unique (d-1)-faces as sorted vertex tuples."""
        return _readonly(self._faces[3])

    @cached_property
    def boundary_faces(self):
        """Boundary faces, shape (n_bfaces, dim), vertex indices."""
        return self._boundary[0]

    @cached_property
    def boundary_normals(self):
        """Outward unit normals matching :attr:`boundary_faces`."""
        return self._boundary[1]

    @cached_property
    def boundary_face_cells(self):
        return self._boundary[2]

    @cached_property
    def _boundary(self):
        key, owner, opposite, uniq, inv, counts = self._faces
        if np.any(counts > 2):
            raise MeshError("nonconforming mesh: a face is shared by more than two cells")
        once = counts[inv] == 1
        bf = key[once]
        cell = owner[once]
        opp = self.cells[cell, opposite[once]]
        x = self.vertices
        if self.dim == 2:
            t = x[bf[:, 1]] - x[bf[:, 0]]
            n = np.column_stack([t[:, 1], -t[:, 0]])
        else:
            n = np.cross(x[bf[:, 1]] - x[bf[:, 0]], x[bf[:, 2]] - x[bf[:, 0]])
        n /= np.linalg.norm(n, axis=1)[:, None]
        inward = np.einsum("ij,ij->i", n, x[opp] - x[bf[:, 0]]) > 0
        n[inward] *= -1
        order = np.lexsort(bf.T[::-1])
        return _readonly(bf[order]), _readonly(n[order]), _readonly(cell[order])

    @cached_property
    def vertex_to_cells(self):
        """Sparse incidence (n_vertices x n_cells); row ``z`` is the patch of ``z``."""
        rows = self.cells.ravel()
        cols = np.repeat(np.arange(self.n_cells), self.dim + 1)
        m = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n_vertices, self.n_cells))
        return m

    def patch(self, z):
        """Cell indices of the element patch around vertex ``z``."""
        m = self.vertex_to_cells
        return m.indices[m.indptr[z]:m.indptr[z + 1]]

    @cached_property
    def patch_sizes(self):
        return _readonly(np.diff(self.vertex_to_cells.indptr))

    @cached_property
    def boundary_vertices(self):
        return _readonly(np.unique(self.boundary_faces))

    def counts(self):
        """Entity counts ``(N, NE, NF, NT)``; in 2D ``NF`` counts triangles and ``NT`` is 0."""
        if self.dim == 2:
            return MeshCounts(self.n_vertices, len(self.edges), self.n_cells, 0)
        return MeshCounts(self.n_vertices, len(self.edges), len(self.faces), self.n_cells)

    def shape_ratios(self):
        """Circumradius over inradius for every cell."""
        x = self.vertices[self.cells]
        d = self.dim
        # circumcenter c solves 2 (x_i - x_0) . c = |x_i|^2 - |x_0|^2
        lhs = 2.0 * (x[:, 1:] - x[:, :1])
        rhs = np.sum(x[:, 1:] ** 2, axis=2) - np.sum(x[:, :1] ** 2, axis=2)
        c = np.linalg.solve(lhs, rhs[..., None])[..., 0]
        circ = np.linalg.norm(x[:, 0] - c, axis=1)
        if d == 2:
            la = np.linalg.norm(x[:, 1] - x[:, 2], axis=1)
            lb = np.linalg.norm(x[:, 0] - x[:, 2], axis=1)
            lc = np.linalg.norm(x[:, 0] - x[:, 1], axis=1)
            surface = la + lb + lc
            inr = 2.0 * self.volumes / surface
        else:
            surface = np.zeros(self.n_cells)
            for i in range(4):
                f = [j for j in range(4) if j != i]
                a = np.cross(x[:, f[1]] - x[:, f[0]], x[:, f[2]] - x[:, f[0]])
                surface += 0.5 * np.linalg.norm(a, axis=1)
            inr = 3.0 * self.volumes / surface
        return circ / inr

    def contains_boundary_node(self, support):
        """Whether the node carried by vertex set ``support`` lies on the boundary."""
        return len(self.normals_of_support(support)) > 0

    @cached_property
    def _bface_lookup(self):
        lookup = {}
        for f, n in zip(self.boundary_faces, self.boundary_normals):
            for r in range(1, self.dim + 1):
                for sub in combinations(f.tolist(), r):
                    lookup.setdefault(sub, []).append(n)
        return lookup

    def normals_of_support(self, support):
        """Outward normals of the boundary faces whose closure contains ``support``."""
        key = tuple(sorted(int(s) for s in support))
        return _dedup_normals(self._bface_lookup.get(key, []))

    def write(self, path):
        """Write the plain-text debugging format (dim, vertices, cells)."""
        with open(path, "w") as fh:
            fh.write(f"{self.dim}\n{self.n_vertices}\n")
            for v in self.vertices:
                fh.write(" ".join(f"{c:.17g}" for c in v) + "\n")
            fh.write(f"{self.n_cells}\n")
            for c in self.cells:
                fh.write(" ".join(str(i) for i in c) + "\n")

    @classmethod
    def read(cls, path):
        with open(path) as fh:
            tokens = fh.read().split()
        dim = int(tokens[0])
        nv = int(tokens[1])
        pos = 2
        verts = np.array(tokens[pos:pos + nv * dim], dtype=float).reshape(nv, dim)
        pos += nv * dim
        nc = int(tokens[pos])
        cells = np.array(tokens[pos + 1:pos + 1 + nc * (dim + 1)], dtype=np.int64).reshape(nc, dim + 1)
        return cls(verts, cells)


class MeshCounts(tuple):
    """Named entity counts ``(N, NE, NF, NT)``."""

    def __new__(cls, N, NE, NF, NT):
        return super().__new__(cls, (int(N), int(NE), int(NF), int(NT)))

    N = property(lambda self: self[0])
    NE = property(lambda self: self[1])
    NF = property(lambda self: self[2])
    NT = property(lambda self: self[3])

    def __repr__(self):
        return f"MeshCounts(N={self[0]}, NE={self[1]}, NF={self[2]}, NT={self[3]})"


def _dedup_normals(normals, tol=NORMAL_TOL):
    out = []
    for n in normals:
        if not any(np.max(np.abs(n - m)) <= tol for m in out):
            out.append(np.asarray(n, dtype=float))
    return out


def boundary_normals_at_node(mesh, v):
    """Outward unit normals of all boundary faces containing a point.

    Parameters
    ----------
    mesh : SimplicialMesh
    v : int or array_like
        A vertex index, or the coordinates of a finite element node.

    Returns
    -------
    list of ndarray
        Distinct normals (tolerance ``1e-12``).
    """
    if isinstance(v, (int, np.integer)):
        normals = mesh.normals_of_support([int(v)])
    else:
        x = np.asarray(v, dtype=float)
        normals = []
        for f, n in zip(mesh.boundary_faces, mesh.boundary_normals):
            if _point_in_face(mesh.vertices[f], x):
                normals.append(n)
        normals = _dedup_normals(normals)
    if not normals:
        raise MeshError(f"node {v!r} does not lie on the boundary")
    return normals


def _point_in_face(corners, x, tol=1e-12):
    a = corners[0]
    t = (corners[1:] - a).T
    coef, *_ = np.linalg.lstsq(t, x - a, rcond=None)
    if np.linalg.norm(t @ coef - (x - a)) > tol * max(1.0, np.linalg.norm(t)):
        return False
    return np.all(coef >= -tol) and coef.sum() <= 1 + tol


# -- generation --------------------------------------------------------------

def _grid_triangles(n, keep, origin, nx, ny):
    """Triangulate kept squares of an ``nx x ny`` grid with spacing ``1/n``."""
    idx = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
    cells = []
    for i in range(nx):
        for j in range(ny):
            if not keep(i, j):
                continue
            a, b, c, d = idx[i, j], idx[i + 1, j], idx[i + 1, j + 1], idx[i, j + 1]
            cells.append((a, b, c))
            cells.append((a, c, d))
    xs = origin[0] + np.arange(nx + 1) / n
    ys = origin[1] + np.arange(ny + 1) / n
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.column_stack([X.ravel(), Y.ravel()])
    return verts, np.array(cells)


def _cube_tets(n, keep, origin, nx, ny, nz):
    """Split kept cubes of a grid into 12 tetrahedra around their centroids."""
    idx = np.arange((nx + 1) * (ny + 1) * (nz + 1)).reshape(nx + 1, ny + 1, nz + 1)
    ngrid = idx.size
    xs = origin[0] + np.arange(nx + 1) / n
    ys = origin[1] + np.arange(ny + 1) / n
    zs = origin[2] + np.arange(nz + 1) / n
    X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
    grid = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    centroids = []
    cells = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                if not keep(i, j, k):
                    continue
                c = ngrid + len(centroids)
                centroids.append(grid[idx[i, j, k]] + 0.5 / n)
                for axis in range(3):
                    for side in (0, 1):
                        corners = []
                        for a in (0, 1):
                            for b in (0, 1):
                                off = [0, 0, 0]
                                off[axis] = side
                                off[(axis + 1) % 3] = a
                                off[(axis + 2) % 3] = b
                                corners.append(idx[i + off[0], j + off[1], k + off[2]])
                        # cyclic order around the face
                        q = [corners[0], corners[1], corners[3], corners[2]]
                        s = int(np.argmin(q))
                        q = q[s:] + q[:s]
                        cells.append((q[0], q[1], q[2], c))
                        cells.append((q[0], q[2], q[3], c))
    verts = np.vstack([grid, np.array(centroids)])
    cells = np.array(cells)
    used = np.unique(cells)
    remap = np.full(len(verts), -1)
    remap[used] = np.arange(len(used))
    return verts[used], remap[cells]


def _in_lshape(i, j, n):
    # square (i, j) of the 2n x 2n grid on (-1, 1)^2; removed quadrant x > 0, y < 0
    return not (i >= n and j < n)


def normalize_domain(domain):
    """Canonical domain name; accepts hyphens (``thick-lshape``)."""
    name = str(domain).replace("-", "_")
    if name not in DOMAINS:
        raise MeshError(f"unknown domain {domain!r}; expected one of {DOMAINS}")
    return name


def generate_domain(domain, n):
    """Build a conforming mesh of a benchmark domain.

    Parameters
    ----------
    domain : {'square', 'lshape2d', 'cube', 'thick_lshape', 'tetra'}
    n : int
        Subdivisions per unit length (``h = 1/n``); for ``tetra`` the number
        of red refinements of the reference tetrahedron (``h = 2**-n``).

    Returns
    -------
    SimplicialMesh
    """
    domain = normalize_domain(domain)
    if int(n) != n or n < 1:
        raise MeshError(f"subdivision count must be a positive integer, got {n!r}")
    n = int(n)
    if domain == "square":
        v, c = _grid_triangles(n, lambda i, j: True, (0.0, 0.0), n, n)
    elif domain == "lshape2d":
        v, c = _grid_triangles(n, lambda i, j: _in_lshape(i, j, n), (-1.0, -1.0), 2 * n, 2 * n)
        used = np.unique(c)
        remap = np.full(len(v), -1)
        remap[used] = np.arange(len(used))
        v, c = v[used], remap[c]
    elif domain == "cube":
        v, c = _cube_tets(n, lambda i, j, k: True, (0.0, 0.0, 0.0), n, n, n)
    elif domain == "thick_lshape":
        v, c = _cube_tets(n, lambda i, j, k: _in_lshape(i, j, n), (-1.0, -1.0, 0.0), 2 * n, 2 * n, n)
    else:
        mesh = SimplicialMesh(np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]),
                              [[0, 1, 2, 3]], h=1.0, domain="tetra")
        for _ in range(n):
            mesh = refine_red(mesh)
        return mesh
    return SimplicialMesh(v, c, h=1.0 / n, domain=domain)


def refine_red(mesh):
    """Uniform red refinement: 4 children per triangle, 8 per tetrahedron.

    Parent vertices keep their indices; edge midpoints are appended. The
    interior octahedron of a tetrahedron (v0, v1, v2, v3) is split along the
    diagonal joining the midpoints of edges (v0, v2) and (v1, v3). Children
    inherit a local vertex order from their parent, which keeps the number
    of similarity classes bounded under repeated refinement.
    """
    d = mesh.dim
    cells = mesh.refine_order
    edges = mesh.edges
    nv = mesh.n_vertices
    n_edges = len(edges)
    # edge id lookup through a dense key (a * nv + b) and binary search
    ekey = edges[:, 0] * nv + edges[:, 1]

    def mid(i, j):
        a, b = cells[:, i], cells[:, j]
        k = np.minimum(a, b) * nv + np.maximum(a, b)
        return nv + np.searchsorted(ekey, k)

    mids = 0.5 * (mesh.vertices[edges[:, 0]] + mesh.vertices[edges[:, 1]])
    verts = np.vstack([mesh.vertices, mids])
    v = [cells[:, i] for i in range(d + 1)]
    if d == 2:
        m01, m02, m12 = mid(0, 1), mid(0, 2), mid(1, 2)
        kids = [(v[0], m01, m02), (m01, v[1], m12), (m02, m12, v[2]), (m01, m02, m12)]
    else:
        m01, m02, m03 = mid(0, 1), mid(0, 2), mid(0, 3)
        m12, m13, m23 = mid(1, 2), mid(1, 3), mid(2, 3)
        kids = [
            (v[0], m01, m02, m03), (m01, v[1], m12, m13),
            (m02, m12, v[2], m23), (m03, m13, m23, v[3]),
            (m01, m02, m03, m13), (m01, m02, m12, m13),
            (m02, m03, m13, m23), (m02, m12, m13, m23),
        ]
    order = np.stack([np.column_stack(k) for k in kids], axis=1).reshape(-1, d + 1)
    assert nv + n_edges == len(verts)
    h = mesh._h / 2.0 if mesh._h is not None else None
    return SimplicialMesh(verts, order, h=h, domain=mesh.domain, refine_order=order)


def check_conformity(mesh):
    """Brute-force audit of positivity and face sharing; raises on failure."""
    vol = _signed_volumes(mesh.vertices, mesh.cells)
    if np.any(vol <= 0):
        raise MeshError("cell with nonpositive signed volume")
    seen = {}
    for c in mesh.cells.tolist():
        for f in combinations(sorted(c), mesh.dim):
            seen[f] = seen.get(f, 0) + 1
    if any(k > 2 for k in seen.values()):
        raise MeshError("face shared by more than two cells")
    nb = sum(1 for k in seen.values() if k == 1)
    if nb != len(mesh.boundary_faces):
        raise MeshError("boundary face count mismatch")
    # geometric: no two vertices coincide
    key = np.round(mesh.vertices * 1e9).astype(np.int64)
    if len(np.unique(key, axis=0)) != mesh.n_vertices:
        raise MeshError("duplicate vertices")
    return True
