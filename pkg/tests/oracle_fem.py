"""Brute-force finite element oracle built on exact barycentric integration.

Each global basis function is represented, cell by cell, as a polynomial in
barycentric coordinates (dict exponent -> coefficient). Integrals use
``int_K lambda^a = a! d! |K| / (|a| + d)!``. Nodes are identified by their
coordinates, boundary normals by a direct scan of boundary faces. Nothing
here shares code with the package beyond the mesh arrays.
"""
import itertools
from collections import defaultdict
from math import factorial

import numpy as np


def _mul(p, q):
    out = defaultdict(float)
    for a, x in p.items():
        for b, y in q.items():
            out[tuple(i + j for i, j in zip(a, b))] += x * y
    return dict(out)


def _diff(p, i):
    out = defaultdict(float)
    for a, x in p.items():
        if a[i]:
            b = list(a)
            b[i] -= 1
            out[tuple(b)] += x * a[i]
    return dict(out)


def _integral(p, d, vol):
    tot = 0.0
    for a, x in p.items():
        num = np.prod([factorial(k) for k in a])
        tot += x * num * factorial(d) / factorial(sum(a) + d)
    return tot * vol


def _lattice_poly(alpha, k):
    d1 = len(alpha)
    p = {(0,) * d1: 1.0}
    for i, ai in enumerate(alpha):
        for j in range(ai):
            e = [0] * d1
            e[i] = 1
            p = _mul(p, {tuple(e): k / (j + 1), (0,) * d1: -j / (j + 1)})
    return p


def _bary_grads(X):
    d = X.shape[1]
    T = (X[1:] - X[0]).T
    Ti = np.linalg.inv(T)
    g = np.vstack([-Ti.sum(axis=0), Ti])  # rows: grad lambda_i
    return g, abs(np.linalg.det(T)) / factorial(d)


def _key(x):
    return tuple(np.round(x, 10))


def boundary_faces(cells):
    cnt = defaultdict(list)
    for c, cell in enumerate(cells):
        for f in itertools.combinations(sorted(cell), len(cell) - 1):
            cnt[f].append(c)
    return {f: cs[0] for f, cs in cnt.items() if len(cs) == 1}


def pencil(vertices, cells, p):
    """Dense ``A, B`` of the extended pencil, built independently."""
    V = np.asarray(vertices, float)
    d = V.shape[1]
    cells = [list(c) for c in cells]
    bfaces = boundary_faces(cells)
    # outward unit normal of each boundary face, with its vertex coordinates
    fnorm = []
    for f, c in bfaces.items():
        P = V[list(f)]
        if d == 2:
            t = P[1] - P[0]
            nrm = np.array([t[1], -t[0]])
        else:
            nrm = np.cross(P[1] - P[0], P[2] - P[0])
        nrm /= np.linalg.norm(nrm)
        other = [v for v in cells[c] if v not in f][0]
        if nrm @ (V[other] - P[0]) > 0:
            nrm = -nrm
        fnorm.append((P, nrm))

    def on_face(x, P):
        # barycentric coordinates of x in the face simplex
        T = (P[1:] - P[0]).T
        lam, *_ = np.linalg.lstsq(T, x - P[0], rcond=None)
        if np.linalg.norm(T @ lam - (x - P[0])) > 1e-10:
            return False
        return lam.min() > -1e-10 and lam.sum() < 1 + 1e-10

    def normals(x):
        out = []
        for P, n in fnorm:
            if on_face(x, P) and not any(np.allclose(n, m, atol=1e-12) for m in out):
                out.append(n)
        return out

    def layout(k):
        keys = {}
        per_cell = []
        for cell in cells:
            X = V[cell]
            loc = []
            for alpha in itertools.product(range(k + 1), repeat=d + 1):
                if sum(alpha) != k:
                    continue
                x = np.array(alpha) @ X / k
                loc.append((keys.setdefault(_key(x), len(keys)), _lattice_poly(alpha, k)))
            per_cell.append(loc)
        coords = {i: np.array(x) for x, i in keys.items()}
        return len(keys), coords, per_cell

    nv, vcoords, vloc = layout(p)
    ns, scoords, sloc = layout(p + 1)
    # vector DOFs: list of (node, direction)
    vdofs = []
    for node in range(nv):
        nr = normals(vcoords[node])
        if not nr:
            vdofs += [(node, e) for e in np.eye(d)]
        elif len(nr) == 1:
            vdofs.append((node, nr[0]))
    sdofs = [node for node in range(ns) if not normals(scoords[node])]
    N1, N2 = len(vdofs), len(sdofs)
    vidx = defaultdict(list)
    for i, (node, e) in enumerate(vdofs):
        vidx[node].append((i, e))
    sidx = {node: N1 + i for i, node in enumerate(sdofs)}
    N = N1 + N2
    A = np.zeros((N, N))
    B = np.zeros((N, N))
    for c, cell in enumerate(cells):
        g, vol = _bary_grads(V[cell])
        # local functions as (global index, list of d component polys in lambda)
        funcs = []
        for node, poly in vloc[c]:
            for i, e in vidx[node]:
                funcs.append((i, [{a: x * e[m] for a, x in poly.items()} for m in range(d)]))
        for node, poly in sloc[c]:
            if node in sidx:
                dp = [_diff(poly, i) for i in range(d + 1)]
                comps = []
                for m in range(d):
                    acc = defaultdict(float)
                    for i in range(d + 1):
                        for a, x in dp[i].items():
                            acc[a] += x * g[i, m]
                    comps.append(dict(acc))
                funcs.append((sidx[node], comps))

        def deriv(q, m):
            acc = defaultdict(float)
            for i in range(d + 1):
                for a, x in _diff(q, i).items():
                    acc[a] += x * g[i, m]
            return dict(acc)

        curls = []
        for _, comps in funcs:
            if d == 2:
                cu = [_add(deriv(comps[1], 0), deriv(comps[0], 1), -1.0)]
            else:
                cu = [_add(deriv(comps[2], 1), deriv(comps[1], 2), -1.0),
                      _add(deriv(comps[0], 2), deriv(comps[2], 0), -1.0),
                      _add(deriv(comps[1], 0), deriv(comps[0], 1), -1.0)]
            curls.append(cu)
        for (i, fi), ci in zip(funcs, curls):
            for (j, fj), cj in zip(funcs, curls):
                B[i, j] += sum(_integral(_mul(a, b), d, vol) for a, b in zip(fi, fj))
                A[i, j] += sum(_integral(_mul(a, b), d, vol) for a, b in zip(ci, cj))
    return A, B, N1, N2


def _add(p, q, s=1.0):
    out = defaultdict(float, p)
    for a, x in q.items():
        out[a] += s * x
    return dict(out)
