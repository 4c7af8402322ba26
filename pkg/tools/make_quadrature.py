"""Search for fully symmetric, positive simplex quadrature rules.

Solves the monomial moment equations for a fixed orbit structure with
nonlinear least squares from random starts and prints the polished rule
as a Python literal. Output is pasted into ``extlag/_quadrature_tables.py``.

    python tools/make_quadrature.py 3 8 S31 S31 S31 S31 S22 S211 S211
"""
import itertools
import sys
from math import factorial

import numpy as np
from scipy.optimize import least_squares

NPAR = {"S3": 0, "S21": 1, "S111": 2, "S4": 0, "S31": 1, "S22": 1, "S211": 2, "S1111": 3}


def orbit_points(kind, par):
    if kind == "S3":
        base = [1 / 3, 1 / 3, 1 / 3]
    elif kind == "S21":
        a = par[0]
        base = [a, a, 1 - 2 * a]
    elif kind == "S111":
        a, b = par
        base = [a, b, 1 - a - b]
    elif kind == "S4":
        base = [0.25] * 4
    elif kind == "S31":
        a = par[0]
        base = [a, a, a, 1 - 3 * a]
    elif kind == "S22":
        a = par[0]
        base = [a, a, 0.5 - a, 0.5 - a]
    elif kind == "S211":
        a, b = par
        base = [a, a, b, 1 - 2 * a - b]
    elif kind == "S1111":
        a, b, c = par
        base = [a, b, c, 1 - a - b - c]
    return np.array(sorted(set(itertools.permutations(base))))


def exponents(dim, degree):
    return [e for e in itertools.product(range(degree + 1), repeat=dim) if sum(e) <= degree]


def exact(e):
    num = np.prod([factorial(k) for k in e])
    return num / factorial(sum(e) + len(e))


def unpack(x, structure):
    pts, wts, i = [], [], 0
    for kind in structure:
        n = NPAR[kind]
        par = x[i:i + n]
        w = x[i + n]
        i += n + 1
        p = orbit_points(kind, par)
        pts.append(p)
        wts.append(np.full(len(p), w))
    return np.vstack(pts), np.concatenate(wts)


def residual(x, structure, exps, targets):
    bary, w = unpack(x, structure)
    pts = bary[:, 1:]
    vals = np.array([np.sum(w * np.prod(pts ** np.array(e), axis=1)) for e in exps])
    return (vals - targets) / targets


def search(dim, degree, structure, tries=4000, seed=0):
    rng = np.random.default_rng(seed)
    exps = exponents(dim, degree)
    targets = np.array([exact(e) for e in exps])
    vol = 1 / factorial(dim)
    npts = sum(len(orbit_points(k, [0.1, 0.2, 0.3][:NPAR[k]])) for k in structure)
    for _ in range(tries):
        x0 = []
        for kind in structure:
            n = NPAR[kind]
            x0 += list(rng.uniform(0.0, 0.5 if kind in ("S21", "S22") else 1 / (dim + 1), n))
            x0.append(vol / npts * rng.uniform(0.5, 1.5))
        res = least_squares(residual, x0, args=(structure, exps, targets), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        bary, w = unpack(res.x, structure)
        if np.max(np.abs(res.fun)) < 1e-13 and np.all(w > 0) and np.all(bary > -1e-14):
            return bary, w
    raise RuntimeError("no rule found")


if __name__ == "__main__":
    dim, degree = int(sys.argv[1]), int(sys.argv[2])
    bary, w = search(dim, degree, sys.argv[3:])
    print(f"    ({dim}, {degree}): (")
    print("        [")
    for b in bary:
        print("            [" + ", ".join(repr(float(v)) for v in b) + "],")
    print("        ],")
    print("        [" + ", ".join(repr(float(v)) for v in w) + "],")
    print("    ),")
