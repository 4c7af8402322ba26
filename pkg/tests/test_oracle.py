"""Comparison with the brute-force oracle in ``oracle_fem``.

The oracle numbers unknowns its own way and may pick opposite normal signs,
so only invariants under signed permutations are compared.
"""
import numpy as np
import pytest
import scipy.linalg as la

from extlag.assembly import assemble_pencil
from extlag.eigensolve import dense_gep
from extlag.fespace import ExtendedSpace
from extlag.mesh import generate_domain

from oracle_fem import pencil as oracle_pencil

CASES = [("square", 2, 1), ("square", 2, 2), ("lshape2d", 1, 1), ("cube", 1, 1), ("cube", 1, 2),
         ("thick_lshape", 1, 1), ("tetra", 1, 2)]


@pytest.fixture(scope="module", params=CASES, ids=lambda c: f"{c[0]}-n{c[1]}-p{c[2]}")
def pair(request):
    domain, n, p = request.param
    m = generate_domain(domain, n)
    P = assemble_pencil(ExtendedSpace(m, p))
    A, B, N1, N2 = oracle_pencil(m.vertices, m.cells, p)
    return P, np.asarray(A), np.asarray(B), N1, N2


def test_dimensions(pair):
    P, A, B, N1, N2 = pair
    assert (P.N1, P.N2) == (N1, N2)


def test_matrix_spectra(pair):
    P, A, B, N1, N2 = pair
    for ours, theirs in ((P.A, A), (P.B, B), (P.B22, B[N1:, N1:]), (P.B11, B[:N1, :N1])):
        a = la.eigvalsh(ours.toarray())
        b = la.eigvalsh(theirs)
        assert np.allclose(a, b, rtol=1e-10, atol=1e-12 * np.abs(b).max())


def test_pencil_spectra(pair):
    P, A, B, N1, N2 = pair
    ours = dense_gep(P.A, P.B)
    theirs = dense_gep(A, B)
    assert ours.zero_mode_count == theirs.zero_mode_count
    assert ours.b_rank_deficiency == theirs.b_rank_deficiency
    assert np.allclose(ours.eigenvalues, theirs.eigenvalues, rtol=1e-10)
