"""Exact linear algebra engines, cross-checked against brute force / sympy."""

from fractions import Fraction

import numpy as np
import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from mu_orient import fplinalg, plocal


rng = np.random.default_rng(20260810)


def naive_rank_mod_p(mat, p):
    a = [[int(x) % p for x in row] for row in mat]
    m = len(a)
    n = len(a[0]) if a else 0
    rank = 0
    for c in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_simple_matches_naive(p):
    for _ in range(20):
        m, n = rng.integers(1, 12, size=2)
        a = rng.integers(0, p, size=(m, n))
        assert fplinalg.rank_mod_p(a, p) == naive_rank_mod_p(a.tolist(), p)


@pytest.mark.parametrize("p", [3, 7])
def test_rank_blocked_matches_simple(p):
    for trial in range(6):
        n = int(rng.integers(30, 90))
        r = int(rng.integers(0, n))
        # construct a matrix of known-ish rank as a product
        a = fplinalg.matmul_mod_p(rng.integers(0, p, size=(n, r + 1)),
                                  rng.integers(0, p, size=(r + 1, n)), p)
        want = fplinalg._rank_simple(fplinalg.as_modp(a, p), p)
        got = fplinalg._rank_blocked(fplinalg.as_modp(a, p), p, panel=7)
        assert got == want


def test_rank_blocked_rectangular():
    p = 5
    for shape in [(40, 9), (9, 40), (33, 33)]:
        a = rng.integers(0, p, size=shape)
        assert (fplinalg._rank_blocked(fplinalg.as_modp(a, p), p, panel=4)
                == naive_rank_mod_p(a.tolist(), p))


def test_kernel_mod_p():
    p = 3
    a = np.array([[1, 1, 0], [0, 1, 0]])
    k = fplinalg.kernel_mod_p(a, p)
    assert k.shape == (3, 1)
    assert not np.any(fplinalg.matmul_mod_p(a, k, p))


def test_solve_mod_p():
    p = 5
    a = rng.integers(0, p, size=(6, 6))
    x = rng.integers(0, p, size=6)
    b = fplinalg.matmul_mod_p(a, x.reshape(-1, 1), p).ravel()
    got = fplinalg.solve_mod_p(a, b, p)
    assert got is not None
    assert np.array_equal(fplinalg.matmul_mod_p(a, got.reshape(-1, 1), p).ravel(), b)


def test_solve_mod_p_inconsistent():
    assert fplinalg.solve_mod_p([[1, 1], [1, 1]], [1, 2], 3) is None


def test_matrix_power():
    p = 3
    g = np.array([[0, 2], [1, 2]])  # gamma on rhobar at p=3
    assert np.array_equal(fplinalg.matrix_power_mod_p(g, 3, p), np.eye(2))


# ------------------------------------------------------------ p-local exact

def test_plocal_solver_prefers_matrix_columns():
    # 3x = 3 has the p-local solution x = 1 even though the pivot is p
    s = plocal.PLocalSolver([[Fraction(3)]], 3)
    assert s.solve([Fraction(3)]) == [Fraction(1)]
    assert s.solve([Fraction(1)]) is None  # 3x = 1 is not 3-local


def test_plocal_solver_free_column_case():
    # p*x1 + x2 = 1 is solvable (0, 1); naive left-to-right pivoting fails
    s = plocal.PLocalSolver([[Fraction(3), Fraction(1)]], 3)
    x = s.solve([Fraction(1)])
    assert x is not None and 3 * x[0] + x[1] == 1
    assert all(v.denominator % 3 != 0 for v in x)


def test_plocal_solver_random_consistency():
    p = 3
    for _ in range(25):
        m, n = rng.integers(1, 7, size=2)
        a = rng.integers(-6, 7, size=(m, n)).tolist()
        x0 = [Fraction(int(v)) for v in rng.integers(-4, 5, size=n)]
        b = [sum(Fraction(a[i][j]) * x0[j] for j in range(n)) for i in range(m)]
        x = plocal.PLocalSolver(a, p).solve(b)
        assert x is not None
        for i in range(m):
            assert sum(Fraction(a[i][j]) * x[j] for j in range(n)) == b[i]


def test_kernel_basis_saturated():
    # ker of [3 1] over Z_(3) is spanned by (1, -3): entry 1 at the free column
    kb = plocal.kernel_basis([[Fraction(3), Fraction(1)]], 3)
    assert len(kb) == 1
    v = kb[0]
    assert 3 * v[0] + v[1] == 0
    assert 1 in (v[0], v[1])


def test_kernel_basis_random_saturation():
    # p*w in ker and w integral implies w in the Z_(p)-span of the basis
    p = 3
    for _ in range(20):
        m, n = rng.integers(1, 6, size=2)
        a = rng.integers(-5, 6, size=(m, n)).tolist()
        kb = plocal.kernel_basis(a, p)
        for v in kb:
            for i in range(m):
                assert sum(Fraction(a[i][j]) * v[j] for j in range(n)) == 0
        if kb:
            # mod-p reduction of the basis stays independent => saturated
            red = [[x.numerator * pow(x.denominator, -1, p) % p for x in v]
                   for v in kb]
            assert naive_rank_mod_p(red, p) == len(kb)


def test_smith_valuations_vs_sympy():
    p = 3
    for _ in range(15):
        m, n = rng.integers(1, 6, size=2)
        a = rng.integers(-9, 10, size=(m, n))
        vals, deficiency = plocal.smith_valuations(a.tolist(), p)
        snf = smith_normal_form(Matrix(a.tolist()))
        diag = [snf[i, i] for i in range(min(m, n))]
        want = []
        for d in diag:
            d = int(d)
            if d == 0:
                continue
            v = 0
            while d % p == 0:
                d //= p
                v += 1
            want.append(v)
        assert sorted(vals) == sorted(want)
        assert deficiency == m - len(want)


def test_tate_lattice_rhobar():
    # gamma on rhobar: even trivial, odd Z/p
    g = [[0, -1], [1, -1]]
    dims = plocal.tate_lattice(g, 3)
    assert (dims.even_dim, dims.odd_dim) == (0, 1)


def test_tate_lattice_trivial():
    dims = plocal.tate_lattice([[1]], 3)
    assert (dims.even_dim, dims.odd_dim) == (1, 0)


def test_tate_lattice_regular():
    g = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    dims = plocal.tate_lattice(g, 3)
    assert (dims.even_dim, dims.odd_dim) == (0, 0)


def test_tate_mod_pn_trivial_module():
    # Z/p^N with trivial action: both parities Z/p (coefficient ghosts)
    for n_exp in (1, 2, 3):
        dims = plocal.tate_mod_pn([[1]], 3, n_exp)
        assert (dims.even_dim, dims.odd_dim) == (1, 1)


def test_tate_mod_pn_vs_universal_coefficients():
    # dims over Z/p^N equal even+odd of the lattice in both parities
    mats = {
        "rhobar": [[0, -1], [1, -1]],
        "regular": [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        "trivial": [[1]],
    }
    for g in mats.values():
        lat = plocal.tate_lattice(g, 3)
        tot = lat.even_dim + lat.odd_dim
        for n_exp in (1, 2):
            md = plocal.tate_mod_pn(g, 3, n_exp)
            assert md.even_dim == tot
            assert md.odd_dim == tot
