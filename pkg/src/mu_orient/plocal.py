"""Exact linear algebra over Z_(p): echelon forms, kernels, Smith data.

Matrices are lists of rows of Fractions (p-local: denominators coprime to
p).  Pivots are always chosen with minimal p-adic valuation across the
whole eligible submatrix, which keeps every division p-local and makes
back-substitution with zero free variables sound: a system has a p-local
solution iff the transformed right-hand side is divisible by each pivot
and vanishes on the zero rows.

This module underpins the Z/p^N and integer-lattice Tate cohomology
computations and the transfer-witness solver.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import NoWitness


def _val(x: Fraction, p: int):
    """p-adic valuation of a p-local fraction (inf for zero)."""
    n = x.numerator
    if n == 0:
        return math.inf
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def as_fraction_matrix(mat) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in mat]


class PLocalEchelon:
    """Staircase form E = U*A (U invertible over Z_(p)), p-power pivots.

    Only columns < pivot_limit are eligible for pivoting; trailing columns
    (e.g. an augmented identity) are transformed passively.  ``pivots``
    lists (row, col, valuation) in elimination order; pivot entries equal
    p**valuation exactly and valuations are nondecreasing.
    """

    def __init__(self, mat, p: int, pivot_limit: int | None = None):
        self.p = p
        a = as_fraction_matrix(mat)
        self.nrows = len(a)
        self.ncols = len(a[0]) if a else 0
        self.limit = self.ncols if pivot_limit is None else pivot_limit
        self.pivots: list[tuple[int, int, int]] = []
        used_cols: set[int] = set()
        r = 0
        while r < self.nrows:
            best = None
            for j in range(self.limit):
                if j in used_cols:
                    continue
                for i in range(r, self.nrows):
                    v = _val(a[i][j], p)
                    if v is math.inf:
                        continue
                    key = (v, j, i)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            v, j, i = best
            a[r], a[i] = a[i], a[r]
            unit = a[r][j] / Fraction(p) ** v
            inv = Fraction(1) / unit
            a[r] = [x * inv for x in a[r]]
            piv = a[r][j]
            for i2 in range(r + 1, self.nrows):
                x = a[i2][j]
                if x:
                    f = x / piv
                    row, prow = a[i2], a[r]
                    a[i2] = [y - f * z for y, z in zip(row, prow)]
            self.pivots.append((r, j, v))
            used_cols.add(j)
            r += 1
        self.rows = a

    @property
    def rank(self) -> int:
        return len(self.pivots)


class PLocalSolver:
    """Repeated p-local solves A x = b against a fixed matrix A.

    Solutions set all free variables to zero, so when the pivot columns
    are scanned in declared order the support is the echelon-minimal one.
    """

    def __init__(self, mat, p: int):
        a = as_fraction_matrix(mat)
        self.p = p
        self.nrows = len(a)
        self.ncols = len(a[0]) if a else 0
        n = self.nrows
        aug = [row + [Fraction(1 if k == i else 0) for k in range(n)]
               for i, row in enumerate(a)]
        self.ech = PLocalEchelon(aug, p, pivot_limit=self.ncols)

    def solve(self, b):
        """A p-local solution with zero free variables, or None."""
        b = [Fraction(x) for x in b]
        rows = self.ech.rows
        n, m = self.nrows, self.ncols
        rhs = [sum(rows[i][m + k] * b[k] for k in range(n) if rows[i][m + k] and b[k])
               for i in range(n)]
        x = [Fraction(0)] * m
        for r, c, v in reversed(self.ech.pivots):
            acc = rhs[r]
            row = rows[r]
            for j in range(m):
                if j != c and row[j] and x[j]:
                    acc -= row[j] * x[j]
            if acc == 0:
                continue
            q = acc / (Fraction(self.p) ** v)
            if q.denominator % self.p == 0:
                return None
            x[c] = q
        for r in range(self.ech.rank, n):
            if rhs[r] != 0:
                return None
        return x


def rank_q(mat, p: int = 2) -> int:
    """Rank over Q (the prime only steers pivoting)."""
    return PLocalEchelon(mat, p).rank


def kernel_basis(mat, p: int) -> list[list[Fraction]]:
    """Saturated Z_(p)-basis of ker(A), one vector per free column.

    Each vector has entry 1 at its free column and p-local entries at the
    pivot columns, so together they span the full kernel lattice
    ker(A) cap Z_(p)^n as a direct summand.
    """
    ech = PLocalEchelon(mat, p)
    pivot_cols = {c for _, c, _ in ech.pivots}
    free_cols = [j for j in range(ech.ncols) if j not in pivot_cols]
    basis = []
    for f in free_cols:
        x = [Fraction(0)] * ech.ncols
        x[f] = Fraction(1)
        for r, c, v in reversed(ech.pivots):
            row = ech.rows[r]
            acc = Fraction(0)
            for j in range(ech.ncols):
                if j != c and row[j] and x[j]:
                    acc += row[j] * x[j]
            if acc:
                x[c] = -acc / (Fraction(ech.p) ** v)
        basis.append(x)
    for x in basis:
        assert all(xx.denominator % p != 0 for xx in x), "kernel vector not p-local"
    return basis


def smith_valuations(mat, p: int) -> tuple[list[int], int]:
    """p-parts of the Smith normal form over Z_(p).

    Returns (pivot valuations sorted ascending, row-rank deficiency): the
    cokernel of A viewed as a map into Z_(p)^rows is
    (+)_v Z/p^v  (+)  Z_(p)^(rows - rank).
    """
    a = as_fraction_matrix(mat)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    vals: list[int] = []
    top = 0
    while top < nrows and top < ncols:
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = _val(a[i][j], p)
                if v is math.inf:
                    continue
                key = (v, i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        v, i, j = best
        a[top], a[i] = a[i], a[top]
        if j != top:
            for row in a:
                row[top], row[j] = row[j], row[top]
        unit = a[top][top] / Fraction(p) ** v
        inv = Fraction(1) / unit
        a[top] = [x * inv for x in a[top]]
        piv = a[top][top]
        for i2 in range(top + 1, nrows):
            x = a[i2][top]
            if x:
                f = x / piv
                a[i2] = [y - f * z for y, z in zip(a[i2], a[top])]
        for j2 in range(top + 1, ncols):
            x = a[top][j2]
            if x:
                f = x / piv
                for i2 in range(top, nrows):
                    if a[i2][top]:
                        a[i2][j2] -= f * a[i2][top]
        vals.append(v)
        top += 1
    return sorted(vals), nrows - len(vals)


def quotient_divisors(gens, rels, p: int) -> list[int]:
    """Elementary divisor valuations of span(gens)/span(rels).

    ``gens``: matrix whose columns are a Z_(p)-basis of a lattice;
    ``rels``: matrix whose columns all lie in that lattice.  Zero
    valuations (unit divisors) are included, so the number of returned
    entries equals the number of generators.
    """
    ngens = len(gens[0]) if gens and gens[0] else 0
    if ngens == 0:
        return []
    nrel = len(rels[0]) if rels and rels[0] else 0
    if nrel == 0:
        raise NoWitness("quotient by an empty relation set is not finite")
    solver = PLocalSolver(gens, p)
    coords = []
    for j in range(nrel):
        col = [row[j] for row in rels]
        y = solver.solve(col)
        if y is None:
            raise NoWitness("relation outside the generated span")
        coords.append(y)
    coord_mat = [[coords[j][i] for j in range(nrel)] for i in range(ngens)]
    vals, deficiency = smith_valuations(coord_mat, p)
    if deficiency:
        raise NoWitness("quotient has a free summand")
    return vals


def _matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def group_operator_matrices(gamma, p: int):
    """(gamma - 1, Tr = 1 + gamma + ... + gamma^(p-1)) as Fraction matrices."""
    n = len(gamma)
    ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    g = as_fraction_matrix(gamma)
    pows = [ident]
    for _ in range(p - 1):
        pows.append(_matmul(pows[-1], g))
    gm1 = [[g[i][j] - ident[i][j] for j in range(n)] for i in range(n)]
    tr = [[sum(pw[i][j] for pw in pows) for j in range(n)] for i in range(n)]
    return gm1, tr


class TateDims:
    """Even/odd Tate cohomology of one C_p-module (divisor valuations)."""

    def __init__(self, even_vals, odd_vals):
        self.even_vals = list(even_vals)
        self.odd_vals = list(odd_vals)
        self.even_dim = sum(1 for v in self.even_vals if v >= 1)
        self.odd_dim = sum(1 for v in self.odd_vals if v >= 1)

    def __repr__(self):
        return f"TateDims(even={self.even_dim}, odd={self.odd_dim})"


def tate_lattice(gamma, p: int) -> TateDims:
    """Tate cohomology of C_p acting on Z^n by an integer matrix gamma.

    even: ker(gamma-1)/im(Tr); odd: ker(Tr)/im(gamma-1).  Both quotients
    are killed by p, so dims are F_p-dimensions.
    """
    gm1, tr = group_operator_matrices(gamma, p)
    n = len(gm1)

    def parity(ker_of, im_of):
        kb = kernel_basis(ker_of, p)
        if not kb:
            return []
        gens = [[kb[k][i] for k in range(len(kb))] for i in range(n)]
        return quotient_divisors(gens, im_of, p)

    dims = TateDims(parity(gm1, tr), parity(tr, gm1))
    assert all(v <= 1 for v in dims.even_vals + dims.odd_vals), \
        "Tate group not killed by p"
    return dims


def tate_mod_pn(gamma, p: int, exponent: int) -> TateDims:
    """Tate cohomology of C_p acting on (Z/p^exponent)^n."""
    gm1, tr = group_operator_matrices(gamma, p)
    n = len(gm1)
    q = Fraction(p) ** exponent

    def lifted_kernel(mat):
        # {x in Z^n : mat x == 0 mod p^exponent} has full rank n
        wide = [[*row, *(q if k == i else Fraction(0) for k in range(n))]
                for i, row in enumerate(mat)]
        kb = kernel_basis(wide, p)
        xs = [vec[:n] for vec in kb]
        ech = PLocalEchelon(xs, p)
        rows = [ech.rows[r] for r, _, _ in ech.pivots]
        assert len(rows) == n, "kernel mod p^N must have full rank"
        return [[rows[k][i] for k in range(n)] for i in range(n)]

    def parity(ker_of, im_of):
        gens = lifted_kernel(ker_of)
        rels = [[*im_of[i], *(q if k == i else Fraction(0) for k in range(n))]
                for i in range(n)]
        return quotient_divisors(gens, rels, p)

    return TateDims(parity(gm1, tr), parity(tr, gm1))
