"""Dense exact linear algebra over the prime field F_p on numpy arrays.

Values are carried in float64: entries stay in [0, p) and every
intermediate product is bounded by panel_width * (p-1)^2 << 2^53, so all
arithmetic is exact while matrix products hit BLAS.  Rank computations on
matrices beyond _BLOCK_THRESHOLD rows use a right-looking blocked
elimination whose trailing updates are single matrix products; this is
what keeps the large symmetric-power classifications at desk scale.
"""

from __future__ import annotations

import numpy as np

_BLOCK_THRESHOLD = 400
_PANEL = 256


def as_modp(mat, p: int) -> np.ndarray:
    a = np.asarray(mat, dtype=np.float64)
    return np.mod(a, p)


def matmul_mod_p(a, b, p: int) -> np.ndarray:
    a = as_modp(a, p)
    b = as_modp(b, p)
    if a.shape[1] * (p - 1) ** 2 >= 2 ** 53:
        raise OverflowError("exactness bound exceeded")
    return np.mod(a @ b, p)


def matrix_power_mod_p(a, k: int, p: int) -> np.ndarray:
    a = as_modp(a, p)
    n = a.shape[0]
    out = np.eye(n)
    base = a
    while k:
        if k & 1:
            out = matmul_mod_p(out, base, p)
        k >>= 1
        if k:
            base = matmul_mod_p(base, base, p)
    return out


def _rank_simple(a: np.ndarray, p: int) -> int:
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = np.mod(a[r, c:] * inv, p)
        below = a[r + 1:, c]
        if np.any(below):
            a[r + 1:, c:] = np.mod(a[r + 1:, c:] - np.outer(below, a[r, c:]), p)
        r += 1
    return r


def _rank_blocked(a: np.ndarray, p: int, panel: int = _PANEL) -> int:
    # panel values are reduced mod p lazily: each rank-1 update adds at
    # most (p-1)^2 in magnitude, so |a| stays below panel*(p-1)^2 + p,
    # far inside float64's exact-integer range; columns are reduced just
    # before pivot search and rows just before normalisation.
    m, n = a.shape
    r = 0
    c0 = 0
    while c0 < n and r < m:
        c1 = min(c0 + panel, n)
        pr0 = r
        height = m - pr0
        fac = np.zeros((height, c1 - c0))
        scales = []
        for c in range(c0, c1):
            a[r:m, c] = np.mod(a[r:m, c], p)
            col = a[r:m, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
                fac[[r - pr0, i - pr0]] = fac[[i - pr0, r - pr0]]
            t = len(scales)
            inv = pow(int(a[r, c]) % p, -1, p)
            scales.append(inv)
            a[r, c:c1] = np.mod(a[r, c:c1] * inv, p)
            below = a[r + 1:m, c].copy()
            fac[r + 1 - pr0:, t] = below
            if np.any(below):
                a[r + 1:m, c:c1] -= np.outer(below, a[r, c:c1])
            r += 1
        npiv = len(scales)
        if npiv and c1 < n:
            trail = a[pr0:m, c1:]
            # finish the pivot rows sequentially (small), then one update
            for t in range(npiv):
                if t:
                    trail[t] = trail[t] - fac[t, :t] @ trail[:t]
                trail[t] = np.mod(trail[t] * scales[t], p)
            if height > npiv:
                trail[npiv:] = np.mod(
                    trail[npiv:] - fac[npiv:, :npiv] @ trail[:npiv], p)
            a[pr0:m, c1:] = trail
        c0 = c1
    return r


def rank_mod_p(mat, p: int) -> int:
    """Exact rank over F_p (Gaussian elimination; blocked when large)."""
    a = as_modp(mat, p)
    if min(a.shape) == 0:
        return 0
    if max(a.shape) >= _BLOCK_THRESHOLD:
        return _rank_blocked(a, p)
    return _rank_simple(a, p)


def rref_mod_p(mat, p: int):
    """(reduced row echelon form, pivot column list) over F_p."""
    a = as_modp(mat, p)
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = np.mod(a[r] * inv, p)
        others = np.nonzero(a[:, c])[0]
        for i2 in others:
            if i2 != r:
                a[i2] = np.mod(a[i2] - a[i2, c] * a[r], p)
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_mod_p(mat, p: int) -> np.ndarray:
    """Basis of the right kernel as columns of an n x k array."""
    a = np.asarray(mat, dtype=np.float64)
    n = a.shape[1]
    rref, pivots = rref_mod_p(a, p)
    free = [j for j in range(n) if j not in pivots]
    basis = np.zeros((n, len(free)))
    for idx, f in enumerate(free):
        basis[f, idx] = 1
        for row, c in zip(rref, pivots):
            basis[c, idx] = (-row[f]) % p
    return basis


def solve_mod_p(mat, rhs, p: int):
    """One solution of A x = b over F_p (free variables zero), or None."""
    a = as_modp(mat, p)
    b = as_modp(np.asarray(rhs, dtype=np.float64).reshape(-1, 1), p)
    aug = np.hstack([a, b])
    rref, pivots = rref_mod_p(aug, p)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n)
    for row, c in zip(rref, pivots):
        x[c] = row[-1]
    return x


def reduce_against_rref(rref: np.ndarray, pivots, vec, p: int) -> np.ndarray:
    """Normal form of vec modulo the row space of a reduced echelon form."""
    v = as_modp(np.asarray(vec, dtype=np.float64), p).copy()
    for row, c in zip(rref, pivots):
        if v[c]:
            v = np.mod(v - v[c] * row, p)
    return v


def in_row_space(rref: np.ndarray, pivots, vec, p: int) -> bool:
    return not np.any(reduce_against_rref(rref, pivots, vec, p))
