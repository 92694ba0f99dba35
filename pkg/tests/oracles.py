"""Independent brute-force oracles used only by the test suite.

Everything here is pure Python on small matrices and deliberately avoids
the package's own linear algebra: ranks and kernels are recomputed with
naive fraction-free elimination, and the Jordan oracle actually builds a
Jordan basis and verifies the conjugated matrix is in Jordan form before
reporting block sizes.
"""

from __future__ import annotations


def modp_rref(rows, p):
    a = [[x % p for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def modp_kernel(rows, p):
    """Right kernel basis (list of vectors)."""
    n = len(rows[0]) if rows else 0
    rref, pivots = modp_rref(rows, p)
    free = [j for j in range(n) if j not in pivots]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, c in zip(rref, pivots):
            v[c] = (-row[f]) % p
        out.append(v)
    return out


def modp_matmul(a, b, p):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]


def _in_span(rows, vec, p):
    if not rows:
        return not any(x % p for x in vec)
    rref, pivots = modp_rref(rows, p)
    v = [x % p for x in vec]
    for row, c in zip(rref, pivots):
        if v[c]:
            f = v[c]
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return not any(v)


def jordan_blocks_bruteforce(gamma, p):
    """Block-size multiset of N = gamma - 1 by explicit Jordan basis.

    Builds chains top-down from the kernel filtration, assembles the
    change of basis P, and verifies P^-1 N P is literally in Jordan form.
    """
    d = len(gamma)
    nil = [[(gamma[i][j] - (1 if i == j else 0)) % p for j in range(d)]
           for i in range(d)]
    powers = [[[1 if i == j else 0 for j in range(d)] for i in range(d)]]
    while True:
        powers.append(modp_matmul(powers[-1], nil, p))
        if not any(any(row) for row in powers[-1]):
            break
    height = len(powers) - 1  # N^height = 0
    kernels = [modp_kernel(powers[j], p) if j else [] for j in range(height + 1)]

    chains = []  # chain = [N^{s-1} v, ..., N v, v]; chain[i] has height i+1
    for h in range(height, 0, -1):
        # avoid ker(N^{h-1}) plus the height-h elements of taller chains
        avoid = list(kernels[h - 1])
        for chain in chains:
            if len(chain) > h:
                avoid.append(chain[h - 1])
        for cand in kernels[h]:
            if _in_span(avoid, cand, p):
                continue
            chain = [cand]
            while True:
                col = modp_matmul(nil, [[x] for x in chain[0]], p)
                nxt = [row[0] for row in col]
                if not any(nxt):
                    break
                chain.insert(0, nxt)
            chains.append(chain)
            avoid.append(cand)

    basis = [v for chain in chains for v in chain]
    assert len(basis) == d, "Jordan basis has wrong size"
    # P columns are basis vectors; verify N P = P J exactly
    pmat = [[basis[k][i] for k in range(d)] for i in range(d)]
    rref, piv = modp_rref(pmat, p)
    assert len(piv) == d, "Jordan basis not invertible"
    jmat = [[0] * d for _ in range(d)]
    pos = 0
    sizes = []
    for chain in chains:
        s = len(chain)
        sizes.append(s)
        for t in range(s - 1):
            jmat[pos + t][pos + t + 1] = 1  # N maps chain[t+1] to chain[t]
        pos += s
    left = modp_matmul(nil, pmat, p)
    right = modp_matmul(pmat, jmat, p)
    assert left == right, "conjugated matrix is not in Jordan form"
    counts = {}
    for s in sizes:
        counts[s] = counts.get(s, 0) + 1
    return counts
