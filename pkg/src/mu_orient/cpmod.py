"""Finite modules over k[C_p]: Jordan classification, transfer, norm,
fixed points, Tate cohomology, and the endomorphism-locality check.

A CpModule is a free module of finite rank over F_p, Z/p^N or Z_(p)
together with the matrix of a chosen generator gamma of C_p; gamma^p = 1
is verified at construction.  Classification over F_p is by the rank
sequence of powers of the nilpotent N = gamma - 1: the multiplicity of
the Jordan block J_i is the second difference
rank(N^(i-1)) - 2 rank(N^i) + rank(N^(i+1)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fplinalg, plocal
from .errors import CheckFailed, NotOrderP
from .ring import PLocalDomain, ResidueRing


class CpModule:
    """Free module with an order-p operator gamma.

    ring: ResidueRing(p, N) or PLocalDomain(p).  For residue rings the
    matrix is a numpy integer array taken mod p^N; for Z_(p) it is a
    nested list of Fractions (used for lattice computations).
    """

    def __init__(self, ring, gamma, basis_labels=None, validate: bool = True):
        self.ring = ring
        self.p = ring.char_prime
        if isinstance(ring, ResidueRing):
            g = np.asarray(gamma, dtype=np.float64)
            self.gamma = np.mod(g, ring.modulus)
        else:
            self.gamma = plocal.as_fraction_matrix(gamma)
        self.dim = len(self.gamma)
        self.basis_labels = tuple(basis_labels) if basis_labels else None
        if validate:
            self.check_order()

    @property
    def is_prime_field(self) -> bool:
        return isinstance(self.ring, ResidueRing) and self.ring.exponent == 1

    def check_order(self):
        p = self.p
        if isinstance(self.ring, ResidueRing):
            mod = self.ring.modulus
            acc = np.eye(self.dim)
            base = self.gamma
            k = p
            while k:
                if k & 1:
                    acc = np.mod(acc @ base, mod)
                k >>= 1
                if k:
                    base = np.mod(base @ base, mod)
            if not np.array_equal(acc, np.eye(self.dim)):
                raise NotOrderP(f"gamma^{p} != 1 over {self.ring!r}")
        else:
            acc = plocal._matmul(self.gamma, self.gamma)
            for _ in range(p - 2):
                acc = plocal._matmul(acc, self.gamma)
            ident = [[Fraction(1 if i == j else 0) for j in range(self.dim)]
                     for i in range(self.dim)]
            if acc != ident:
                raise NotOrderP(f"gamma^{p} != 1 over {self.ring!r}")

    def gamma_power(self, k: int):
        k %= self.p
        if isinstance(self.ring, ResidueRing):
            out = np.eye(self.dim)
            for _ in range(k):
                out = np.mod(out @ self.gamma, self.ring.modulus)
            return out
        out = [[Fraction(1 if i == j else 0) for j in range(self.dim)]
               for i in range(self.dim)]
        for _ in range(k):
            out = plocal._matmul(out, self.gamma)
        return out

    def direct_sum(self, other: "CpModule") -> "CpModule":
        if self.ring != other.ring:
            raise ValueError("mixed coefficient rings")
        if isinstance(self.ring, ResidueRing):
            n, m = self.dim, other.dim
            g = np.zeros((n + m, n + m))
            g[:n, :n] = self.gamma
            g[n:, n:] = other.gamma
            return CpModule(self.ring, g, validate=False)
        n, m = self.dim, other.dim
        g = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gamma[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gamma[i][j]
        return CpModule(self.ring, g, validate=False)


def standard_module(p: int, kind: str, ring=None) -> CpModule:
    """The three basic modules: trivial (1), rhobar (augmentation ideal
    of rank p-1, gamma e_i = e_{i+1}, gamma e_{p-1} = -sum e_j), and the
    regular module (rank p, cyclic permutation)."""
    if ring is None:
        ring = ResidueRing(p, 1)
    if ring.char_prime != p:
        raise ValueError("ring prime differs from p")
    if kind == "trivial":
        mat = [[1]]
        labels = ("1",)
    elif kind == "rhobar":
        n = p - 1
        mat = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            mat[i + 1][i] = 1
        for i in range(n):
            mat[i][n - 1] = -1
        labels = tuple(f"e{i+1}" for i in range(n))
    elif kind == "regular":
        mat = [[0] * p for _ in range(p)]
        for i in range(p):
            mat[(i + 1) % p][i] = 1
        labels = tuple(f"g{i}" for i in range(p))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return CpModule(ring, mat, basis_labels=labels)


@dataclass(frozen=True)
class JordanType:
    """Multiset of Jordan block sizes of gamma - 1 over F_p."""

    p: int
    counts: dict

    @property
    def dim(self) -> int:
        return sum(i * c for i, c in self.counts.items())

    @property
    def free(self) -> int:
        return self.counts.get(self.p, 0)

    @property
    def trivial(self) -> int:
        return self.counts.get(1, 0)

    @property
    def rhobar(self) -> int:
        return self.counts.get(self.p - 1, 0)

    def __str__(self):
        inner = ", ".join(f"{i}: {c}" for i, c in sorted(self.counts.items()))
        return "{" + inner + "}"


def jordan_type(module: CpModule) -> JordanType:
    """Jordan type from the rank sequence of powers of N = gamma - 1."""
    if not module.is_prime_field:
        raise NotOrderP("Jordan classification requires prime-field coefficients")
    p = module.p
    d = module.dim
    nil = np.mod(module.gamma - np.eye(d), p)
    ranks = [d]
    power = nil
    for _ in range(1, p + 1):
        r = fplinalg.rank_mod_p(power, p)
        ranks.append(r)
        if r == 0:
            break
        power = fplinalg.matmul_mod_p(power, nil, p)
    while len(ranks) < p + 2:
        ranks.append(0)
    if ranks[p] != 0:
        raise NotOrderP("(gamma - 1)^p != 0; operator is not order p")
    counts = {}
    for i in range(1, p + 1):
        c = ranks[i - 1] - 2 * ranks[i] + ranks[i + 1]
        if c < 0:
            raise CheckFailed(f"negative block multiplicity at size {i}")
        if c:
            counts[i] = c
    jt = JordanType(p, counts)
    if jt.dim != d:
        raise CheckFailed("rank sequence inconsistent with dimension")
    return jt


def transfer_operator(module: CpModule):
    """Tr = 1 + gamma + ... + gamma^(p-1) as a matrix over the ring."""
    if isinstance(module.ring, ResidueRing):
        mod = module.ring.modulus
        acc = np.eye(module.dim)
        out = np.eye(module.dim)
        for _ in range(module.p - 1):
            acc = np.mod(acc @ module.gamma, mod)
            out = np.mod(out + acc, mod)
        return out
    gm1, tr = plocal.group_operator_matrices(module.gamma, module.p)
    return tr


def fixed_points(module: CpModule) -> np.ndarray:
    """RREF basis (rows) of ker(gamma - 1); prime-field modules only."""
    if not module.is_prime_field:
        raise NotOrderP("fixed_points implemented over F_p")
    p = module.p
    nil = np.mod(module.gamma - np.eye(module.dim), p)
    ker = fplinalg.kernel_mod_p(nil, p)
    rref, _ = fplinalg.rref_mod_p(ker.T, p)
    return rref


def norm_image(module: CpModule) -> np.ndarray:
    """RREF basis (rows) of the image of the transfer operator."""
    if not module.is_prime_field:
        raise NotOrderP("norm_image implemented over F_p")
    tr = transfer_operator(module)
    rref, _ = fplinalg.rref_mod_p(np.asarray(tr).T, p=module.p)
    return rref


@dataclass
class TateCohomology:
    parity: str
    dimension: int
    divisors: list = field(default_factory=list)  # p-valuations, Z/p^N case
    representatives: list = field(default_factory=list)

    def __str__(self):
        return f"Tate^{self.parity}: dim {self.dimension}"


def tate_cohomology(module: CpModule, parity: str) -> TateCohomology:
    """even: ker(gamma-1)/im(Tr); odd: ker(Tr)/im(gamma-1).

    Over F_p returns the dimension with representative vectors in RREF
    order; over Z/p^N returns elementary divisor valuations as well.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if not isinstance(module.ring, ResidueRing):
        raise NotOrderP("tate_cohomology expects F_p or Z/p^N coefficients")
    p = module.p
    if module.is_prime_field:
        nil = np.mod(module.gamma - np.eye(module.dim), p)
        tr = transfer_operator(module)
        ker_of, im_of = (nil, tr) if parity == "even" else (tr, nil)
        ker = fplinalg.kernel_mod_p(ker_of, p)
        cur_rref, cur_piv = fplinalg.rref_mod_p(np.asarray(im_of).T, p)
        dim_im = len(cur_piv)
        reps = []
        for j in range(ker.shape[1]):
            v = ker[:, j]
            red = fplinalg.reduce_against_rref(cur_rref, cur_piv, v, p)
            if np.any(red):
                reps.append([int(x) for x in v])
                stacked = np.vstack([cur_rref, red.reshape(1, -1)])
                cur_rref, cur_piv = fplinalg.rref_mod_p(stacked, p)
        dimension = ker.shape[1] - dim_im
        if dimension != len(reps):
            raise CheckFailed("representative extraction disagrees with dimensions")
        return TateCohomology(parity, dimension,
                              divisors=[1] * dimension, representatives=reps)
    gamma_int = [[int(x) for x in row] for row in np.asarray(module.gamma, dtype=np.int64)]
    dims = plocal.tate_mod_pn(gamma_int, p, module.ring.exponent)
    vals = dims.even_vals if parity == "even" else dims.odd_vals
    dim = dims.even_dim if parity == "even" else dims.odd_dim
    return TateCohomology(parity, dim, divisors=[v for v in vals if v >= 1])


# ---------------------------------------------------------------------------
# Lemma-level check: End_{F_p[C_p]}(rhobar) is local with maximal ideal the
# transferred homomorphisms.
# ---------------------------------------------------------------------------

@dataclass
class EndoTransferReport:
    p: int
    commutant_size: int
    nonunit_count: int
    ideal_equals_transfer_image: bool
    nonunits_form_ideal: bool
    unit_shift_invariance: bool
    transfer_ideal_dim: int
    sampled_pairs: int | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "commutant_size": self.commutant_size,
            "nonunit_count": self.nonunit_count,
            "ideal_equals_transfer_image": self.ideal_equals_transfer_image,
            "nonunits_form_ideal": self.nonunits_form_ideal,
            "unit_shift_invariance": self.unit_shift_invariance,
            "transfer_ideal_dim": self.transfer_ideal_dim,
        }


def _commutant_basis(gamma: np.ndarray, p: int) -> list[np.ndarray]:
    d = gamma.shape[0]
    # X gamma - gamma X = 0 as a linear system in the d^2 entries of X
    rows = []
    for a in range(d):
        for b in range(d):
            row = np.zeros(d * d)
            for k in range(d):
                row[a * d + k] += gamma[k, b]
                row[k * d + b] -= gamma[a, k]
            rows.append(row % p)
    ker = fplinalg.kernel_mod_p(np.array(rows), p)
    return [ker[:, j].reshape(d, d) for j in range(ker.shape[1])]


def endo_transfer_ideal_check(p: int, rng_seed: int | None = None) -> EndoTransferReport:
    """Exhaustively verify that End_{F_p[C_p]}(rhobar) is local and its
    maximal ideal is exactly the image of the conjugation transfer.

    Enumerates the whole commutant for p in {2,3,5,7}; the unit-shift
    check (phi invertible iff phi + Tr(psi) invertible) is exhaustive for
    p <= 5 and sampled for p = 7.
    """
    if p not in (2, 3, 5, 7):
        raise ValueError("brute-force range is p in {2,3,5,7}")
    module = standard_module(p, "rhobar")
    gamma = np.asarray(module.gamma)
    d = p - 1
    basis = _commutant_basis(gamma, p)
    if len(basis) != p - 1:
        raise CheckFailed(f"commutant dimension {len(basis)} != p-1")

    elements = []
    units = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        mat = np.zeros((d, d))
        for c, b in zip(coeffs, basis):
            mat += c * b
        mat = np.mod(mat, p)
        key = tuple(int(x) for x in mat.ravel())
        elements.append((coeffs, key, mat))
        if fplinalg.rank_mod_p(mat, p) == d:
            units.add(key)
    nonunits = [e for e in elements if e[1] not in units]

    # (a) the non-units are a linear subspace closed under both-sided
    # multiplication by the commutant (bilinearity reduces to basis checks)
    nonunit_vecs = np.array([e[2].ravel() for e in nonunits])
    rref, piv = fplinalg.rref_mod_p(nonunit_vecs, p)
    span_dim = len(piv)
    forms_subspace = (p ** span_dim == len(nonunits)) and all(
        fplinalg.in_row_space(rref, piv, e[2].ravel(), p) for e in nonunits)
    ideal_closed = True
    span_basis = [rref[i].reshape(d, d) for i in range(span_dim)]
    for b in basis:
        for m in span_basis:
            left = np.mod(b @ m, p)
            right = np.mod(m @ b, p)
            if not (fplinalg.in_row_space(rref, piv, left.ravel(), p)
                    and fplinalg.in_row_space(rref, piv, right.ravel(), p)):
                ideal_closed = False
    nonunits_form_ideal = forms_subspace and ideal_closed

    # (b) transfer image of End_{F_p}(rhobar) under psi -> sum gamma^i psi gamma^-i
    powers = [np.linalg.matrix_power(gamma.astype(np.int64), k) % p for k in range(p)]
    inv_powers = [powers[(p - k) % p] for k in range(p)]
    tr_images = []
    for a in range(d):
        for b in range(d):
            e_ab = np.zeros((d, d))
            e_ab[a, b] = 1
            tr = np.zeros((d, d))
            for k in range(p):
                tr += powers[k] @ e_ab @ inv_powers[k]
            tr_images.append(np.mod(tr, p).ravel())
    tr_rref, tr_piv = fplinalg.rref_mod_p(np.array(tr_images), p)
    same_span = (len(tr_piv) == span_dim) and all(
        fplinalg.in_row_space(rref, piv, tr_rref[i], p) for i in range(len(tr_piv))) and all(
        fplinalg.in_row_space(tr_rref, tr_piv, rref[i], p) for i in range(span_dim))

    # (c) invertibility is unchanged by adding any transferred endomorphism
    ideal_elements = []
    for coeffs in itertools.product(range(p), repeat=span_dim):
        mat = np.zeros((d, d))
        for c, b in zip(coeffs, span_basis):
            mat += c * b
        ideal_elements.append(np.mod(mat, p))
    sampled = None
    unit_shift = True
    if p <= 5:
        pairs = ((e, t) for e in elements for t in ideal_elements)
    else:
        rng = np.random.default_rng(0xC0FFEE if rng_seed is None else rng_seed)
        idx = rng.integers(0, len(elements), size=500)
        jdx = rng.integers(0, len(ideal_elements), size=500)
        pairs = ((elements[i], ideal_elements[j]) for i, j in zip(idx, jdx))
        sampled = 500
    for e, t in pairs:
        shifted = np.mod(e[2] + t, p)
        inv_before = e[1] in units
        inv_after = fplinalg.rank_mod_p(shifted, p) == d
        if inv_before != inv_after:
            unit_shift = False
            raise CheckFailed(
                f"unit shifted to non-unit (or back) at p={p}: {e[2].tolist()} + {t.tolist()}")

    if not (nonunits_form_ideal and same_span):
        raise CheckFailed(f"endomorphism transfer-ideal structure fails at p={p}")
    return EndoTransferReport(
        p=p,
        commutant_size=len(elements),
        nonunit_count=len(nonunits),
        ideal_equals_transfer_image=same_span,
        nonunits_form_ideal=nonunits_form_ideal,
        unit_shift_invariance=unit_shift,
        transfer_ideal_dim=span_dim,
        sampled_pairs=sampled,
    )
