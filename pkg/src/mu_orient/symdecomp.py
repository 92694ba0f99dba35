"""Symmetric powers of the reduced regular representation.

Sym^k(rhobar) is realised on the p-1 generators e_1, ..., e_{p-1} (the
p-th is eliminated via e_p = -sum e_i), with gamma acting by the cyclic
substitution e_i -> e_{i+1}, e_{p-1} -> -(e_1 + ... + e_{p-1}).  The
decomposition pattern, the multiplicative norm witness Nm^l, the
Tr(e_1^p)/p congruence witness, and the stable-cell enumeration for the
filtration of the infinite projective construction all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import fplinalg, plocal
from .cpmod import CpModule, JordanType, jordan_type, transfer_operator
from .errors import NoWitness, NotDivisible, NotFixed, PatternViolation
from .ring import MultiPoly, PLocalDomain, PolyRing, ResidueRing, RingAction


@lru_cache(maxsize=None)
def sym_basis(p: int, k: int) -> tuple:
    """Monomials of degree k in e_1..e_{p-1}, graded-lex ordered."""
    n = p - 1
    out = []

    def fill(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining, -1, -1):
            fill(prefix + (a,), remaining - a, slots - 1)

    fill((), k, n)
    out.sort(reverse=True)
    assert len(out) == math.comb(k + p - 2, k)
    return tuple(out)


def sym_ring(p: int, domain=None) -> PolyRing:
    if domain is None:
        domain = PLocalDomain(p)
    names = tuple(f"e{i+1}" for i in range(p - 1))
    return PolyRing(domain, names, (2 * p - 2,) * (p - 1))


def sym_action(p: int, domain=None) -> RingAction:
    ring = sym_ring(p, domain)
    gens = ring.gens()
    images = {}
    for i in range(p - 1):
        if i < p - 2:
            images[ring.vars[i]] = gens[i + 1]
        else:
            images[ring.vars[i]] = -sum(gens[1:], gens[0])
    return RingAction(ring, images, order=p)


@lru_cache(maxsize=None)
def _sym_gamma_int(p: int, k: int) -> np.ndarray:
    """Integer matrix of gamma on the sym_basis(p, k) monomials."""
    n = p - 1
    basis = sym_basis(p, k)
    index = {b: i for i, b in enumerate(basis)}
    # expansions of (e_1 + ... + e_{p-1})^a as {exponent: coefficient}
    sums = [{(0,) * n: 1}]
    ones = [tuple(1 if t == j else 0 for t in range(n)) for j in range(n)]
    for _ in range(k):
        prev = sums[-1]
        cur: dict = {}
        for exp, c in prev.items():
            for one in ones:
                key = tuple(x + y for x, y in zip(exp, one))
                cur[key] = cur.get(key, 0) + c
        sums.append(cur)
    mat = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for col, mono in enumerate(basis):
        shifted = (0,) + mono[:-1]
        a = mono[-1]
        sign = -1 if a % 2 else 1
        for exp, c in sums[a].items():
            key = tuple(x + y for x, y in zip(shifted, exp))
            mat[index[key], col] += sign * c
    return mat


def sym_module(p: int, k: int, ring=None, validate: bool = True) -> CpModule:
    """Sym^k(rhobar) as a CpModule over the requested coefficient ring."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    if ring is None:
        ring = ResidueRing(p, 1)
    gamma = _sym_gamma_int(p, k)
    labels = tuple("*".join(f"e{i+1}^{a}" if a > 1 else f"e{i+1}"
                            for i, a in enumerate(b) if a) or "1"
                   for b in sym_basis(p, k))
    return CpModule(ring, gamma, basis_labels=labels, validate=validate)


@dataclass(frozen=True)
class SymShape:
    """Decomposition in the three-shape vocabulary of the certified pattern."""

    p: int
    k: int
    trivial: int
    rhobar: int
    free: int
    jordan: JordanType

    @property
    def dim(self) -> int:
        return math.comb(self.k + self.p - 2, self.k)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "trivial": self.trivial,
                "rhobar": self.rhobar, "free": self.free, "dim": self.dim}


@lru_cache(maxsize=None)
def decompose_sym(p: int, k: int) -> SymShape:
    """Jordan type of Sym^k(rhobar) over F_p, certified against the
    three-case pattern: one trivial summand iff k = 0 mod p, one rhobar
    summand iff k = 1 mod p, free otherwise.  PatternViolation signals an
    implementation bug, not an input error."""
    module = sym_module(p, k)
    jt = jordan_type(module)
    if p == 2:
        small = jt.counts.get(1, 0)
        trivial, rhobar = (small, 0) if k % 2 == 0 else (0, small)
        free = jt.counts.get(2, 0)
    else:
        trivial = jt.counts.get(1, 0)
        rhobar = jt.counts.get(p - 1, 0)
        free = jt.counts.get(p, 0)
        stray = {i: c for i, c in jt.counts.items() if i not in (1, p - 1, p)}
        if stray:
            raise PatternViolation(
                f"Sym^{k}(rhobar) at p={p} has blocks of sizes {sorted(stray)}")
    expect_trivial = 1 if k % p == 0 else 0
    expect_rhobar = 1 if (k % p == 1 and p > 2) or (p == 2 and k % 2 == 1) else 0
    if p == 2:
        expect_trivial = 1 if k % 2 == 0 else 0
    if (trivial, rhobar) != (expect_trivial, expect_rhobar):
        raise PatternViolation(
            f"Sym^{k}(rhobar) at p={p}: got trivial={trivial}, rhobar={rhobar}, "
            f"expected ({expect_trivial}, {expect_rhobar})")
    dim = math.comb(k + p - 2, k)
    if p * free + trivial + (p - 1) * rhobar != dim:
        raise PatternViolation(
            f"dimension identity fails for Sym^{k} at p={p}")
    return SymShape(p, k, trivial, rhobar, free, jt)


# ---------------------------------------------------------------- witnesses

def norm_polynomial(p: int, power: int = 1) -> MultiPoly:
    """Nm^power with Nm = e_1 * ... * e_{p-1} * (-(e_1 + ... + e_{p-1}))."""
    ring = sym_ring(p)
    gens = ring.gens()
    e_p = -sum(gens[1:], gens[0])
    nm = ring.one()
    for g in gens:
        nm = nm * g
    nm = nm * e_p
    return nm ** power


def poly_to_vector(f: MultiPoly, p: int, k: int):
    basis = sym_basis(p, k)
    index = {b: i for i, b in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for exp, c in f.terms.items():
        if exp not in index:
            raise ValueError(f"term {exp} not of degree {k}")
        vec[index[exp]] = Fraction(c.num, c.den)
    return vec

def vector_to_poly(vec, p: int, k: int) -> MultiPoly:
    ring = sym_ring(p)
    basis = sym_basis(p, k)
    return ring.from_terms({b: Fraction(v) for b, v in zip(basis, vec) if v})


def norm_fixed_witness(p: int, power: int) -> MultiPoly:
    """Expansion of Nm^power, certified gamma-fixed and certified to hit
    the trivial summand of Sym^(power*p) nontrivially mod p."""
    nm = norm_polynomial(p, power)
    if power == 0:
        return nm
    action = sym_action(p)
    if action.apply(nm, 1) != nm:
        raise NotFixed(f"Nm^{power} is not gamma-invariant at p={p}")
    k = power * p
    module = sym_module(p, k)
    vec = np.array([float(x.numerator % p) for x in poly_to_vector(nm, p, k)])
    tr = transfer_operator(module)
    im_rref, im_piv = fplinalg.rref_mod_p(np.asarray(tr).T, p)
    residue = fplinalg.reduce_against_rref(im_rref, im_piv, vec, p)
    if not np.any(residue):
        raise NotFixed(
            f"Nm^{power} lies in the transfer image at p={p}; trivial projection lost")
    return nm


@dataclass
class TrNmWitness:
    p: int
    quotient: MultiPoly   # Tr(e_1^p)/p
    psi: MultiPoly        # Nm - quotient = Tr(psi)
    dim: int

    def to_json(self) -> dict:
        return {"p": self.p, "quotient": self.quotient.to_json(),
                "psi": self.psi.to_json(), "sym_dim": self.dim}


def tr_nm_witness(p: int) -> TrNmWitness:
    """Divide Tr(e_1^p) by p and solve Nm - Tr(e_1^p)/p = Tr(psi) exactly.

    Failure of either step would falsify the certified congruence, so the
    errors (NotDivisible / NoWitness) signal implementation bugs.
    """
    ring = sym_ring(p)
    action = sym_action(p)
    e1p = ring.gen("e1") ** p
    total = ring.zero()
    cur = e1p
    for _ in range(p):
        total = total + cur
        cur = action.apply(cur, 1)
    quotient = total.divide_by_p()
    nm = norm_polynomial(p, 1)
    target = nm - quotient
    if action.apply(target, 1) != target:
        raise NotFixed("Nm - Tr(e_1^p)/p is not gamma-invariant")
    gamma = _sym_gamma_int(p, p)
    _, tr_mat = plocal.group_operator_matrices(gamma.tolist(), p)
    solver = plocal.PLocalSolver(tr_mat, p)
    sol = solver.solve(poly_to_vector(target, p, p))
    if sol is None:
        raise NoWitness(f"no p-local psi with Tr(psi) = Nm - Tr(e_1^p)/p at p={p}")
    psi = vector_to_poly(sol, p, p)
    # re-verify the identity by polynomial arithmetic alone
    tr_psi = ring.zero()
    cur = psi
    for _ in range(p):
        tr_psi = tr_psi + cur
        cur = action.apply(cur, 1)
    if tr_psi != target:
        raise NoWitness("solver output fails polynomial re-verification")
    return TrNmWitness(p, quotient, psi, len(sym_basis(p, p)))


# -------------------------------------------------------------- slice cells

@dataclass(frozen=True)
class SliceCellList:
    """Stable cells of one filtration subquotient in degree n."""

    p: int
    degree: int
    special: str          # "regular_sphere" | "spoke_cell" | "none"
    label: str | None
    free_count: int

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.degree, "special": self.special,
                "label": self.label, "free_count": self.free_count}


def slice_cells(p: int, n: int) -> SliceCellList:
    """Cells of the n-th subquotient: a regular sphere when n = mp, a
    spoke cell when n = mp+1, plus free cells counted by the free part of
    Sym^n(rhobar)."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    shape = decompose_sym(p, n)
    if n % p == 0:
        m = n // p
        special, extra = "regular_sphere", 1
        label = "S^0" if m == 0 else f"S^{{{2*m}ρ}}"
    elif n % p == 1:
        m = (n - 1) // p
        special, extra = "spoke_cell", p - 1
        label = "S^{1+⅄}" if m == 0 else f"S^{{{2*m}ρ+1+⅄}}"
    else:
        special, extra, label = "none", 0, None
    dim = math.comb(n + p - 2, n)
    if p * shape.free + extra != dim:
        raise PatternViolation(
            f"cell count mismatch at (p={p}, n={n}): "
            f"{p}*{shape.free} + {extra} != {dim}")
    return SliceCellList(p, n, special, label, shape.free)
