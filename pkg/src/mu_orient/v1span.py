"""The p-1 span classes of a fixed-mod-p degree-(2p-2) element.

Given a graded ring with order-p action gamma and an element v1 of
degree 2p-2 with v1 = gamma(v1) mod p, the span classes are the exact
quotients

    c_1 = (v1 - gamma^(p-1) v1)/p,   c_i = (gamma^(i-1) v1 - gamma^(i-2) v1)/p

for 2 <= i <= p-1.  Replacing v1 by v1 + p*x shifts the class vector by
the transfer-shaped vector (x - gamma^(p-1) x, gamma x - x, ...), so the
rank of the classes against a chosen basis of the degree-(2p-2)
component is an invariant; computing and stress-testing that rank for
the level-2 modular model and for the residue model of the height p-1
theory is this module's job.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fplinalg
from .cpmod import standard_module
from .errors import CheckFailed
from .fgl import tmf2_ring
from .ring import MultiPoly, PolyRing, RingAction


@dataclass
class OrientedRingModel:
    """Graded polynomial model with action, v1, and a degree-(2p-2) basis."""

    pring: PolyRing
    action: RingAction
    v1: MultiPoly
    basis: tuple

    def __post_init__(self):
        p = self.p
        if not self.v1.is_homogeneous(2 * p - 2):
            raise CheckFailed("v1 must be homogeneous of degree 2p-2")
        diff = self.v1 - self.action.apply(self.v1, 1)
        diff.divide_by_p()  # raises NotDivisible when v1 is not fixed mod p

    @property
    def p(self) -> int:
        return self.pring.prime

    def with_v1(self, v1: MultiPoly) -> "OrientedRingModel":
        return OrientedRingModel(self.pring, self.action, v1, self.basis)


def tmf2_model() -> OrientedRingModel:
    ring = tmf2_ring()
    l1, l2 = ring.gens()
    action = RingAction(ring, {"l1": l2 - l1, "l2": -l1})
    return OrientedRingModel(ring, action, -l1 - l2, (l1, l2))


@dataclass
class SpanClasses:
    p: int
    classes: tuple
    labels: tuple
    completing_difference: MultiPoly = None

    def telescope_check(self) -> bool:
        """The completing orbit difference equals minus the class total.

        Summing (gamma^i v1 - gamma^(i-1) v1)/p over a full orbit gives 0;
        the displayed classes cover all but (gamma^(p-1)v1 - gamma^(p-2)v1)/p.
        """
        total = self.classes[0]
        for c in self.classes[1:]:
            total = total + c
        return self.completing_difference == -total

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "classes": [{"label": lbl, "value": c.to_json()}
                        for lbl, c in zip(self.labels, self.classes)],
        }


def span_classes(model: OrientedRingModel) -> SpanClasses:
    """c_1 = (v1 - gamma^(p-1) v1)/p and c_i = (gamma^(i-1)v1 - gamma^(i-2)v1)/p."""
    p = model.p
    v1 = model.v1
    act = model.action
    classes = []
    labels = []
    c1 = (v1 - act.apply(v1, p - 1)).divide_by_p()
    classes.append(c1)
    labels.append(f"(v1 - gamma^{p - 1} v1)/{p}")
    for i in range(2, p):
        ci = (act.apply(v1, i - 1) - act.apply(v1, i - 2)).divide_by_p()
        classes.append(ci)
        labels.append(f"(gamma^{i - 1} v1 - gamma^{i - 2} v1)/{p}")
    completing = (act.apply(v1, p - 1) - act.apply(v1, p - 2)).divide_by_p()
    out = SpanClasses(p, tuple(classes), tuple(labels), completing)
    if not out.telescope_check():
        raise CheckFailed("span classes fail the telescoping identity")
    return out


def _class_matrix(model: OrientedRingModel, classes) -> np.ndarray:
    """Columns: mod-p coordinates of the classes in the declared basis."""
    p = model.p
    index = {}
    for j, b in enumerate(model.basis):
        (exp, coef), = b.terms.items()
        if coef != 1:
            raise CheckFailed("basis elements must be monic monomials")
        index[exp] = j
    mat = np.zeros((len(model.basis), len(classes)))
    for jc, cls in enumerate(classes):
        for exp, coef in cls.terms.items():
            if exp not in index:
                raise CheckFailed(f"class has support outside the basis: {exp}")
            mat[index[exp], jc] = coef.residue() if hasattr(coef, "residue") else int(coef) % p
    return mat


def span_rank(model: OrientedRingModel) -> int:
    """Rank over F_p of the span classes against the declared basis."""
    classes = span_classes(model).classes
    return fplinalg.rank_mod_p(_class_matrix(model, classes), model.p)


def span_determinant_unit(model: OrientedRingModel) -> bool:
    """For square class matrices: is det a unit mod p?"""
    mat = _class_matrix(model, span_classes(model).classes)
    if mat.shape[0] != mat.shape[1]:
        return False
    return fplinalg.rank_mod_p(mat, model.p) == mat.shape[0]


@dataclass
class PerturbationReport:
    p: int
    identity_holds: bool
    rank_before: int
    rank_after: int

    def passed(self) -> bool:
        return self.identity_holds and self.rank_before == self.rank_after


def transfer_perturbation_check(model: OrientedRingModel, x: MultiPoly) -> PerturbationReport:
    """span_classes(v1 + p*x) - span_classes(v1) must be exactly
    (x - gamma^(p-1) x, gamma x - x, ..., gamma^(p-2) x - gamma^(p-3) x),
    and the rank must not move."""
    p = model.p
    if not x.is_homogeneous(2 * p - 2):
        raise CheckFailed("perturbation must be homogeneous of degree 2p-2")
    act = model.action
    base = span_classes(model).classes
    shifted_model = model.with_v1(model.v1 + x.mul_by_p())
    shifted = span_classes(shifted_model).classes
    expected = [x - act.apply(x, p - 1)]
    for i in range(2, p):
        expected.append(act.apply(x, i - 1) - act.apply(x, i - 2))
    for i, (b, s, e) in enumerate(zip(base, shifted, expected)):
        if s - b != e:
            raise CheckFailed(f"transfer identity fails at component {i + 1}")
    r0 = span_rank(model)
    r1 = span_rank(shifted_model)
    report = PerturbationReport(p, True, r0, r1)
    if not report.passed():
        raise CheckFailed(f"rank moved under transfer perturbation: {r0} -> {r1}")
    return report


# ------------------------------------------------------------ residue model

@dataclass
class EtheorySpanReport:
    p: int
    rank: int
    expected_rank: int
    perturbations_tested: int
    exhaustive: bool
    seed: int | None
    all_ranks_stable: bool

    def passed(self) -> bool:
        return self.rank == self.expected_rank and self.all_ranks_stable

    def to_json(self) -> dict:
        return {
            "p": self.p, "rank": self.rank, "expected_rank": self.expected_rank,
            "perturbations_tested": self.perturbations_tested,
            "exhaustive": self.exhaustive, "seed": self.seed,
            "all_ranks_stable": self.all_ranks_stable,
        }


def _transfer_of(psi: np.ndarray, gamma: np.ndarray, p: int) -> np.ndarray:
    d = gamma.shape[0]
    powers = [np.linalg.matrix_power(gamma.astype(np.int64), k) % p for k in range(p)]
    out = np.zeros((d, d))
    for k in range(p):
        out += powers[k] @ psi @ powers[(p - k) % p]
    return np.mod(out, p)


def e_theory_span_check(p: int, samples: int = 100, seed: int = 0xC0FFEE) -> EtheorySpanReport:
    """Residue model of the height p-1 theory in degree 2p-2: the module
    is rhobar over F_p and the span classes are the translates
    gamma^(p-1) v, v, gamma v, ..., gamma^(p-3) v of a generator v = e1.

    Checks rank p-1, equivariance of the induced map, and rank stability
    under transferred perturbations (exhaustive for p <= 3, seeded random
    samples otherwise)."""
    module = standard_module(p, "rhobar")
    gamma = np.asarray(module.gamma)
    d = p - 1
    v = np.zeros(d)
    v[0] = 1
    translates = [np.mod(np.linalg.matrix_power(gamma.astype(np.int64), k) % p @ v, p)
                  for k in range(p)]
    # class order: gamma^(p-1) v, v, gamma v, ..., gamma^(p-3) v
    order = [p - 1] + list(range(0, p - 2))
    phi = np.stack([translates[k] for k in order], axis=1)
    # induced map rhobar -> rhobar is equivariant
    if not np.array_equal(fplinalg.matmul_mod_p(phi, gamma, p),
                          fplinalg.matmul_mod_p(gamma, phi, p)):
        raise CheckFailed("span map is not equivariant")
    rank = fplinalg.rank_mod_p(phi, p)

    perturbations = []
    exhaustive = p <= 3
    used_seed = None
    if p == 2:
        perturbations.append(np.zeros((d, d)))
    elif p == 3:
        # the transfer image of End(rhobar) is 1-dimensional here
        basis_imgs = []
        for a in range(d):
            for b in range(d):
                e_ab = np.zeros((d, d))
                e_ab[a, b] = 1
                basis_imgs.append(_transfer_of(e_ab, gamma, p).ravel())
        rref, piv = fplinalg.rref_mod_p(np.array(basis_imgs), p)
        span_basis = [rref[i].reshape(d, d) for i in range(len(piv))]
        for coeffs in itertools.product(range(p), repeat=len(span_basis)):
            t = np.zeros((d, d))
            for c, bmat in zip(coeffs, span_basis):
                t += c * bmat
            perturbations.append(np.mod(t, p))
    else:
        used_seed = seed
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            psi = rng.integers(0, p, size=(d, d)).astype(np.float64)
            perturbations.append(_transfer_of(psi, gamma, p))

    if rank != d:
        raise CheckFailed(f"span rank {rank} != {d} at p={p}")
    stable = True
    for t in perturbations:
        if fplinalg.rank_mod_p(np.mod(phi + t, p), p) != d:
            stable = False
            raise CheckFailed(f"rank moved under transferred perturbation at p={p}")
    report = EtheorySpanReport(
        p=p, rank=rank, expected_rank=d,
        perturbations_tested=len(perturbations),
        exhaustive=exhaustive, seed=used_seed, all_ranks_stable=stable)
    if not report.passed():
        raise CheckFailed(f"span rank {rank} != {d} at p={p}")
    return report
