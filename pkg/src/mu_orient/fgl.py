"""Formal group laws of Weierstrass curves and their n-series.

The group law is produced by the chord construction in the (z, w) plane
(z = -x/y, w = -1/y): solve w(z) as the fixed point of

    w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3,

take the chord through (z1, w(z1)), (z2, w(z2)), locate the third root of
the resulting cubic via its z^2/z^3 coefficients, and apply the formal
inverse i(t) = t / (-1 + a1 t + a3 w(t)).  Everything is exact truncated
series arithmetic over the curve's coefficient ring; no logarithms, so
p-local coefficients never acquire denominators divisible by p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fplinalg
from .errors import AxiomViolation, CheckFailed, TruncationTooSmall
from .ring import (MultiPoly, PLocalDomain, PolyRing, SeriesRing, TruncSeries,
                   divided_difference, parse_poly, reversion, series_solve)
from .ring.poly import grlex_key


@dataclass
class WeierstrassCurve:
    a1: MultiPoly
    a2: MultiPoly
    a3: MultiPoly
    a4: MultiPoly
    a6: MultiPoly

    @property
    def pring(self) -> PolyRing:
        return self.a1.ring

    def coefficients(self):
        return {"a1": self.a1, "a2": self.a2, "a3": self.a3,
                "a4": self.a4, "a6": self.a6}


def tmf2_ring() -> PolyRing:
    return PolyRing(PLocalDomain(3), ("l1", "l2"), (4, 4))


def tmf2_curve(pring: PolyRing | None = None) -> WeierstrassCurve:
    """y^2 = x (x - l1)(x - l2): a2 = -(l1 + l2), a4 = l1*l2."""
    ring = pring if pring is not None else tmf2_ring()
    l1, l2 = ring.gen("l1"), ring.gen("l2")
    zero = ring.zero()
    return WeierstrassCurve(zero, -(l1 + l2), zero, l1 * l2, zero)


def curve_from_json(data: dict, pring: PolyRing) -> WeierstrassCurve:
    vals = {}
    for key in ("a1", "a2", "a3", "a4", "a6"):
        text = data.get(key, "0")
        vals[key] = parse_poly(pring, str(text)) if text not in (0, "0") else pring.zero()
    return WeierstrassCurve(**vals)


class FormalGroupLaw:
    """Commutative one-dimensional formal group law, truncated at N.

    The constructor checks F(z,0) = z, F(0,z) = z, commutativity and
    associativity up to the truncation and raises AxiomViolation
    otherwise, so every instance in circulation is certified.
    """

    def __init__(self, series: TruncSeries, validate: bool = True):
        if series.ring.svars != ("z1", "z2"):
            raise ValueError("group law series must use variables (z1, z2)")
        self.series = series
        self.trunc = series.ring.trunc
        self.pring = series.ring.pring
        if validate:
            self.validate()

    def validate(self):
        biv = self.series.ring
        z1 = biv.gen("z1")
        z2 = biv.gen("z2")
        zero = biv.zero()
        if self.series.compose({"z1": z1, "z2": zero}) != z1:
            raise AxiomViolation("F(z, 0) != z")
        if self.series.compose({"z1": zero, "z2": z2}) != z2:
            raise AxiomViolation("F(0, z) != z")
        swapped = TruncSeries(biv, {(b, a): poly for (a, b), poly
                                    in self.series.terms.items()})
        if swapped != self.series:
            raise AxiomViolation("F is not commutative")
        tri = SeriesRing(self.pring, ("z1", "z2", "z3"), self.trunc)
        t1, t2, t3 = tri.gen("z1"), tri.gen("z2"), tri.gen("z3")
        f12 = self.series.compose({"z1": t1, "z2": t2})
        f23 = self.series.compose({"z1": t2, "z2": t3})
        left = self.series.compose({"z1": f12, "z2": t3})
        right = self.series.compose({"z1": t1, "z2": f23})
        if left != right:
            raise AxiomViolation("F is not associative up to truncation")

    def plus(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        return self.series.compose({"z1": a, "z2": b})

    def n_series(self, n: int) -> TruncSeries:
        """[n](x) = x +_F ... +_F x, as a series in the variable x."""
        if n < 1:
            raise ValueError("n must be >= 1")
        uni = SeriesRing(self.pring, ("x",), self.trunc)
        x = uni.gen("x")
        out = x
        for _ in range(n - 1):
            out = self.plus(out, x)
        return out


def additive_law(pring: PolyRing, trunc: int) -> FormalGroupLaw:
    biv = SeriesRing(pring, ("z1", "z2"), trunc)
    return FormalGroupLaw(biv.gen("z1") + biv.gen("z2"))


def multiplicative_law(pring: PolyRing, trunc: int) -> FormalGroupLaw:
    biv = SeriesRing(pring, ("z1", "z2"), trunc)
    z1, z2 = biv.gen("z1"), biv.gen("z2")
    return FormalGroupLaw(z1 + z2 + z1 * z2)


def curve_formal_group(curve: WeierstrassCurve, trunc: int) -> FormalGroupLaw:
    """Group law of a Weierstrass curve, exact through degree trunc-1."""
    if trunc < 4:
        raise TruncationTooSmall("need truncation >= 4")
    pring = curve.pring
    n_int = trunc + 2  # the divided difference costs one degree
    a1, a2, a3, a4, a6 = (curve.a1, curve.a2, curve.a3, curve.a4, curve.a6)

    phi_ring = SeriesRing(pring, ("z", "w"), n_int)
    z, w_ = phi_ring.gen("z"), phi_ring.gen("w")
    phi = (z ** 3 + (z * w_) * a1 + (z * z * w_) * a2 + (w_ * w_) * a3
           + (z * w_ * w_) * a4 + (w_ ** 3) * a6)
    w = series_solve(phi, "z", "w")

    biv = SeriesRing(pring, ("z1", "z2"), n_int)
    z1, z2 = biv.gen("z1"), biv.gen("z2")
    w1 = w.compose({"z": z1})
    lam = divided_difference(w, biv, "z1", "z2")
    nu = w1 - lam * z1

    one = biv.const(1)
    c3 = one + lam * a2 + (lam * lam) * a4 + (lam ** 3) * a6
    c2 = lam * a1 + nu * a2 + (lam * lam) * a3 \
        + (lam * nu).scale_poly(pring.const(2)) * a4 \
        + (lam * lam * nu).scale_poly(pring.const(3)) * a6
    z3 = -(c2 * c3.recip()) - z1 - z2

    # formal inverse i(t) = t / (-1 + a1 t + a3 w(t))
    uni = SeriesRing(pring, ("z",), n_int)
    t = uni.gen("z")
    wt = w  # already a series in z
    denom = -uni.const(1) + t * a1 + wt * a3
    inv_series = t * denom.recip()
    law = inv_series.compose({"z": z3})
    return FormalGroupLaw(law.truncate(trunc))


def n_series(law: FormalGroupLaw, n: int) -> TruncSeries:
    return law.n_series(n)


def extract_v1(law: FormalGroupLaw, p: int) -> MultiPoly:
    """Coefficient of x^p in [p](x), reduced mod p."""
    if law.trunc <= p:
        raise TruncationTooSmall(f"truncation {law.trunc} cannot see x^{p}")
    coeff = law.n_series(p).coefficient((p,))
    return coeff.reduce_mod()


def _eliminate_variable(v1_modp: MultiPoly):
    """Pick (variable, substitution) solving v1 = 0 when v1 is linear."""
    ring = v1_modp.ring
    lin = [(exp, c) for exp, c in v1_modp.terms.items() if sum(exp) == 1]
    if len(lin) != len(v1_modp.terms):
        return None
    for exp, c in sorted(lin, key=lambda t: t[0]):
        if not ring.domain.is_unit(c):
            continue
        var_idx = exp.index(1)
        inv = ring.domain.invert(c)
        rest = ring.from_terms({e: cc for e, cc in v1_modp.terms.items() if e != exp})
        image = (-rest).scale(inv)
        return ring.vars[var_idx], image
    return None


def reduce_mod_principal(f: MultiPoly, gen: MultiPoly) -> MultiPoly:
    """Graded-lex normal form of f modulo the homogeneous ideal (gen).

    Both inputs must be homogeneous over F_p; reduction happens in the
    single weighted-degree component of f.
    """
    ring = f.ring
    p = ring.prime
    if f.is_zero() or gen.is_zero():
        return f
    if not (f.is_homogeneous() and gen.is_homogeneous()):
        raise CheckFailed("ideal reduction expects homogeneous inputs")
    target = f.weighted_degree()
    shift = target - gen.weighted_degree()
    if shift < 0:
        return f

    def monomials_of_weight(wt):
        out = []

        def rec(prefix, idx, remaining):
            if idx == len(ring.vars):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            w = ring.weights[idx]
            top = remaining // w if w > 0 else 0
            for a in range(top + 1):
                rec(prefix + [a], idx + 1, remaining - a * w)

        rec([], 0, wt)
        return sorted(out, key=grlex_key, reverse=True)

    basis = monomials_of_weight(target)
    index = {b: i for i, b in enumerate(basis)}
    rows = []
    for m in monomials_of_weight(shift):
        prod = gen * ring.from_terms({m: 1})
        row = [0.0] * len(basis)
        for exp, c in prod.terms.items():
            row[index[exp]] = int(c) % p
        rows.append(row)
    if not rows:
        return f
    rref, piv = fplinalg.rref_mod_p(np.array(rows), p)
    vec = [0.0] * len(basis)
    for exp, c in f.terms.items():
        vec[index[exp]] = int(c) % p
    red = fplinalg.reduce_against_rref(rref, piv, np.array(vec), p)
    return ring.from_terms({b: int(red[i]) for i, b in enumerate(basis) if red[i]})


def extract_v2(law: FormalGroupLaw, p: int, eliminate: str | None = None) -> MultiPoly:
    """Coefficient of x^(p^2) in [p](x) mod p, reduced modulo (v1).

    When v1 is linear the reduction substitutes away one variable (the
    graded-lex last one with a unit coefficient, or ``eliminate``);
    otherwise it echelon-reduces against the degree-graded ideal.
    """
    if law.trunc <= p * p:
        raise TruncationTooSmall(f"truncation {law.trunc} cannot see x^{p * p}")
    series = law.n_series(p)
    coeff = series.coefficient((p * p,)).reduce_mod()
    v1 = extract_v1(law, p)
    if v1.is_zero():
        return coeff
    if eliminate is not None:
        solved = _solve_linear_for(v1, eliminate)
        if solved is None:
            raise CheckFailed(f"cannot eliminate {eliminate!r} from v1 = {v1}")
        return coeff.substitute({eliminate: solved})
    lin = _eliminate_variable(v1)
    if lin is not None:
        var, image = lin
        return coeff.substitute({var: image})
    return reduce_mod_principal(coeff, v1)


def _solve_linear_for(v1_modp: MultiPoly, var: str):
    ring = v1_modp.ring
    if var not in ring.vars:
        return None
    idx = ring.vars.index(var)
    target_exp = tuple(1 if i == idx else 0 for i in range(len(ring.vars)))
    c = v1_modp.terms.get(target_exp)
    if c is None or not ring.domain.is_unit(c):
        return None
    if any(exp[idx] and exp != target_exp for exp in v1_modp.terms):
        return None
    inv = ring.domain.invert(c)
    rest = ring.from_terms({e: cc for e, cc in v1_modp.terms.items() if e != target_exp})
    return (-rest).scale(inv)


@dataclass
class MultivarCongruenceReport:
    p: int
    cyclic_invariant: bool
    diagonal_coefficient: MultiPoly
    pseries_coefficient: MultiPoly
    difference_divisible_by_p: bool
    orbit_count: int
    orbit_sum_matches: bool

    def passed(self) -> bool:
        return (self.cyclic_invariant and self.difference_divisible_by_p
                and self.orbit_sum_matches)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "cyclic_invariant": self.cyclic_invariant,
            "diagonal_coefficient": self.diagonal_coefficient.to_json(),
            "pseries_coefficient": self.pseries_coefficient.to_json(),
            "difference_divisible_by_p": self.difference_divisible_by_p,
            "orbit_count": self.orbit_count,
            "orbit_sum_matches": self.orbit_sum_matches,
        }


def multivar_sum_coeff_check(law: FormalGroupLaw, p: int) -> MultivarCongruenceReport:
    """Expand x_1 +_F ... +_F x_p through total degree p and verify the
    p-series congruence: the x_1...x_p coefficient equals the x^p
    coefficient of [p](x) up to the p-multiple contributed by the
    non-diagonal cyclic orbits."""
    if law.trunc <= p:
        raise TruncationTooSmall("need truncation > p")
    names = tuple(f"x{i+1}" for i in range(p))
    multi = SeriesRing(law.pring, names, p + 1)
    gens = [multi.gen(v) for v in names]
    f = gens[0]
    for g in gens[1:]:
        f = law.plus(f, g)

    def rotate(exp):
        return exp[-1:] + exp[:-1]

    cyclic = all(f.coefficient(rotate(exp)) == poly for exp, poly in f.terms.items())

    diag = f.coefficient((1,) * p)
    pseries = law.n_series(p).coefficient((p,))
    diff = pseries - diag

    seen = set()
    orbit_count = 0
    orbit_total = law.pring.zero()
    ok_orbits = True
    for exp in list(f.terms):
        if sum(exp) != p or exp == (1,) * p or exp in seen:
            continue
        orbit = []
        cur = exp
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            cur = rotate(cur)
        orbit_count += 1
        coeffs = [f.coefficient(e) for e in orbit]
        if any(c != coeffs[0] for c in coeffs):
            raise CheckFailed(f"cyclic orbit of {exp} has unequal coefficients")
        total = law.pring.zero()
        for c in coeffs:
            total = total + c
        try:
            total.divide_by_p()
        except Exception as exc:
            raise CheckFailed(f"orbit of {exp} contributes a non-multiple of p") from exc
        orbit_total = orbit_total + total
    orbit_matches = (orbit_total == diff)
    divisible = True
    if not diff.is_zero():
        try:
            diff.divide_by_p()
        except Exception:
            divisible = False
    report = MultivarCongruenceReport(
        p=p,
        cyclic_invariant=cyclic,
        diagonal_coefficient=diag,
        pseries_coefficient=pseries,
        difference_divisible_by_p=divisible,
        orbit_count=orbit_count,
        orbit_sum_matches=orbit_matches,
    )
    if not report.passed():
        raise CheckFailed(f"p-series congruence fails: {report.to_json()}")
    return report


def reparametrize(law: FormalGroupLaw, phi: TruncSeries) -> FormalGroupLaw:
    """Group law in the coordinate z' = phi(z), phi = z + higher terms."""
    uni = phi.ring
    zname = uni.svars[0]
    inv = reversion(phi, zname)
    biv = law.series.ring
    z1, z2 = biv.gen("z1"), biv.gen("z2")
    g1 = inv.compose({zname: z1})
    g2 = inv.compose({zname: z2})
    inner = law.series.compose({"z1": g1, "z2": g2})
    outer = phi.compose({zname: inner})
    return FormalGroupLaw(outer)
