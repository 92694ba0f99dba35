"""Truncated multivariate power series with polynomial coefficients.

A TruncSeries is a finite sum of monomials in designated *series
variables* whose coefficients are MultiPoly values; every monomial of
total degree >= the truncation bound N is discarded.  Products of
truncations therefore agree with truncations of exact products, and
composition never loses precision as long as the substituted series have
zero constant term.
"""

from __future__ import annotations

from ..errors import NoConvergence, NotInvertible
from .poly import MultiPoly, PolyRing


class SeriesRing:
    """Descriptor for truncated series: coefficient ring, variables, cutoff."""

    __slots__ = ("pring", "svars", "trunc")

    def __init__(self, pring: PolyRing, svars, trunc: int):
        if trunc < 1:
            raise ValueError("truncation must be >= 1")
        self.pring = pring
        self.svars = tuple(svars)
        self.trunc = trunc

    def zero(self) -> "TruncSeries":
        return TruncSeries(self, {})

    def const(self, value) -> "TruncSeries":
        poly = value if isinstance(value, MultiPoly) else self.pring.const(value)
        if poly.is_zero():
            return self.zero()
        return TruncSeries(self, {(0,) * len(self.svars): poly})

    def gen(self, name: str) -> "TruncSeries":
        if name not in self.svars:
            raise ValueError(f"{name!r} not among series variables {self.svars}")
        exp = tuple(1 if v == name else 0 for v in self.svars)
        return TruncSeries(self, {exp: self.pring.one()})

    def from_terms(self, terms: dict) -> "TruncSeries":
        out = {}
        for exp, poly in terms.items():
            exp = tuple(exp)
            if sum(exp) >= self.trunc or poly.is_zero():
                continue
            out[exp] = poly
        return TruncSeries(self, out)

    def with_trunc(self, trunc: int) -> "SeriesRing":
        return SeriesRing(self.pring, self.svars, trunc)

    def __eq__(self, other):
        return (isinstance(other, SeriesRing) and other.pring == self.pring
                and other.svars == self.svars and other.trunc == self.trunc)

    def __hash__(self):
        return hash((self.pring, self.svars, self.trunc))

    def __repr__(self):
        return f"SeriesRing(vars={self.svars}, trunc={self.trunc})"


class TruncSeries:
    """Truncated power series; ``terms`` maps exponent tuples to MultiPoly."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("series from different rings")

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for exp, poly in other.terms.items():
            s = out[exp] + poly if exp in out else poly
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        return TruncSeries(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ring, {e: -p for e, p in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return self.scale_poly(other)
        if not isinstance(other, TruncSeries):
            return self.scale_poly(self.ring.pring.const(other))
        self._check(other)
        n = self.ring.trunc
        out: dict = {}
        for ea, pa in self.terms.items():
            da = sum(ea)
            for eb, pb in other.terms.items():
                if da + sum(eb) >= n:
                    continue
                exp = tuple(x + y for x, y in zip(ea, eb))
                prod = pa * pb
                if exp in out:
                    s = out[exp] + prod
                    if s.is_zero():
                        del out[exp]
                    else:
                        out[exp] = s
                elif not prod.is_zero():
                    out[exp] = prod
        return TruncSeries(self.ring, out)

    __rmul__ = __mul__

    def scale_poly(self, poly: MultiPoly) -> "TruncSeries":
        if poly.is_zero():
            return self.ring.zero()
        out = {}
        for exp, p in self.terms.items():
            q = p * poly
            if not q.is_zero():
                out[exp] = q
        return TruncSeries(self.ring, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative series power; use recip")
        out = self.ring.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.ring == other.ring and self.terms == other.terms
        return NotImplemented

    def constant_coefficient(self) -> MultiPoly:
        return self.terms.get((0,) * len(self.ring.svars), self.ring.pring.zero())

    def coefficient(self, exp) -> MultiPoly:
        return self.terms.get(tuple(exp), self.ring.pring.zero())

    def valuation(self) -> int:
        """Least total degree of a nonzero term (trunc if zero)."""
        if not self.terms:
            return self.ring.trunc
        return min(sum(e) for e in self.terms)

    def truncate(self, n: int) -> "TruncSeries":
        ring = self.ring.with_trunc(n)
        return TruncSeries(ring, {e: p for e, p in self.terms.items() if sum(e) < n})

    def map_coefficients(self, fn, pring: PolyRing | None = None) -> "TruncSeries":
        ring = self.ring if pring is None else SeriesRing(pring, self.ring.svars, self.ring.trunc)
        out = {}
        for e, p in self.terms.items():
            q = fn(p)
            if not q.is_zero():
                out[e] = q
        return TruncSeries(ring, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, poly in self.sorted_terms():
            mono = "*".join(v if a == 1 else f"{v}^{a}"
                            for v, a in zip(self.ring.svars, exp) if a)
            coef = poly.to_text()
            if "+" in coef or " - " in coef or (coef.startswith("-") and mono):
                coef = f"({coef})"
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"<TruncSeries {self.to_text()}>"

    # -- composition and inversion ----------------------------------------

    def compose(self, images: dict) -> "TruncSeries":
        """Substitute series for series variables (simultaneously).

        Every variable of self must get an image; images must share one
        ring and have zero constant term, which makes the truncated
        composite exact through degree trunc-1.
        """
        if set(images) != set(self.ring.svars):
            raise ValueError(f"need images for exactly {self.ring.svars}")
        target = None
        for img in images.values():
            if target is None:
                target = img.ring
            elif img.ring != target:
                raise ValueError("images live in different series rings")
            if not img.constant_coefficient().is_zero():
                raise ValueError("composition requires zero constant term")
        out = target.zero()
        pow_cache = {v: {0: target.const(1)} for v in self.ring.svars}

        def power(v, a):
            cache = pow_cache[v]
            if a not in cache:
                cache[a] = power(v, a - 1) * images[v]
            return cache[a]

        for exp, poly in self.terms.items():
            piece = target.const(poly)
            for v, a in zip(self.ring.svars, exp):
                if a:
                    piece = piece * power(v, a)
            out = out + piece
        return out

    def recip(self) -> "TruncSeries":
        """Multiplicative inverse; needs a unit scalar constant term."""
        c0 = self.constant_coefficient()
        lead = c0.leading_term()
        dom = self.ring.pring.domain
        if lead is None or any(a for a in lead[0]) or len(c0.terms) != 1 \
                or not dom.is_unit(lead[1]):
            raise NotInvertible(f"constant term {c0.to_text()} is not a unit scalar")
        cinv = dom.invert(lead[1])
        # 1/f = (1/c) * 1/(1 - u) with u = 1 - f/c, val(u) >= 1
        u = self.ring.const(1) - self * cinv
        inv = self.ring.const(1)
        acc = self.ring.const(1)
        for _ in range(self.ring.trunc):
            acc = acc * u
            if acc.is_zero():
                break
            inv = inv + acc
        return inv * cinv


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_compose(f: TruncSeries, images: dict) -> TruncSeries:
    return f.compose(images)


def series_recip(f: TruncSeries) -> TruncSeries:
    return f.recip()


def series_solve(phi: TruncSeries, zvar: str, wvar: str,
                 ring: SeriesRing | None = None) -> TruncSeries:
    """Unique fixed point w(z) of w = phi(z, w) with val(w) >= 1.

    Iterates w <- phi(z, w) from w = 0; each step must determine at least
    one further coefficient, so the loop stabilises within trunc steps or
    raises NoConvergence.
    """
    if ring is None:
        ring = SeriesRing(phi.ring.pring, (zvar,), phi.ring.trunc)
    z = ring.gen(zvar)
    w = ring.zero()
    for _ in range(ring.trunc + 1):
        new = phi.compose({zvar: z, wvar: w})
        if not new.constant_coefficient().is_zero():
            raise NoConvergence("fixed point would have nonzero constant term")
        if new == w:
            return w
        w = new
    raise NoConvergence(f"no fixed point within {ring.trunc} iterations")


def divided_difference(w: TruncSeries, ring2: SeriesRing,
                       var1: str, var2: str) -> TruncSeries:
    """(w(z2) - w(z1)) / (z2 - z1) as a series in (z1, z2).

    Uses z2^m - z1^m = (z2 - z1) * sum_{i+j=m-1} z1^i z2^j term by term,
    so the quotient is exact through degree trunc-2 of w.
    """
    i1 = ring2.svars.index(var1)
    i2 = ring2.svars.index(var2)
    n = ring2.trunc
    out: dict = {}
    for exp, poly in w.terms.items():
        m = sum(exp)
        if m == 0:
            continue
        for i in range(m):
            j = m - 1 - i
            if i + j >= n:
                continue
            key = [0] * len(ring2.svars)
            key[i1], key[i2] = i, j
            key = tuple(key)
            s = out[key] + poly if key in out else poly
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return TruncSeries(ring2, out)


def reversion(f: TruncSeries, zvar: str) -> TruncSeries:
    """Compositional inverse of f = z + O(z^2) in one variable."""
    ring = f.ring
    z = ring.gen(zvar)
    if f.coefficient((1,)) != ring.pring.one() or not f.constant_coefficient().is_zero():
        raise NotInvertible("reversion needs f = z + higher-order terms")
    g = z
    for _ in range(ring.trunc + 1):
        new = z - (f.compose({zvar: g}) - g)
        if new == g:
            break
        g = new
    if f.compose({zvar: g}) != z:
        raise NoConvergence("reversion did not converge")
    return g
