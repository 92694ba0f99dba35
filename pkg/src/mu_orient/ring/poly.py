"""Graded multivariate polynomials and order-p ring automorphisms.

A MultiPoly lives in a PolyRing: a fixed tuple of named variables, each
with an integer weight, over either Z_(p) (LocalRational coefficients) or
Z/p^N (int coefficients).  Terms are stored as a map from exponent vectors
to nonzero coefficients.  All term orderings and serialised output use
graded-lexicographic order with the declared variable order, so rendered
polynomials are deterministic.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import NotDivisible, NotOrderP, UnknownVariable
from .localrat import LocalRational, PLocalDomain, ResidueRing


def grlex_key(exp: tuple) -> tuple:
    # total degree first, then lexicographic on the exponent vector
    return (sum(exp), exp)


class PolyRing:
    """Polynomial ring descriptor: coefficient domain, variables, weights."""

    __slots__ = ("domain", "vars", "weights", "_index")

    def __init__(self, domain, variables, weights=None):
        self.domain = domain
        self.vars = tuple(variables)
        if weights is None:
            weights = (1,) * len(self.vars)
        self.weights = tuple(weights)
        if len(self.weights) != len(self.vars):
            raise ValueError("one weight per variable required")
        self._index = {v: i for i, v in enumerate(self.vars)}

    @property
    def prime(self) -> int:
        return self.domain.char_prime

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, value) -> "MultiPoly":
        c = self.domain.coerce(value)
        if self.domain.is_zero(c):
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * len(self.vars): c})

    def gen(self, name: str) -> "MultiPoly":
        if name not in self._index:
            raise UnknownVariable(f"{name!r} not among {self.vars}")
        exp = tuple(1 if v == name else 0 for v in self.vars)
        return MultiPoly(self, {exp: self.domain.coerce(1)})

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(self.gen(v) for v in self.vars)

    def from_terms(self, terms: dict) -> "MultiPoly":
        clean = {}
        for exp, c in terms.items():
            c = self.domain.coerce(c)
            if not self.domain.is_zero(c):
                clean[tuple(exp)] = c
        return MultiPoly(self, clean)

    def with_domain(self, domain) -> "PolyRing":
        return PolyRing(domain, self.vars, self.weights)

    def __eq__(self, other):
        return (isinstance(other, PolyRing)
                and other.domain == self.domain
                and other.vars == self.vars
                and other.weights == self.weights)

    def __hash__(self):
        return hash((self.domain, self.vars, self.weights))

    def __repr__(self):
        return f"PolyRing({self.domain!r}, vars={self.vars})"


class MultiPoly:
    """Immutable-by-convention multivariate polynomial.

    ``terms`` maps exponent tuples to nonzero coefficients; the zero
    polynomial has no terms.  Do not mutate ``terms`` after construction.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        self._check(other)
        dom = self.ring.domain
        out = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in out:
                s = out[exp] + c if isinstance(c, LocalRational) or isinstance(out[exp], LocalRational) else dom.add(out[exp], c)
                if dom.is_zero(s):
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        if isinstance(dom, PLocalDomain):
            return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})
        m = dom.modulus
        return MultiPoly(self.ring, {e: (-c) % m for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        dom = self.ring.domain
        plocal = isinstance(dom, PLocalDomain)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb if plocal else (ca * cb) % dom.modulus
                if exp in out:
                    s = out[exp] + prod if plocal else (out[exp] + prod) % dom.modulus
                    if dom.is_zero(s):
                        del out[exp]
                    else:
                        out[exp] = s
                elif not dom.is_zero(prod):
                    out[exp] = prod
        return MultiPoly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "MultiPoly":
        dom = self.ring.domain
        c = dom.coerce(c)
        if dom.is_zero(c):
            return self.ring.zero()
        plocal = isinstance(dom, PLocalDomain)
        return MultiPoly(self.ring, {
            e: (v * c if plocal else (v * c) % dom.modulus)
            for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return (self - self.ring.const(other)).is_zero()

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def weighted_degree(self, exp=None):
        """Weighted degree of one term, or of the polynomial (max over terms).

        Returns None for the zero polynomial.
        """
        w = self.ring.weights
        if exp is not None:
            return sum(a * b for a, b in zip(exp, w))
        if not self.terms:
            return None
        return max(sum(a * b for a, b in zip(e, w)) for e in self.terms)

    def is_homogeneous(self, degree=None) -> bool:
        degs = {self.weighted_degree(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def leading_term(self):
        """(exponent, coefficient) of the graded-lex largest term."""
        if not self.terms:
            return None
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def coefficient(self, exp: tuple):
        return self.terms.get(tuple(exp), self.ring.domain.zero())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- ring maps --------------------------------------------------------

    def substitute(self, images: dict) -> "MultiPoly":
        """Simultaneously replace variables by polynomials.

        Variables absent from ``images`` are left alone.  All image
        polynomials must live in one common ring, which becomes the ring
        of the result (default: this polynomial's ring).
        """
        target = self.ring
        for img in images.values():
            target = img.ring
            break
        for name in images:
            if name not in self.ring._index:
                raise UnknownVariable(f"{name!r} not among {self.ring.vars}")
        images = {self.ring._index[n]: v for n, v in images.items()}
        gens = {}
        for i, name in enumerate(self.ring.vars):
            if i not in images:
                gens[i] = target.gen(name)
        out = target.zero()
        powcache: dict = {}
        for exp, c in self.terms.items():
            piece = target.const(c if not isinstance(c, LocalRational) else Fraction(c.num, c.den))
            for i, a in enumerate(exp):
                if a == 0:
                    continue
                base = images.get(i) or gens[i]
                key = (i, a)
                if key not in powcache:
                    powcache[key] = base ** a
                piece = piece * powcache[key]
            out = out + piece
        return out

    def reduce_mod(self, exponent: int = 1) -> "MultiPoly":
        """Image in the same variables over Z/p^exponent."""
        dom = self.ring.domain
        target = self.ring.with_domain(ResidueRing(dom.char_prime, exponent))
        return target.from_terms({e: target.domain.coerce(c) for e, c in self.terms.items()})

    def divide_by_p(self) -> "MultiPoly":
        """Exact quotient by p; NotDivisible names the first offending term."""
        dom = self.ring.domain
        if not isinstance(dom, PLocalDomain):
            raise NotDivisible("exact division by p needs Z_(p) coefficients")
        out = {}
        for exp, c in self.sorted_terms():
            if c.num % dom.prime != 0:
                raise NotDivisible(
                    f"term {self._format_term(exp, c)} has coefficient not divisible by {dom.prime}")
            out[exp] = c.divide_by_p()
        return MultiPoly(self.ring, out)

    def mul_by_p(self) -> "MultiPoly":
        return self.scale(self.ring.prime)

    # -- rendering --------------------------------------------------------

    def _format_term(self, exp, coef) -> str:
        dom = self.ring.domain
        factors = [v if a == 1 else f"{v}^{a}"
                   for v, a in zip(self.ring.vars, exp) if a]
        cs = dom.format(coef)
        if not factors:
            return cs
        if cs == "1":
            return "*".join(factors)
        if cs == "-1":
            return "-" + "*".join(factors)
        return cs + "*" + "*".join(factors)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            s = self._format_term(exp, c)
            if parts:
                if s.startswith("-"):
                    parts.append(" - " + s[1:])
                else:
                    parts.append(" + " + s)
            else:
                parts.append(s)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"<MultiPoly {self.to_text()}>"

    def to_json(self) -> dict:
        data = {
            "vars": list(self.ring.vars),
            "terms": [{"exp": list(e), "coef": self.ring.domain.format(c)}
                      for e, c in self.sorted_terms()],
        }
        if any(w != 1 for w in self.ring.weights):
            data["weights"] = list(self.ring.weights)
        return data

    @classmethod
    def from_json(cls, data: dict, ring: PolyRing) -> "MultiPoly":
        if list(ring.vars) != list(data["vars"]):
            raise ValueError("variable mismatch")
        terms = {}
        for t in data["terms"]:
            terms[tuple(t["exp"])] = Fraction(t["coef"])
        return ring.from_terms(terms)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>\*\*|[*^+()-]))")


def parse_poly(ring: PolyRing, text: str) -> MultiPoly:
    """Parse expressions like ``-3*l1^2*l2 + 1/2*l2^3`` into ``ring``.

    Supported grammar: sum of terms; a term is an optional sign, an
    optional rational coefficient, and ``*``-separated variable powers
    (``^`` or ``**``).  No parentheses.
    """
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot tokenise {text[pos:]!r}")
        pos = m.end()
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
    out = ring.zero()
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coef = Fraction(sign)
        exp = [0] * len(ring.vars)
        saw = False
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "num" and expect_factor:
                coef *= Fraction(val)
                saw = True
                i += 1
            elif kind == "var" and expect_factor:
                if val not in ring._index:
                    raise UnknownVariable(f"{val!r} not among {ring.vars}")
                power = 1
                i += 1
                if i + 1 < n and tokens[i][0] == "op" and tokens[i][1] in ("^", "**") \
                        and tokens[i + 1][0] == "num":
                    power = int(tokens[i + 1][1])
                    i += 2
                exp[ring._index[val]] += power
                saw = True
            elif kind == "op" and val == "*":
                i += 1
                expect_factor = True
                continue
            else:
                break
            expect_factor = False
        if not saw:
            raise ValueError(f"empty term in {text!r}")
        out = out + ring.from_terms({tuple(exp): coef})
    return out


class RingAction:
    """Order-p ring automorphism given by images of the generators.

    Degree preservation and gamma^p = id are checkable via
    ``check_degree_preserving`` and ``check_order`` (the constructor runs
    both unless ``validate=False``).
    """

    __slots__ = ("ring", "images", "order", "_iterates")

    def __init__(self, ring: PolyRing, images: dict, order: int | None = None,
                 validate: bool = True):
        self.ring = ring
        self.images = {v: images[v] for v in ring.vars if v in images}
        missing = set(ring.vars) - set(self.images)
        if missing:
            raise UnknownVariable(f"no image for variables {sorted(missing)}")
        self.order = order if order is not None else ring.prime
        self._iterates = {1: self.images}
        if validate:
            self.check_degree_preserving()
            self.check_order()

    def _images_pow(self, k: int) -> dict:
        k %= self.order
        if k == 0:
            return {v: self.ring.gen(v) for v in self.ring.vars}
        if k not in self._iterates:
            prev = self._images_pow(k - 1)
            self._iterates[k] = {v: prev[v].substitute(self.images)
                                 for v in self.ring.vars}
        return self._iterates[k]

    def apply(self, f: MultiPoly, k: int = 1) -> MultiPoly:
        k %= self.order
        if k == 0:
            return f
        return f.substitute(self._images_pow(k))

    def check_order(self):
        idn = self._images_pow(0)
        prev = self._images_pow(self.order - 1)
        for v in self.ring.vars:
            if prev[v].substitute(self.images) != idn[v]:
                raise NotOrderP(
                    f"action does not have order {self.order} on {v}")

    def check_degree_preserving(self):
        for v, img in self.images.items():
            d = self.ring.gen(v).weighted_degree()
            if not img.is_homogeneous(d):
                raise NotOrderP(
                    f"image of {v} is not homogeneous of weighted degree {d}")


def apply_action(action: RingAction, f: MultiPoly, k: int = 1) -> MultiPoly:
    """sigma^k(f) by simultaneous substitution, k reduced mod the order."""
    return action.apply(f, k)


def divide_by_p(f: MultiPoly) -> MultiPoly:
    """g with p*g = f exactly; raises NotDivisible naming the bad term."""
    return f.divide_by_p()
