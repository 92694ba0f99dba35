"""p-local rational numbers and residue rings Z/p^N.

LocalRational is an exact fraction a/b with b > 0 coprime to the working
prime p, always stored in lowest terms.  It is the coefficient type for
everything that happens over Z_(p).  ResidueRing(p, N) describes Z/p^N
(N = 1 is the prime field F_p); its elements are plain ints in [0, p^N).
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import NotDivisible, NotPLocal

_INT_TYPES = (int,)


class LocalRational:
    """Element of Z_(p): numerator/denominator with denominator coprime to p.

    Arithmetic is exact.  Division raises NotPLocal when the result would
    acquire a factor of p in its denominator.  Instances are immutable and
    hashable.
    """

    __slots__ = ("num", "den", "prime")

    def __init__(self, num, den=1, *, prime):
        if isinstance(num, LocalRational):
            if den != 1:
                raise ValueError("cannot combine LocalRational with denominator")
            num, den = num.num, num.den
        elif isinstance(num, Fraction):
            num, den = num.numerator, num.denominator * den
        if not isinstance(num, _INT_TYPES) or not isinstance(den, _INT_TYPES):
            raise TypeError(f"bad rational input {num!r}/{den!r}")
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        if den % prime == 0:
            raise NotPLocal(f"{num}/{den} is not {prime}-local")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "prime", prime)

    def __setattr__(self, name, value):
        raise AttributeError("LocalRational is immutable")

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "LocalRational":
        if isinstance(other, LocalRational):
            if other.prime != self.prime:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, _INT_TYPES):
            return LocalRational(other, prime=self.prime)
        if isinstance(other, Fraction):
            return LocalRational(other.numerator, other.denominator, prime=self.prime)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalRational(self.num * o.den + o.num * self.den,
                             self.den * o.den, prime=self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalRational(self.num * o.den - o.num * self.den,
                             self.den * o.den, prime=self.prime)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalRational(self.num * o.num, self.den * o.den, prime=self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num == 0:
            raise ZeroDivisionError("division by zero")
        num, den = self.num * o.den, self.den * o.num
        if den != 0:
            g = math.gcd(num, den)
            if (den // g) % self.prime == 0:
                raise NotPLocal(
                    f"({self}) / ({o}) leaves Z_({self.prime})")
        return LocalRational(num, den, prime=self.prime)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return LocalRational(-self.num, self.den, prime=self.prime)

    def __pow__(self, k: int):
        if k < 0:
            return LocalRational(1, prime=self.prime) / self ** (-k)
        return LocalRational(self.num ** k, self.den ** k, prime=self.prime)

    # -- structure --------------------------------------------------------

    def __bool__(self):
        return self.num != 0

    def __eq__(self, other):
        if isinstance(other, _INT_TYPES):
            return self.den == 1 and self.num == other
        if isinstance(other, Fraction):
            return self.num == other.numerator and self.den == other.denominator
        if isinstance(other, LocalRational):
            return (self.num, self.den, self.prime) == (other.num, other.den, other.prime)
        return NotImplemented

    def __hash__(self):
        return hash(Fraction(self.num, self.den))

    def valuation(self) -> int | float:
        """p-adic valuation; math.inf for zero.

        The denominator is coprime to p, so this is the valuation of the
        numerator and is always >= 0.
        """
        if self.num == 0:
            return math.inf
        v, n = 0, abs(self.num)
        while n % self.prime == 0:
            n //= self.prime
            v += 1
        return v

    def divide_by_p(self) -> "LocalRational":
        if self.num % self.prime != 0:
            raise NotDivisible(f"{self} is not divisible by {self.prime}")
        return LocalRational(self.num // self.prime, self.den, prime=self.prime)

    def residue(self, exponent: int = 1) -> int:
        """Canonical image in Z/p^exponent (the denominator is invertible)."""
        mod = self.prime ** exponent
        return (self.num * pow(self.den, -1, mod)) % mod

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __repr__(self):
        return f"LocalRational({self.num}, {self.den}, prime={self.prime})"

    def __str__(self):
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


class PLocalDomain:
    """Coefficient domain marker for Z_(p) with coercion helpers."""

    __slots__ = ("prime",)

    def __init__(self, prime: int):
        self.prime = prime

    @property
    def char_prime(self) -> int:
        return self.prime

    def coerce(self, value) -> LocalRational:
        if isinstance(value, LocalRational):
            if value.prime != self.prime:
                raise ValueError("mixed primes")
            return value
        if isinstance(value, Fraction):
            return LocalRational(value.numerator, value.denominator, prime=self.prime)
        return LocalRational(value, prime=self.prime)

    def zero(self):
        return LocalRational(0, prime=self.prime)

    def one(self):
        return LocalRational(1, prime=self.prime)

    def is_zero(self, value) -> bool:
        return value.num == 0

    def is_unit(self, value) -> bool:
        return value.num != 0 and value.num % self.prime != 0

    def invert(self, value) -> LocalRational:
        return self.one() / value

    def format(self, value) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, PLocalDomain) and other.prime == self.prime

    def __hash__(self):
        return hash(("plocal", self.prime))

    def __repr__(self):
        return f"Z_({self.prime})"


class ResidueRing:
    """Z/p^N with canonical representatives in [0, p^N); N = 1 is F_p."""

    __slots__ = ("prime", "exponent", "modulus")

    def __init__(self, prime: int, exponent: int = 1):
        if exponent < 1:
            raise ValueError("exponent must be >= 1")
        self.prime = prime
        self.exponent = exponent
        self.modulus = prime ** exponent

    @property
    def char_prime(self) -> int:
        return self.prime

    def coerce(self, value) -> int:
        if isinstance(value, LocalRational):
            return value.residue(self.exponent)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.modulus)) % self.modulus
        return int(value) % self.modulus

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def is_zero(self, value) -> bool:
        return value % self.modulus == 0

    def is_unit(self, value) -> bool:
        return value % self.prime != 0

    def invert(self, value) -> int:
        if not self.is_unit(value):
            raise NotPLocal(f"{value} is not invertible in Z/{self.modulus}")
        return pow(value, -1, self.modulus)

    def add(self, a, b) -> int:
        return (a + b) % self.modulus

    def mul(self, a, b) -> int:
        return (a * b) % self.modulus

    def format(self, value) -> str:
        return str(value % self.modulus)

    def __eq__(self, other):
        return (isinstance(other, ResidueRing)
                and (other.prime, other.exponent) == (self.prime, self.exponent))

    def __hash__(self):
        return hash(("residue", self.prime, self.exponent))

    def __repr__(self):
        if self.exponent == 1:
            return f"F_{self.prime}"
        return f"Z/{self.prime}^{self.exponent}"
