"""Exact coefficient domains: the rationals and large prime fields.

Every computation in this package runs over exactly one domain, chosen up
front and never mixed.  Rational arithmetic uses ``fractions.Fraction``
(always reduced, positive denominator); prime-field arithmetic uses
:class:`FpElement` for a configured prime p > 2**31.
"""

from __future__ import annotations

from fractions import Fraction


class DomainError(ValueError):
    """Value cannot be interpreted in the requested domain."""


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers all primes we draw)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_large_prime(rng) -> int:
    """Draw a random prime in (2**31, 2**62) from the given RNG."""
    while True:
        n = rng.randrange(2**31 + 1, 2**62) | 1
        if is_probable_prime(n):
            return n


class FpElement:
    """An element of F_p, kept reduced into [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise DomainError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        if isinstance(other, Fraction):
            num = other.numerator % self.p
            den = other.denominator % self.p
            if den == 0:
                raise DomainError(f"denominator {other.denominator} vanishes mod {self.p}")
            return FpElement(num * pow(den, self.p - 2, self.p), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(other.value - self.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.value * pow(other.value, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return FpElement(1, self.p) / self ** (-e)
        return FpElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, Fraction):
            return other.denominator % self.p != 0 and self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


class RationalDomain:
    """The field of rational numbers; scalars are ``Fraction`` instances."""

    name = "Q"
    is_rational = True

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, FpElement):
            raise DomainError("cannot lift a prime-field element back to Q")
        raise DomainError(f"cannot interpret {x!r} as a rational")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalDomain)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeDomain:
    """The field F_p for a configured prime p > 2**31."""

    is_rational = False

    def __init__(self, p: int):
        if p <= 2**31:
            raise DomainError(f"prime {p} too small; the prime field requires p > 2**31")
        if not is_probable_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.name = f"F_{p}"

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise DomainError(f"element of F_{x.p} used in F_{self.p}")
            return x
        if isinstance(x, (int, Fraction)):
            return FpElement(0, self.p)._coerce(x)
        raise DomainError(f"cannot interpret {x!r} in F_{self.p}")

    @property
    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    @property
    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeDomain) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalDomain()


def GF(p: int) -> PrimeDomain:
    return PrimeDomain(p)


def scalar_to_str(x) -> str:
    """Canonical text form: "num/den" for rationals, decimal for F_p."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, FpElement):
        return str(x.value)
    if isinstance(x, int):
        return f"{x}/1"
    raise DomainError(f"not a scalar: {x!r}")
