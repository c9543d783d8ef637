"""Exact arithmetic over Q: factorization, valuations, Legendre and Hilbert symbols."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, prod
from typing import Mapping, Union

from sympy import factorint, isprime

Rational = Union[int, Fraction]


def as_fraction(a: Rational) -> Fraction:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int):
        return Fraction(a)
    raise TypeError(f"expected int or Fraction, got {type(a).__name__}")


@dataclass(frozen=True)
class FactoredRational:
    sign: int
    factors: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        for p, e in self.factors.items():
            if e == 0 or not isprime(p):
                raise ValueError(f"bad factor {p}^{e}")
        object.__setattr__(self, "factors", dict(sorted(self.factors.items())))

    @property
    def value(self) -> Fraction:
        v = Fraction(self.sign)
        for p, e in self.factors.items():
            v *= Fraction(p) ** e
        return v

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        merged = dict(self.factors)
        for p, e in other.factors.items():
            merged[p] = merged.get(p, 0) + e
            if merged[p] == 0:
                del merged[p]
        return FactoredRational(self.sign * other.sign, merged)

    def squarefree_part(self) -> int:
        """Square-free integer in the same square class."""
        return self.sign * prod(p for p, e in self.factors.items() if e % 2)

    def __str__(self) -> str:
        if not self.factors:
            return str(self.sign)
        body = " * ".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.factors.items())
        return f"-{body}" if self.sign < 0 else body


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``p=None`` is the real place, otherwise a prime."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> "Place":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Place":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = text.strip().lower()
        if text in ("inf", "real", "oo", "r"):
            return cls(None)
        return cls(int(text))

    @property
    def is_real(self) -> bool:
        return self.p is None

    def sort_key(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


REAL = Place.real()


def factor(n: Rational) -> FactoredRational:
    """Factor a nonzero rational into sign and prime powers."""
    n = as_fraction(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: dict[int, int] = {}
    for p, e in factorint(abs(n.numerator)).items():
        factors[p] = e
    for p, e in factorint(n.denominator).items():
        factors[p] = factors.get(p, 0) - e
    return FactoredRational(1 if n > 0 else -1, factors)


def valuation(a: Rational, p: int) -> int:
    a = as_fraction(a)
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def int_valuation(n: int, p: int) -> int | float:
    """p-adic valuation of an integer, with ``inf`` for zero."""
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(a: Rational, p: int) -> Fraction:
    a = as_fraction(a)
    return a / Fraction(p) ** valuation(a, p)


def legendre_symbol(a: int, p: int) -> int:
    if p == 2 or p < 2:
        raise ValueError("Legendre symbol needs an odd prime")
    a %= p
    if a == 0:
        return 0
    # quadratic reciprocity loop on the Jacobi symbol
    result = 1
    n = p
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _split(a: Fraction, p: int) -> tuple[int, int]:
    """Return (v_p(a), unit part of a as an integer residue mod p^3)."""
    v = valuation(a, p)
    u = a / Fraction(p) ** v
    m = p**3
    return v, u.numerator * pow(u.denominator, -1, m) % m


def _eps2(u: int) -> int:
    return ((u % 8) - 1) // 2 % 2


def _omega2(u: int) -> int:
    return 1 if u % 8 in (3, 5) else 0


def hilbert_symbol(a: Rational, b: Rational, v: Place) -> int:
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of 0 is undefined")
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        exponent = _eps2(u) * _eps2(w) + alpha * _omega2(w) + beta * _omega2(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre_symbol(u, p)
    if alpha % 2:
        sign *= legendre_symbol(w, p)
    return sign


def is_square_in_completion(a: Rational, v: Place) -> bool:
    a = as_fraction(a)
    if a == 0:
        raise ValueError("0 has no square class")
    if v.is_real:
        return a > 0
    p = v.p
    if valuation(a, p) % 2:
        return False
    u = unit_part(a, p)
    # u is a p-adic unit; reduce numerator * denominator^-1 modulo p or 8
    if p == 2:
        return (u.numerator * u.denominator) % 8 == 1
    return legendre_symbol(u.numerator * u.denominator, p) == 1


def is_rational_square(a: Rational) -> bool:
    a = as_fraction(a)
    if a <= 0:
        return False
    return all(e % 2 == 0 for e in factor(a).factors.values())


def primes_dividing(*values: int) -> list[int]:
    primes: set[int] = set()
    for n in values:
        if n:
            primes.update(factorint(abs(n)))
    return sorted(primes)


def gcd_all(values) -> int:
    return reduce(gcd, values, 0)
