"""Small number-theoretic helpers shared by the curve and trace modules."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import factorint, isprime, nextprime
from sympy.functions.combinatorial.numbers import kronecker_symbol

__all__ = [
    "valuation",
    "valuation_q",
    "legendre",
    "kronecker",
    "is_square_mod",
    "squarefree_part",
    "power_free_part",
    "is_rational_square",
    "prime_factors",
    "primes_upto",
    "primes_between",
    "next_primes",
    "isprime",
]


def valuation(n: int, p: int) -> float | int:
    """p-adic valuation of an integer; ``inf`` for zero."""
    if n == 0:
        return float("inf")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_q(x: Fraction | int, p: int) -> float | int:
    x = Fraction(x)
    if x == 0:
        return float("inf")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, returning -1, 0 or 1."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n); for a discriminant d, the character of Q(sqrt d)."""
    return int(kronecker_symbol(d, n))


def is_square_mod(a: int, p: int) -> bool:
    """True when a is a nonzero square modulo the odd prime p."""
    return legendre(a, p) == 1


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def prime_factors(n: int) -> dict[int, int]:
    """Factorisation of |n| as {prime: exponent}; empty for |n| <= 1."""
    n = abs(n)
    if n <= 1:
        return {}
    return {int(q): int(e) for q, e in _factor(n)}


def power_free_part(x: Fraction | int, k: int) -> tuple[Fraction, Fraction]:
    """Write x = r * s**k with r a k-th-power-free integer (sign kept in r).

    Returns (r, s); r is an integer-valued Fraction.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no power-free part")
    # clear the denominator into a k-th power first
    den = x.denominator
    num = x.numerator * den ** (k - 1)
    s = Fraction(1, den)
    r = 1 if num > 0 else -1
    for q, e in prime_factors(num).items():
        r *= q ** (e % k)
        s *= q ** (e // k)
    if k % 2 == 1 and r < 0:
        # odd k: absorb the sign into s
        r, s = -r, -s
    return Fraction(r), s


def squarefree_part(x: Fraction | int) -> int:
    """Squarefree integer d with x = d * (rational square)."""
    return int(power_free_part(x, 2)[0])


def is_rational_square(x: Fraction | int) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    if x == 0:
        return True
    return (
        isqrt(x.numerator) ** 2 == x.numerator
        and isqrt(x.denominator) ** 2 == x.denominator
    )


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags)


def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # round the sieve size up so repeated calls share a cache entry
    size = 1 << max(10, (limit - 1).bit_length())
    ps = _sieve(size)
    return ps[: np.searchsorted(ps, limit, side="right")].astype(np.int64)


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [int(p) for p in primes_upto(hi) if p >= lo]


def next_primes(bound: int, count: int) -> list[int]:
    """The ``count`` smallest primes strictly greater than ``bound``."""
    out = []
    q = bound
    for _ in range(count):
        q = int(nextprime(q))
        out.append(q)
    return out


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
