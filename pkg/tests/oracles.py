"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package; every routine is a direct transcription
of a definition (point counting by enumeration, trial division, ...).
"""

from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def primes_below(n: int) -> list[int]:
    return [k for k in range(2, n) if is_prime(k)]


def factor(n: int) -> dict[int, int]:
    n, out, q = abs(n), {}, 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def val(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def euler_symbol(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


def count_points(ainvs, l: int) -> int:
    """#E(F_l) by enumerating all affine (x, y), plus the point at infinity."""
    a1, a2, a3, a4, a6 = (a % l for a in ainvs)
    n = 1
    for x in range(l):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % l
        for y in range(l):
            if (y * y + a1 * x * y + a3 * y - rhs) % l == 0:
                n += 1
    return n


def brute_ap(ainvs, l: int) -> int:
    return l + 1 - count_points(ainvs, l)


def mu_index(N: int) -> Fraction:
    out = Fraction(N)
    for q in factor(N):
        out *= Fraction(q + 1, q)
    return out


def short_ainvs(a, b) -> tuple:
    """Integral long model of y^2 = x^3 + a x + b after clearing denominators by u^4, u^6."""
    a, b = Fraction(a), Fraction(b)
    u = 1
    while (a * u**4).denominator != 1 or (b * u**6).denominator != 1:
        u += 1
    return (0, 0, 0, int(a * u**4), int(b * u**6))
