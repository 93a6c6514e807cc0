"""Elliptic curves over Q: integral models, invariants, minimality, local data, twists.

Integral long Weierstrass models are the canonical form.  Short models
``y^2 = x^3 + a x + b`` with rational ``a, b`` are a view on top of them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_diff, gf_from_int_poly, gf_gcd, gf_monic

from .arith import power_free_part, prime_factors, squarefree_part, valuation

__all__ = [
    "RationalEC",
    "ShortModel",
    "ReductionKind",
    "ReductionData",
    "short_model",
    "minimal_model",
    "tate_local",
    "conductor",
    "quadratic_twist",
    "quartic_twist",
    "sextic_twist",
    "is_cm",
    "CM_J_INVARIANTS",
]


def _fmod(x: int, m: int) -> int:
    """Residue of x in (-m/2, m/2]."""
    r = x % m
    return r - m if 2 * r > m else r


@dataclass(frozen=True)
class RationalEC:
    """Integral long Weierstrass model ``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6``."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = getattr(self, name)
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise ValueError(f"{name} must be integral, got {v}")
                object.__setattr__(self, name, int(v))
            elif not isinstance(v, int):
                object.__setattr__(self, name, int(v))
        if self.disc == 0:
            raise ValueError(f"singular Weierstrass model {self.ainvs}")

    # construction -----------------------------------------------------------

    @classmethod
    def from_ainvs(cls, ainvs) -> "RationalEC":
        """Integral model isomorphic to the (possibly rational) a-invariants.

        Accepts 5 entries ``[a1, a2, a3, a4, a6]`` or 2 entries ``[a4, a6]``.
        """
        ainvs = [Fraction(x) for x in ainvs]
        if len(ainvs) == 2:
            ainvs = [Fraction(0), Fraction(0), Fraction(0), *ainvs]
        if len(ainvs) != 5:
            raise ValueError("expected 2 or 5 a-invariants")
        # a_i -> u^i a_i with u the lcm of the needed denominators
        u = 1
        for i, a in zip((1, 2, 3, 4, 6), ainvs):
            for q, e in prime_factors(a.denominator).items():
                need = -(-e // i)
                while valuation(u, q) < need:
                    u *= q
        scaled = [a * u**i for i, a in zip((1, 2, 3, 4, 6), ainvs)]
        return cls(*(int(a) for a in scaled))

    @classmethod
    def from_short(cls, a, b) -> "RationalEC":
        return cls.from_ainvs([a, b])

    @classmethod
    def from_c4c6(cls, c4: int, c6: int) -> "RationalEC":
        """The reduced integral model with the given invariants (Kraus conditions assumed)."""
        b2 = _fmod(-c6, 12)
        b4 = (b2 * b2 - c4) // 24
        b6 = (-(b2**3) + 36 * b2 * b4 - c6) // 216
        a1 = b2 % 2
        a3 = b6 % 2
        a2 = (b2 - a1) // 4
        a4 = (b4 - a1 * a3) // 2
        a6 = (b6 - a3) // 4
        E = cls(a1, a2, a3, a4, a6)
        if E.c4 != c4 or E.c6 != c6:
            raise ValueError(f"(c4, c6) = ({c4}, {c6}) are not invariants of an integral model")
        return E

    # invariants -------------------------------------------------------------

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b2(self) -> int:
        return self.a1**2 + 4 * self.a2

    @cached_property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self) -> int:
        return self.a3**2 + 4 * self.a6

    @cached_property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @cached_property
    def c4(self) -> int:
        return self.b2**2 - 24 * self.b4

    @cached_property
    def c6(self) -> int:
        return -(self.b2**3) + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @cached_property
    def j(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)

    def change_coords(self, u=1, r=0, s=0, t=0) -> "RationalEC":
        """Model obtained by x = u^2 x' + r, y = u^3 y' + s u^2 x' + t (result must be integral)."""
        a1, a2, a3, a4, a6 = (Fraction(a) for a in self.ainvs)
        u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        return RationalEC(n1 / u, n2 / u**2, n3 / u**3, n4 / u**4, n6 / u**6)

    def __repr__(self) -> str:
        return f"RationalEC({list(self.ainvs)})"


@dataclass(frozen=True)
class ShortModel:
    """``y^2 = x^3 + a x + b`` with rational coefficients."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise ValueError("singular short model")

    @property
    def j(self) -> Fraction:
        return 1728 * Fraction(4 * self.a**3) / (4 * self.a**3 + 27 * self.b**2)

    def curve(self) -> RationalEC:
        return RationalEC.from_short(self.a, self.b)


def short_model(E: RationalEC) -> ShortModel:
    """Integral short model (-27 c4, -54 c6) with common (u^4, u^6) factors removed."""
    a, b = -27 * E.c4, -54 * E.c6
    u = 1
    for q in prime_factors(gcd(a, b)):
        ea = valuation(a, q) // 4 if a else float("inf")
        eb = valuation(b, q) // 6 if b else float("inf")
        u *= q ** int(min(ea, eb))
    return ShortModel(Fraction(a, u**4), Fraction(b, u**6))


def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    if p == 3:
        return valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return c4 % 16 == 0 and c6 % 32 in (0, 8)
    return True


def minimal_model(E: RationalEC) -> RationalEC:
    """Global minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1})."""
    c4, c6, D = E.c4, E.c6, E.disc
    u = 1
    g = gcd(c4, c6) if c4 and c6 else (c4 or c6)
    for p in prime_factors(g):
        if D % p**12:
            continue
        d = int(min(valuation(c4, p) // 4 if c4 else 99999,
                    valuation(c6, p) // 6 if c6 else 99999,
                    valuation(D, p) // 12))
        while d > 0 and not _kraus_ok(c4 // p ** (4 * d), c6 // p ** (6 * d), p):
            d -= 1
        u *= p**d
    return RationalEC.from_c4c6(c4 // u**4, c6 // u**6)


# local reduction data ---------------------------------------------------------


class ReductionKind(enum.Enum):
    GOOD = "good"
    SPLIT = "split multiplicative"
    NONSPLIT = "non-split multiplicative"
    ADDITIVE = "additive"

    @property
    def multiplicative(self) -> bool:
        return self in (ReductionKind.SPLIT, ReductionKind.NONSPLIT)


@dataclass(frozen=True)
class ReductionData:
    prime: int
    kind: ReductionKind
    cond_exp: int
    disc_exp: int
    kodaira: str = field(default="I0", compare=False)

    @property
    def local_trace(self) -> int:
        """a_q at a bad prime: +1 split, -1 non-split, 0 additive."""
        return {ReductionKind.SPLIT: 1, ReductionKind.NONSPLIT: -1}.get(self.kind, 0)


def _roots_mod(coeffs: list[int], p: int) -> list[int]:
    """Roots in F_p of a polynomial given high-degree-first, with multiplicity."""
    f = [c % p for c in coeffs]
    while f and f[0] == 0:
        f = f[1:]
    if len(f) <= 1:
        return []
    if p < 50:
        roots = []
        for x in range(p):
            g = f
            while len(g) > 1:
                # synthetic division by (X - x)
                acc, quot = 0, []
                for c in g:
                    acc = (acc * x + c) % p
                    quot.append(acc)
                if quot[-1] != 0:
                    break
                roots.append(x)
                g = quot[:-1]
        return roots
    raise NotImplementedError


def _repeated_root(coeffs: list[int], p: int) -> int:
    """The unique multiple root mod p of a polynomial known to have one."""
    if p < 50:
        rts = _roots_mod(coeffs, p)
        for r in rts:
            if rts.count(r) > 1:
                return r
        raise ArithmeticError("no repeated root")
    f = gf_from_int_poly(coeffs, p)
    g = gf_gcd(f, gf_diff(f, p, ZZ), p, ZZ)
    # g = (X - r)^k; the root is -(coefficient of X^(k-1)) / k
    g = gf_monic(g, p, ZZ)[1]
    k = len(g) - 1
    if k < 1:
        raise ArithmeticError("no repeated root")
    return (-int(g[1]) * pow(k, -1, p)) % p


def _quadratic_splits(b: int, c: int, p: int) -> bool:
    """Whether T^2 + bT + c has a root in F_p."""
    if p == 2:
        return any((x * x + b * x + c) % 2 == 0 for x in (0, 1))
    disc = (b * b - 4 * c) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def _singular_point(E: RationalEC, p: int) -> tuple[int, int]:
    """Coordinates of the singular point of E mod p (E has bad reduction at p)."""
    a1, a2, a3, a4, a6 = E.ainvs
    if p == 2:
        for x in (0, 1):
            for y in (0, 1):
                F = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % 2 == 0 and Fx % 2 == 0 and Fy % 2 == 0:
                    return x, y
        raise ArithmeticError("no singular point mod 2")
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    x0 = _repeated_root([4, E.b2, 2 * E.b4, E.b6], p)
    y0 = (-(a1 * x0 + a3) * pow(2, -1, p)) % p
    return x0, y0


def tate_local(E: RationalEC, q: int) -> ReductionData:
    """Reduction type and exponents of the conductor and discriminant at q.

    Tate's algorithm; ``E`` should be minimal at q (non-minimal input is
    reduced along the way, and disc_exp then refers to the minimal model).
    """
    p = q
    while True:
        vD = valuation(E.disc, p)
        if vD == 0:
            return ReductionData(p, ReductionKind.GOOD, 0, 0, "I0")
        x0, y0 = _singular_point(E, p)
        E = E.change_coords(1, x0, 0, y0)
        a1, a2, a3, a4, a6 = E.ainvs
        if E.b2 % p:
            split = _quadratic_splits(a1, -a2, p)
            kind = ReductionKind.SPLIT if split else ReductionKind.NONSPLIT
            return ReductionData(p, kind, 1, vD, f"I{vD}")
        if a6 % p**2:
            return ReductionData(p, ReductionKind.ADDITIVE, vD, vD, "II")
        if E.b8 % p**3:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 1, vD, "III")
        if E.b6 % p**3:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 2, vD, "IV")
        # make p | a1, a2 ; p^2 | a3, a4 ; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            # h = -1/2 mod p; unreduced products keep the p-adic gain
            h = (p - 1) // 2
            s, t = a1 * h, a3 * h
        E = E.change_coords(1, 0, s, t)
        a1, a2, a3, a4, a6 = E.ainvs
        b, c, d = a2 // p, a4 // p**2, a6 // p**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % p:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 4, vD, "I0*")
        if x % p:
            # one simple root, one double root: I_m*
            r = _repeated_root([1, b, c, d], p)
            E = E.change_coords(1, r * p, 0, 0)
            a1, a2, a3, a4, a6 = E.ainvs
            m = 1
            mx, my = p * p, p * p
            while True:
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa3 * xa3 + 4 * xa6) % p:
                    break
                if p == 2:
                    t = my * ((xa6) % 2)
                else:
                    t = my * ((-xa3 * pow(2, -1, p)) % p)
                E = E.change_coords(1, 0, 0, t)
                a1, a2, a3, a4, a6 = E.ainvs
                my *= p
                m += 1
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                    break
                if p == 2:
                    r = mx * ((xa6 * xa2) % 2)
                else:
                    r = mx * ((-xa4 * pow(2 * xa2, -1, p)) % p)
                E = E.change_coords(1, r, 0, 0)
                a1, a2, a3, a4, a6 = E.ainvs
                mx *= p
                m += 1
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 4 - m, vD, f"I{m}*")
        # triple root
        if p == 3:
            rp = (-d) % 3
        else:
            rp = (-b * pow(3, -1, p)) % p
        E = E.change_coords(1, p * rp, 0, 0)
        a1, a2, a3, a4, a6 = E.ainvs
        x3 = a3 // p**2
        x6 = a6 // p**4
        if (x3 * x3 + 4 * x6) % p:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 6, vD, "IV*")
        if p == 2:
            t = x6 % 2
        else:
            t = (-x3 * pow(2, -1, p)) % p
        E = E.change_coords(1, 0, 0, t * p**2)
        a1, a2, a3, a4, a6 = E.ainvs
        if a4 % p**4:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 7, vD, "III*")
        if a6 % p**6:
            return ReductionData(p, ReductionKind.ADDITIVE, vD - 8, vD, "II*")
        # non-minimal: scale down and restart
        E = E.change_coords(p, 0, 0, 0)


def local_data(E: RationalEC) -> dict[int, ReductionData]:
    """Reduction data at every bad prime of the minimal model of E."""
    Em = minimal_model(E)
    return {q: tate_local(Em, q) for q in sorted(prime_factors(Em.disc))}


def conductor(E: RationalEC) -> int:
    N = 1
    for q, rd in local_data(E).items():
        N *= q**rd.cond_exp
    return N


# twists -----------------------------------------------------------------------


def quadratic_twist(E: RationalEC, d) -> RationalEC:
    """Quadratic twist E^d; d is reduced to its squarefree part first."""
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    d = squarefree_part(d)
    if d == 1:
        return E
    sm = short_model(E)
    return minimal_model(RationalEC.from_short(sm.a * d * d, sm.b * d**3))


def quartic_twist(a, u) -> RationalEC:
    """Quartic twist of y^2 = x^3 + a x by u, i.e. y^2 = x^3 + a u x."""
    a, u = Fraction(a), Fraction(u)
    if u == 0:
        raise ValueError("twist parameter must be nonzero")
    if a == 0:
        raise ValueError("quartic twists need j = 1728 (a != 0, b = 0)")
    r, _ = power_free_part(u, 4)
    return RationalEC.from_short(a * r, 0)


def sextic_twist(b, u) -> RationalEC:
    """Sextic twist of y^2 = x^3 + b by u, i.e. y^2 = x^3 + b u."""
    b, u = Fraction(b), Fraction(u)
    if u == 0:
        raise ValueError("twist parameter must be nonzero")
    if b == 0:
        raise ValueError("sextic twists need j = 0 (b != 0)")
    r, _ = power_free_part(u, 6)
    return RationalEC.from_short(0, b * r)


# CM ---------------------------------------------------------------------------

# the 13 rational CM j-invariants, keyed to the discriminant of the CM order
CM_J_INVARIANTS: dict[int, int] = {
    0: -3,
    54000: -12,
    -12288000: -27,
    1728: -4,
    287496: -16,
    -3375: -7,
    16581375: -28,
    8000: -8,
    -32768: -11,
    -884736: -19,
    -884736000: -43,
    -147197952000: -67,
    -262537412640768000: -163,
}


def is_cm(E: RationalEC) -> int | None:
    """Discriminant of the CM order when j(E) is a rational CM j-invariant."""
    j = E.j
    if j.denominator != 1:
        return None
    return CM_J_INVARIANTS.get(int(j))
