"""Congruences between a curve and its twists, with their symplectic type.

Types are recorded as signs: symplectic = +1, antisymplectic = -1, so a
chain of congruences has the product type.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arith import is_rational_square, legendre, power_free_part, squarefree_part
from .curve import RationalEC, is_cm, minimal_model, quadratic_twist, quartic_twist, sextic_twist, short_model
from .galois import CartanClass, CartanKind, DihedralWitness

__all__ = [
    "TypeValue",
    "Basis",
    "SymplecticType",
    "TwistCongruence",
    "pstar",
    "isogeny_criterion",
    "quadratic_twist_type",
    "find_quadratic_twist_congruence",
    "cm_twist_congruence",
    "twist_order",
    "higher_twist_type",
    "higher_twist_partner",
    "HIGHER_TWIST_CASES",
]


class TypeValue(enum.Enum):
    SYMPLECTIC = "symplectic"
    ANTISYMPLECTIC = "antisymplectic"
    BOTH = "both"
    UNDETERMINED = "undetermined"


class Basis(enum.Enum):
    ISOGENY_CRITERION = "isogeny"
    QUADRATIC_TWIST = "quadratic-twist"
    HIGHER_TWIST = "higher-twist"
    CM_TWIST = "cm-twist"
    EXTERNAL_ORACLE = "oracle"
    COMPOSITION = "composition"


@dataclass(frozen=True)
class SymplecticType:
    value: TypeValue
    basis: Basis
    note: str = ""

    @classmethod
    def from_sign(cls, sign: int, basis: Basis, note: str = "") -> "SymplecticType":
        return cls(TypeValue.SYMPLECTIC if sign == 1 else TypeValue.ANTISYMPLECTIC, basis, note)

    @property
    def sign(self) -> int | None:
        return {TypeValue.SYMPLECTIC: 1, TypeValue.ANTISYMPLECTIC: -1}.get(self.value)

    @property
    def decided(self) -> bool:
        return self.sign is not None

    def __mul__(self, other: "SymplecticType") -> "SymplecticType":
        if not (self.decided and other.decided):
            return SymplecticType(TypeValue.UNDETERMINED, Basis.COMPOSITION)
        return SymplecticType.from_sign(self.sign * other.sign, Basis.COMPOSITION)


UNDETERMINED = TypeValue.UNDETERMINED


@dataclass(frozen=True)
class TwistCongruence:
    partner: RationalEC
    n: int
    u_or_d: Fraction
    p: int
    type: SymplecticType


def pstar(p: int) -> int:
    return p if p % 4 == 1 else -p


def isogeny_criterion(n: int, p: int) -> SymplecticType:
    """Type of the congruence induced by a degree-n isogeny: the residue symbol (n/p)."""
    if n % p == 0:
        raise ValueError(f"isogeny degree {n} divisible by p = {p}")
    if p == 2:
        return SymplecticType(TypeValue.SYMPLECTIC, Basis.ISOGENY_CRITERION)
    return SymplecticType.from_sign(legendre(n, p), Basis.ISOGENY_CRITERION)


def quadratic_twist_type(cartan, p: int) -> SymplecticType:
    """Symplectic iff (split and p = 1 mod 4) or (non-split and p = 3 mod 4)."""
    kind = cartan.kind if isinstance(cartan, CartanClass) else CartanKind(cartan)
    if p % 2 == 0:
        raise ValueError("p must be odd")
    if kind is CartanKind.UNDETERMINED:
        return SymplecticType(UNDETERMINED, Basis.QUADRATIC_TWIST, "cartan undetermined")
    split = kind is CartanKind.SPLIT
    sign = 1 if split == (p % 4 == 1) else -1
    return SymplecticType.from_sign(sign, Basis.QUADRATIC_TWIST)


def find_quadratic_twist_congruence(E: RationalEC, p: int, witness: DihedralWitness | None) -> list[TwistCongruence]:
    """Twist partners predicted by a dihedral witness, with their types.

    For a C2 x C2 projective image all three twists occur; over Q the one
    by p* is symplectic and the other two antisymplectic.  For j = 1728 the
    twist by -1 is trivial and the partner is the quartic twist by -4,
    which is 2-isogenous to E.
    """
    if witness is None:
        return []
    E = minimal_model(E)
    if witness.projective_order_4:
        out = []
        for d in (witness.d, *witness.others):
            sign = 1 if squarefree_part(d) == squarefree_part(pstar(p)) else -1
            typ = SymplecticType.from_sign(sign, Basis.QUADRATIC_TWIST, "C2xC2")
            out.append(TwistCongruence(quadratic_twist(E, d), 2, Fraction(d), p, typ))
        return out
    d = squarefree_part(witness.d)
    if E.j == 1728 and d == -1:
        a = short_model(E).a
        partner = minimal_model(quartic_twist(a, -4))
        return [TwistCongruence(partner, 4, Fraction(-4), p, isogeny_criterion(2, p))]
    typ = quadratic_twist_type(witness.cartan, p)
    return [TwistCongruence(quadratic_twist(E, d), 2, Fraction(d), p, typ)]


def cm_twist_congruence(E: RationalEC, D: int, p: int) -> TwistCongruence:
    """The CM twist congruence, typed through the isogeny of degree D (or 2 when D = 4)."""
    D = abs(D)
    if is_cm(E) != -D:
        raise ValueError(f"curve does not have CM by discriminant -{D}")
    if p < 5:
        raise ValueError("p must be at least 5")
    if D % p == 0:
        raise ValueError(f"p = {p} ramifies in Q(sqrt(-{D}))")
    if D == 3 and p % 9 not in (1, 8):
        raise ValueError("for D = 3 the congruence needs p = +-1 mod 9")
    E = minimal_model(E)
    if D == 4:
        partner = minimal_model(quartic_twist(short_model(E).a, -4))
        typ = SymplecticType.from_sign(legendre(2, p), Basis.CM_TWIST)
        return TwistCongruence(partner, 4, Fraction(-4), p, typ)
    typ = SymplecticType.from_sign(legendre(D, p), Basis.CM_TWIST)
    return TwistCongruence(quadratic_twist(E, -D), 2, Fraction(-D), p, typ)


def twist_order(j, u) -> int:
    """Order of the twist by u in Q*/Q*^6 (j = 0) or Q*/Q*^4 (j = 1728)."""
    u = Fraction(u)
    if j == 0:
        r, _ = power_free_part(u, 6)
        if r == 1:
            return 1
        sq = power_free_part(r, 2)[0] == 1
        cube = power_free_part(r, 3)[0] == 1
        return 3 if sq else 2 if cube else 6
    if j == 1728:
        r, _ = power_free_part(u, 4)
        if r == 1:
            return 1
        return 2 if power_free_part(r, 2)[0] == 1 else 4
    return 2


def higher_twist_type(n: int, u, p: int) -> SymplecticType:
    """Type of a congruence between E and its twist of order n by u (over Q)."""
    u = Fraction(u)
    if n not in (3, 4, 6):
        raise ValueError("n must be 3, 4 or 6")
    if n == 3:
        if power_free_part(u, 3)[0] == 1:
            raise ValueError("u is a cube: trivial cubic twist")
        return SymplecticType(TypeValue.ANTISYMPLECTIC, Basis.HIGHER_TWIST)
    cls = squarefree_part(u)
    excluded = {1, -1} if n == 4 else {1, -3}
    if cls in excluded:
        raise ValueError(f"u = {u} lies in an excluded square class for n = {n}")
    note = ""
    if n == 4 and p % 8 not in (3, 5):
        note = "side condition p = +-3 mod 8 violated"
    if n == 6 and p % 12 not in (5, 7):
        note = "side condition p = +-5 mod 12 violated"
    sign = 1 if is_rational_square(u * pstar(p)) else -1
    return SymplecticType.from_sign(sign, Basis.HIGHER_TWIST, note)


# (j, p) -> list of (u as a function of the coefficient, stated sign, isogeny degree or None)
HIGHER_TWIST_CASES = {
    (1728, 3): [(lambda a: Fraction(-1, 3) / (a * a), 1, None), (lambda a: Fraction(-4), -1, 2), (lambda a: Fraction(4, 3) / (a * a), -1, None)],
    (1728, 5): [(lambda a: Fraction(5) / (a * a), 1, None), (lambda a: Fraction(-4), -1, 2), (lambda a: Fraction(-20) / (a * a), -1, None)],
    (0, 5): [(lambda b: Fraction(4, 5) / (b * b), 1, None), (lambda b: Fraction(-27), -1, 3), (lambda b: Fraction(-108, 5) / (b * b), -1, None)],
    (0, 7): [(lambda b: Fraction(-28) / (b * b), 1, None), (lambda b: Fraction(-27), -1, 3), (lambda b: Fraction(756) / (b * b), -1, None)],
}


def higher_twist_partner(E: RationalEC, p: int) -> list[TwistCongruence]:
    """The explicit twist partners of a j = 0 or j = 1728 curve at p in {3, 5, 7}.

    Partner E_{c u} for the coefficient c of E's short model.  The stated
    sign is cross-checked against the isogeny criterion (u = -4, -27) or
    against higher_twist_type (genuine quartic/sextic twists).
    """
    j = E.j
    if j not in (0, 1728) or (int(j), p) not in HIGHER_TWIST_CASES:
        return []
    sm = short_model(E)
    c = sm.b if j == 0 else sm.a
    out = []
    for ufun, sign, degree in HIGHER_TWIST_CASES[(int(j), p)]:
        u = ufun(c)
        if degree is not None:
            typ = isogeny_criterion(degree, p)
        else:
            n = twist_order(j, u)
            if n in (3, 4, 6):
                typ = higher_twist_type(n, u, p)
            else:
                typ = SymplecticType.from_sign(sign, Basis.HIGHER_TWIST, f"order {n} twist")
        if typ.sign != sign:
            raise AssertionError(f"type mismatch for u = {u} at p = {p}")
        partner = sextic_twist(c, u) if j == 0 else quartic_twist(c, u)
        out.append(TwistCongruence(minimal_model(partner), twist_order(j, u), u, p, typ))
    return out
