"""Reducibility of E[p] and the dihedral/Cartan structure of its projective image."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from sympy import Poly, symbols

from .arith import kronecker, legendre, prime_factors, squarefree_part
from .curve import RationalEC, conductor, minimal_model
from .frobenius import TraceVector, trace_vector

__all__ = [
    "Reducibility",
    "ReducibilityVerdict",
    "CartanKind",
    "CartanClass",
    "DihedralWitness",
    "division_polynomial",
    "kernel_polynomials",
    "fricke_polynomial",
    "has_rational_7_isogeny",
    "reducibility",
    "trace_zero_quadratic",
    "cartan_type",
    "condition_S",
    "good_prime_traces",
]

X = symbols("x")
T = symbols("t")

MIN_TRACES = 100
MIN_SIDE = 30


# division polynomials -------------------------------------------------------------------


def _two_torsion_poly(E: RationalEC) -> Poly:
    # 4x^3 + b2 x^2 + 2 b4 x + b6, the square of psi_2
    return Poly([4, E.b2, 2 * E.b4, E.b6], X)


@lru_cache(maxsize=256)
def _division_polys(ainvs: tuple, n: int) -> tuple[Poly, ...]:
    """f_0..f_n with f_k = psi_k for odd k and psi_k/psi_2 for even k."""
    E = RationalEC(*ainvs)
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    F = _two_torsion_poly(E)
    F2 = F * F
    f = [
        Poly(0, X),
        Poly(1, X),
        Poly(1, X),
        Poly([3, b2, 3 * b4, 3 * b6, b8], X),
        Poly([2, b2, 5 * b4, 10 * b6, 10 * b8, b2 * b8 - b4 * b6, b4 * b8 - b6 * b6], X),
    ]
    for k in range(5, n + 1):
        m = k // 2
        if k % 2:
            if m % 2 == 0:
                f.append(F2 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3)
            else:
                f.append(f[m + 2] * f[m] ** 3 - F2 * f[m - 1] * f[m + 1] ** 3)
        else:
            f.append(f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2))
    return tuple(f)


def division_polynomial(E: RationalEC, n: int) -> Poly:
    """The n-division polynomial in x alone (psi_2 replaced by 4x^3+b2x^2+2b4x+b6)."""
    if n == 2:
        return _two_torsion_poly(E)
    return _division_polys(E.ainvs, max(n, 4))[n]


def _doubling(E: RationalEC) -> tuple[Poly, Poly]:
    num = Poly([1, 0, -E.b4, -2 * E.b6, -E.b8], X)
    return num, _two_torsion_poly(E)


def _compose_rational(g: Poly, num: Poly, den: Poly) -> Poly:
    """den**deg(g) * g(num/den)."""
    d = g.degree()
    out = Poly(0, X)
    for i, c in enumerate(reversed(g.all_coeffs())):
        out += c * num**i * den ** (d - i)
    return out


def _is_kernel(E: RationalEC, g: Poly, p: int) -> bool:
    # the x-coordinates of a cyclic subgroup of order p are stable under doubling
    if p == 3:
        return g.degree() == 1
    num, den = _doubling(E)
    return _compose_rational(g, num, den).rem(g).is_zero


def kernel_polynomials(E: RationalEC, p: int) -> list[Poly]:
    """Monic rational kernel polynomials of the cyclic p-isogenies of E (p prime).

    Degree (p-1)/2 factors of the division polynomial (products of rational
    factors where needed) closed under doubling; for p = 2 the linear factors
    of the 2-torsion cubic.
    """
    if p == 2:
        facs = _two_torsion_poly(E).factor_list()[1]
        return [g.monic() for g, _ in facs if g.degree() == 1]
    target = (p - 1) // 2
    facs = [g for g, _ in division_polynomial(E, p).factor_list()[1] if g.degree() <= target]
    out = []
    for r in range(1, len(facs) + 1):
        for combo in combinations(facs, r):
            if sum(g.degree() for g in combo) != target:
                continue
            g = Poly(1, X)
            for h in combo:
                g *= h
            g = g.monic()
            if _is_kernel(E, g, p) and g not in out:
                out.append(g)
    return out


# the Fricke parametrisation of X_0(7) ----------------------------------------------------


def fricke_polynomial(j) -> Poly:
    """Primitive integer polynomial (t^2+13t+49)(t^2+5t+1)^3 - t*j with denominators cleared."""
    j = Fraction(j)
    base = Poly([1, 13, 49], T) * Poly([1, 5, 1], T) ** 3
    f = base * j.denominator - Poly([j.numerator, 0], T)
    return f.primitive()[1]


def _rational_roots(f: Poly) -> list[Fraction]:
    roots = []
    for g, _ in f.factor_list()[1]:
        if g.degree() == 1:
            a, b = g.all_coeffs()
            roots.append(Fraction(-int(b), int(a)))
    return sorted(roots)


def has_rational_7_isogeny(E: RationalEC) -> tuple[bool, Fraction | None]:
    """Whether the Fricke polynomial at j(E) has a rational root, and one such root."""
    roots = _rational_roots(fricke_polynomial(E.j))
    roots = [t for t in roots if t != 0]
    return (bool(roots), roots[0] if roots else None)


# reducibility -----------------------------------------------------------------------------


class Reducibility(enum.Enum):
    REDUCIBLE = "reducible"
    IRREDUCIBLE = "irreducible"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class ReducibilityVerdict:
    kind: Reducibility
    method: str
    reducible_compatible: bool | None = None
    witness: int | None = None
    provenance: str = "computed"

    @property
    def reducible(self) -> bool:
        if self.kind is Reducibility.HEURISTIC:
            return bool(self.reducible_compatible)
        return self.kind is Reducibility.REDUCIBLE


def good_prime_traces(E: RationalEC, p: int, traces: TraceVector) -> dict[int, int]:
    return {l: a for l, a in traces.good().items() if l != p and l != 2}


def _irreducible_witness(good: dict[int, int], p: int) -> int | None:
    """A prime l whose Frobenius char-poly x^2 - a x + l has no root mod p."""
    for l, a in good.items():
        if p == 2:
            if a % 2 == 1:
                return l
        elif legendre(a * a - 4 * l, p) == -1:
            return l
    return None


def _roots_charpoly(a: int, l: int, p: int) -> frozenset[int]:
    return frozenset(x for x in range(1, p) if (x * x - a * x + l) % p == 0)


def reducibility(E: RationalEC, p: int, traces: TraceVector | None = None, flags: dict | None = None) -> ReducibilityVerdict:
    """Decide whether E[p] is reducible.

    Exact for p in {2, 3, 5} (kernel polynomials) and p = 7 (Fricke).  For
    other p a Frobenius scan either proves irreducibility or reports a
    heuristic verdict.  ``flags`` may carry an ingested ``{"reducible": bool}``
    which overrides the computation.
    """
    if flags and "reducible" in flags:
        kind = Reducibility.REDUCIBLE if flags["reducible"] else Reducibility.IRREDUCIBLE
        return ReducibilityVerdict(kind, "ingested", provenance=str(flags.get("source", "ingested")))
    E = minimal_model(E)
    if traces is not None and len(traces.good()) < MIN_TRACES:
        raise ValueError(f"need at least {MIN_TRACES} good-prime traces, got {len(traces.good())}")
    if p in (2, 3, 5):
        red = bool(kernel_polynomials(E, p))
        return ReducibilityVerdict(Reducibility.REDUCIBLE if red else Reducibility.IRREDUCIBLE, "division-polynomial")
    if p == 7:
        red = has_rational_7_isogeny(E)[0]
        return ReducibilityVerdict(Reducibility.REDUCIBLE if red else Reducibility.IRREDUCIBLE, "fricke")
    if traces is None:
        raise ValueError("a trace vector is required for p > 7")
    good = good_prime_traces(E, p, traces)
    w = _irreducible_witness(good, p)
    if w is not None:
        return ReducibilityVerdict(Reducibility.IRREDUCIBLE, "frobenius-scan", False, w)
    # a reducible E[p] has chi_1 factoring through (Z/pN)^*, so primes in one
    # residue class share their root sets
    M = p * conductor(E)
    seen: dict[int, frozenset] = {}
    consistent = True
    for l, a in good.items():
        roots = _roots_charpoly(a, l, p)
        if not roots or seen.setdefault(l % M, roots) != roots:
            consistent = False
            break
    return ReducibilityVerdict(Reducibility.HEURISTIC, "frobenius-scan", consistent)


# dihedral witnesses and Cartan type --------------------------------------------------------


class CartanKind(enum.Enum):
    SPLIT = "split"
    NONSPLIT = "nonsplit"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class CartanClass:
    kind: CartanKind
    evidence_count: int
    minimum: int = MIN_SIDE

    def __post_init__(self):
        if self.kind is not CartanKind.UNDETERMINED and self.evidence_count < self.minimum:
            raise ValueError("decided Cartan class with too little evidence")


@dataclass(frozen=True)
class DihedralWitness:
    d: int
    cartan: CartanClass
    projective_order_4: bool = False
    others: tuple[int, ...] = field(default=())
    samples: tuple[int, int] = (0, 0)
    heuristic: bool = True


def _candidates(E: RationalEC, p: int) -> list[int]:
    support = sorted(set(prime_factors(p * conductor(E))) | {-1})
    out = set()
    for r in range(1, len(support) + 1):
        for combo in combinations(support, r):
            d = 1
            for q in combo:
                d *= q
            out.add(d)
    return sorted(out, key=lambda d: (abs(d), d))


def _split_by_character(d: int, good: dict[int, int]) -> tuple[list[int], list[int]]:
    plus, minus = [], []
    for l in good:
        k = kronecker(d, l)
        if k == 1:
            plus.append(l)
        elif k == -1:
            minus.append(l)
    return plus, minus


def _window(E: RationalEC, p: int, traces: TraceVector | None, count: int) -> dict[int, int]:
    if traces is None:
        from .arith import primes_upto

        E = minimal_model(E)
        bad = p * E.disc * 2
        ps = [l for l in primes_upto(20 * count + 100).tolist() if bad % l][:count]
        traces = trace_vector(E, ps)
    return good_prime_traces(E, p, traces)


def cartan_type(E: RationalEC, p: int, d: int, traces: TraceVector | None = None, minimum: int = MIN_SIDE) -> CartanClass:
    """Split or non-split, from the discriminants a_l^2 - 4l at primes split in Q(sqrt d)."""
    good = _window(E, p, traces, 500)
    plus, _ = _split_by_character(d, good)
    split = nonsplit = 0
    for l in plus:
        a = good[l]
        if a % p == 0:
            continue
        s = legendre(a * a - 4 * l, p)
        if s == 1:
            split += 1
        elif s == -1:
            nonsplit += 1
    if split and nonsplit:
        return CartanClass(CartanKind.UNDETERMINED, split + nonsplit, minimum)
    n = split + nonsplit
    if n < minimum:
        return CartanClass(CartanKind.UNDETERMINED, n, minimum)
    return CartanClass(CartanKind.SPLIT if split else CartanKind.NONSPLIT, n, minimum)


def trace_zero_quadratic(E: RationalEC, p: int, traces: TraceVector | None = None, count: int = 500) -> DihedralWitness | None:
    """Search for Q(sqrt d) such that a_l = 0 mod p whenever l is inert in it.

    Candidates d are the squarefree products of -1 and the primes dividing
    p*N.  With three survivors the projective image is C2 x C2 and the
    survivor equal to p* (up to squares) is reported first.  Heuristic: the
    verdict rests on the sampled window.
    """
    E = minimal_model(E)
    good = _window(E, p, traces, count)
    if len(good) < 200:
        raise ValueError("need at least 200 good-prime traces")
    survivors = []
    for d in _candidates(E, p):
        plus, minus = _split_by_character(d, good)
        if len(plus) < MIN_SIDE or len(minus) < MIN_SIDE:
            continue
        if all(good[l] % p == 0 for l in minus):
            survivors.append((d, len(plus), len(minus)))
    if not survivors:
        return None
    pstar = p if p % 4 == 1 else -p
    order4 = len(survivors) >= 3
    if order4:
        survivors.sort(key=lambda s: squarefree_part(s[0]) != squarefree_part(pstar))
    d, n_plus, n_minus = survivors[0]
    cartan = cartan_type(E, p, d, TraceVector(tuple(good), tuple(good.values())))
    if cartan.kind is CartanKind.UNDETERMINED and not order4:
        return None
    return DihedralWitness(d, cartan, order4, tuple(s[0] for s in survivors[1:]), (n_plus, n_minus))


def condition_S(E: RationalEC, p: int, flags: dict | None = None) -> bool:
    """No antisymplectic automorphism of E[p].

    True for p >= 7 over Q.  For p in {3, 5} it fails exactly when the image
    lies in a Cartan subgroup; over Q only the split Cartan can occur (complex
    conjugation has determinant -1), i.e. E has two independent rational
    p-isogenies.
    """
    if flags and "condition_S" in flags:
        return bool(flags["condition_S"])
    if p >= 7:
        return True
    if p not in (3, 5):
        raise ValueError("condition (S) is only evaluated for odd p")
    return len(kernel_polynomials(minimal_model(E), p)) < 2
