"""Genuine (not just semisimple) mod-7 congruences between curves with a rational 7-isogeny.

E[7] and E'[7] are compared through the isogeny characters on the kernel
lines and through the degree-7 field over which the other 7-isogenies of E
become rational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from sympy import Poly, QQ, ZZ, symbols
from sympy.polys.galoistools import (
    gf_add,
    gf_ddf_zassenhaus,
    gf_from_int_poly,
    gf_gcdex,
    gf_monic,
    gf_mul,
    gf_pow_mod,
    gf_rem,
    gf_sqf_p,
    gf_sub,
    gf_factor_sqf,
)
from sympy.polys.matrices import DomainMatrix

from .arith import legendre, primes_upto
from .curve import RationalEC, conductor, minimal_model, short_model
from .frobenius import ap
from .galois import fricke_polynomial, has_rational_7_isogeny, kernel_polynomials, _rational_roots

__all__ = [
    "SevenIsogenyField",
    "IsogenyCharacter",
    "Alignment",
    "FieldVerdict",
    "FieldComparison",
    "ReducibleResult",
    "fricke_polynomial",
    "velu_isogenous",
    "seven_isogenous",
    "second_isogeny_field",
    "factor_pattern",
    "isogeny_character",
    "character_table",
    "sample_primes",
    "irreducibility_certificate",
    "BorelReport",
    "align_characters",
    "fields_isomorphic",
    "reducible_congruent",
    "borel_conjugation_oracle",
]

T = symbols("t")
P7 = 7


# isogenous curves ---------------------------------------------------------------------------


def _short_integral(E: RationalEC) -> RationalEC:
    sm = short_model(E)
    return RationalEC.from_short(sm.a, sm.b)


def _power_sums(poly: Poly, k: int) -> list[Fraction]:
    """Power sums p_0..p_k of the roots of poly, by Newton's identities."""
    coeffs = [Fraction(int(c.p), int(c.q)) for c in poly.monic().all_coeffs()]
    d = len(coeffs) - 1
    e = [(-1) ** i * coeffs[i] for i in range(d + 1)] + [Fraction(0)] * k
    ps = [Fraction(d)]
    for m in range(1, k + 1):
        s = (-1) ** (m - 1) * m * e[m]
        for i in range(1, m):
            s += (-1) ** (i - 1) * e[i] * ps[m - i]
        ps.append(s)
    return ps


def velu_isogenous(S: RationalEC, kernel: Poly) -> RationalEC:
    """Codomain of the isogeny with the given kernel polynomial.

    S must be a short model y^2 = x^3 + A x + B.  Roots of the kernel
    polynomial that are 2-torsion x-coordinates count once, the others
    stand for a +-pair of points.
    """
    if S.a1 or S.a2 or S.a3:
        raise ValueError("short model required")
    A, B = S.a4, S.a6
    x = kernel.gens[0]
    kernel = Poly(kernel, x, domain=QQ)
    two = kernel.gcd(Poly(x**3 + A * x + B, x, domain=QQ))
    odd = kernel.quo(two) if two.degree() > 0 else kernel
    t = w = Fraction(0)
    if two.degree() > 0:
        q = _power_sums(two, 3)
        t += 3 * q[2] + A * q[0]
        w += 3 * q[3] + A * q[1]
    if odd.degree() > 0:
        q = _power_sums(odd, 3)
        t += 6 * q[2] + 2 * A * q[0]
        w += 10 * q[3] + 6 * A * q[1] + 4 * B * q[0]
    return minimal_model(RationalEC.from_ainvs([0, 0, 0, A - 5 * t, B - 7 * w]))


def _seven_kernel(E: RationalEC) -> tuple[RationalEC, Poly]:
    S = _short_integral(minimal_model(E))
    kers = kernel_polynomials(S, P7)
    if len(kers) != 1:
        raise ValueError(f"expected exactly one rational 7-isogeny, found {len(kers)}")
    return S, kers[0]


def seven_isogenous(E: RationalEC) -> RationalEC:
    """The curve 7-isogenous to E (minimal model)."""
    S, g = _seven_kernel(E)
    return velu_isogenous(S, g)


# factorisation patterns and the second-isogeny field ----------------------------------------


def _int_coeffs(f) -> list[int]:
    if isinstance(f, Poly):
        return [int(c) for c in f.all_coeffs()]
    return [int(c) for c in f]


def factor_pattern(f, q: int) -> tuple[int, ...] | None:
    """Degrees of the irreducible factors of f mod q, or None if q is unsuitable."""
    c = _int_coeffs(f)
    if c[0] % q == 0:
        return None
    g = gf_monic(gf_from_int_poly(c, q), q, ZZ)[1]
    if not gf_sqf_p(g, q, ZZ):
        return None
    degs = []
    for h, k in gf_ddf_zassenhaus(g, q, ZZ):
        degs += [k] * ((len(h) - 1) // k)
    return tuple(sorted(degs))


def _subset_sums(pattern) -> set[int]:
    sums = {0}
    for k in pattern:
        sums |= {s + k for s in sums}
    return sums


def irreducibility_certificate(f, primes=None) -> dict[int, tuple[int, ...]] | None:
    """Primes whose factorisation patterns leave no room for a proper factor over Q."""
    c = _int_coeffs(f)
    n = len(c) - 1
    possible = set(range(1, n))
    cert = {}
    for q in primes if primes is not None else primes_upto(3000).tolist():
        pat = factor_pattern(c, q)
        if pat is None:
            continue
        before = set(possible)
        possible &= _subset_sums(pat)
        if possible != before:
            cert[q] = pat
        if not possible:
            return cert
    return None


@dataclass(frozen=True)
class SevenIsogenyField:
    f: tuple[int, ...]
    certificate: tuple[tuple[int, tuple[int, ...]], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.f) != 8 or self.f[0] != 1:
            raise ValueError("expected a monic degree-7 polynomial")

    @property
    def poly(self) -> Poly:
        return Poly(list(self.f), T)


def second_isogeny_field(E: RationalEC) -> SevenIsogenyField:
    """The degree-7 factor of the Fricke polynomial at j(E), certified irreducible."""
    f = fricke_polynomial(E.j)
    roots = [r for r in _rational_roots(f) if r != 0]
    if len(roots) != 1:
        raise ValueError(f"Fricke polynomial has {len(roots)} rational roots; need exactly one")
    r = roots[0]
    q, rem = f.div(Poly([r.denominator, -r.numerator], T))
    if not rem.is_zero:
        raise ArithmeticError("linear factor did not divide")
    q = q.primitive()[1]
    c = [int(x) for x in q.all_coeffs()]
    lead = c[0]
    monic = [1] + [x * lead ** (i - 1) for i, x in enumerate(c) if i]
    cert = irreducibility_certificate(monic)
    if cert is None:
        raise ValueError("degree-7 factor is not irreducible")
    return SevenIsogenyField(tuple(monic), tuple(sorted(cert.items())))


# isogeny characters -----------------------------------------------------------------------


class _Field:
    """F_l[x]/(h) for an irreducible h, elements as galoistools coefficient lists."""

    def __init__(self, h, l):
        self.h, self.l = h, l

    def red(self, a):
        return gf_rem(a, self.h, self.l, ZZ)

    def mul(self, a, b):
        return gf_rem(gf_mul(a, b, self.l, ZZ), self.h, self.l, ZZ)

    def add(self, a, b):
        return gf_add(a, b, self.l, ZZ)

    def sub(self, a, b):
        return gf_sub(a, b, self.l, ZZ)

    def const(self, c):
        c %= self.l
        return [c] if c else []

    def inv(self, a):
        s, _, g = gf_gcdex(a, self.h, self.l, ZZ)
        if g != [1]:
            raise ZeroDivisionError("not invertible")
        return s

    def pow(self, a, n):
        return gf_pow_mod(a, n, self.h, self.l, ZZ)


def _point_ops(K: _Field, A: int, s):
    """Group law on points (X, Y) standing for (X, y0*Y), where y0^2 = s."""

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if K.add(y1, y2) == []:
                return None
            num = K.add(K.mul(K.const(3), K.mul(x1, x1)), K.const(A))
            lam = K.mul(num, K.inv(K.mul(K.const(2), K.mul(s, y1))))
        else:
            lam = K.mul(K.sub(y2, y1), K.inv(K.sub(x2, x1)))
        x3 = K.sub(K.sub(K.mul(s, K.mul(lam, lam)), x1), x2)
        y3 = K.sub(K.mul(lam, K.sub(x1, x3)), y1)
        return (x3, y3)

    return add


def isogeny_character(E: RationalEC, l: int, _cache={}) -> int:
    """chi_1(Frob_l) in F_7^*: the eigenvalue of Frobenius on the 7-isogeny kernel."""
    E = minimal_model(E)
    if l in (2, 3, 7) or (6 * E.disc) % l == 0:
        raise ValueError(f"l = {l} is not a good prime away from 2, 3, 7")
    key = E.ainvs
    if key not in _cache:
        _cache[key] = _seven_kernel(E)
    S, g = _cache[key]
    coeffs = []
    for c in g.monic().all_coeffs():
        c = Fraction(int(c.p), int(c.q))
        if c.denominator % l == 0:
            raise ValueError("kernel polynomial not integral at l")
        coeffs.append(c.numerator * pow(c.denominator, -1, l) % l)
    h = gf_factor_sqf(coeffs, l, ZZ)[1][0]
    K = _Field(h, l)
    A, B = S.a4 % l, S.a6 % l
    x0 = K.red([1, 0])
    s = K.add(K.mul(x0, K.add(K.mul(x0, x0), K.const(A))), K.const(B))
    add = _point_ops(K, A, s)
    P = (x0, [1])
    frob = (K.pow(x0, l), K.pow(s, (l - 1) // 2))
    Q = P
    for m in range(1, P7):
        if Q == frob:
            return m
        Q = add(Q, P)
    raise ArithmeticError("Frobenius does not preserve the kernel line")


@dataclass(frozen=True)
class IsogenyCharacter:
    values: dict
    order: int

    def chi2(self, l: int) -> int:
        return l * pow(self.values[l], -1, P7) % P7


def sample_primes(curves, count: int = 60) -> list[int]:
    bad = 42
    for E in curves:
        bad *= minimal_model(E).disc
    out = []
    for l in primes_upto(100 * count + 1000).tolist():
        if bad % l:
            out.append(l)
            if len(out) == count:
                break
    return out


def character_table(E: RationalEC, primes) -> IsogenyCharacter:
    """chi_1 on the given primes, with chi_1 chi_2 = l and chi_1 + chi_2 = a_l asserted mod 7."""
    E = minimal_model(E)
    vals = {}
    for l in primes:
        m = isogeny_character(E, l)
        m2 = l * pow(m, -1, P7) % P7
        if (m + m2 - ap(E, l)) % P7:
            raise ArithmeticError(f"chi_1 + chi_2 != a_l mod 7 at l = {l}")
        vals[l] = m
    # order of chi_1: the least k with chi^k trivial on every sample
    order = next(k for k in (1, 2, 3, 6) if all(pow(v, k, P7) == 1 for v in vals.values()))
    return IsogenyCharacter(vals, order)


class Alignment(enum.Enum):
    KEEP = "keep"
    SWAP = "swap"


def align_characters(E: RationalEC, E2: RationalEC, count: int = 60) -> Alignment:
    primes = sample_primes([E, E2], count)
    c1, c2 = character_table(E, primes), character_table(E2, primes)
    if all(c1.values[l] == c2.values[l] for l in primes):
        return Alignment.KEEP
    if all(c1.values[l] == c2.chi2(l) for l in primes):
        return Alignment.SWAP
    raise ValueError("isogeny characters match neither directly nor after swapping")


# field isomorphism ----------------------------------------------------------------------------


class FieldVerdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class FieldComparison:
    verdict: FieldVerdict
    witness: int | None = None
    root: tuple[Fraction, ...] | None = None  # root of f2 in Q[t]/(f1), low degree first
    note: str = ""


def _hensel_roots(c: list[int], q: int, k: int) -> list[int]:
    """Simple roots of c mod q lifted to q**k."""
    f = Poly(c, T)
    df = f.diff(T)
    roots = [r for r in range(q) if f.eval(r) % q == 0 and df.eval(r) % q]
    out = []
    for r in roots:
        mod = q
        while mod < q**k:
            mod = min(mod * mod, q**k)
            r = (r - int(f.eval(r)) * pow(int(df.eval(r)), -1, mod)) % mod
        out.append(r)
    return out


def _verify_root(f1: Poly, f2: Poly, g: Poly) -> bool:
    acc = Poly(0, T, domain=QQ)
    for c in f2.all_coeffs():
        acc = (acc * g + c).rem(f1)
    return acc.is_zero


def _reconstruct(alpha: int, beta: int, mod: int, n: int) -> list[int] | None:
    # lattice of (c_0..c_{n-1}, d) with sum c_i alpha^i = d beta mod q^k
    dim = n + 1
    rows = []
    row = [0] * dim
    row[0] = mod
    rows.append(row)
    for i in range(1, n):
        row = [0] * dim
        row[0] = -pow(alpha, i, mod)
        row[i] = 1
        rows.append(row)
    row = [0] * dim
    row[0] = beta % mod
    row[n] = 1
    rows.append(row)
    red = DomainMatrix([[ZZ(x) for x in r] for r in rows], (dim, dim), ZZ).lll().to_Matrix()
    best = min((list(red.row(i)) for i in range(dim)), key=lambda v: sum(int(x) ** 2 for x in v))
    if best[n] == 0:
        return None
    return [int(x) for x in best]


def fields_isomorphic(F1, F2, max_bits: int = 4096, pattern_primes: int = 2000) -> FieldComparison:
    """Decide Q[t]/(f1) = Q[t]/(f2) for irreducible degree-7 polynomials.

    A prime where the factorisation patterns differ proves non-isomorphism.
    Otherwise a root of f2 in Q[t]/(f1) is sought by q-adic lifting and
    lattice reduction and then checked exactly.
    """
    c1 = list(F1.f) if isinstance(F1, SevenIsogenyField) else _int_coeffs(F1)
    c2 = list(F2.f) if isinstance(F2, SevenIsogenyField) else _int_coeffs(F2)
    for c in (c1, c2):
        if irreducibility_certificate(c) is None:
            raise ValueError("input polynomial not certified irreducible")
    f1, f2 = Poly(c1, T, domain=QQ), Poly(c2, T, domain=QQ)
    n = len(c1) - 1
    if len(c2) - 1 != n:
        return FieldComparison(FieldVerdict.NO, note="degrees differ")
    if c1 == c2:
        return FieldComparison(FieldVerdict.YES, root=tuple(Fraction(int(i == 1)) for i in range(n)), note="identical")
    usable = []
    for q in primes_upto(pattern_primes).tolist():
        p1, p2 = factor_pattern(c1, q), factor_pattern(c2, q)
        if p1 is None or p2 is None:
            continue
        if p1 != p2:
            return FieldComparison(FieldVerdict.NO, witness=q)
        if 1 in p1:
            usable.append(q)
    if not usable:
        return FieldComparison(FieldVerdict.UNDETERMINED, note="no prime with a linear factor")
    q = usable[0]
    k = 8
    while k * q.bit_length() <= max_bits:
        mod = q**k
        alphas = _hensel_roots(c1, q, k)
        betas = _hensel_roots(c2, q, k)
        for beta in betas:
            v = _reconstruct(alphas[0], beta, mod, n)
            if v is None:
                continue
            # lattice vectors satisfy c_0 + sum c_i alpha^i = d beta mod q^k
            g = Poly([Fraction(v[i], v[n]) for i in reversed(range(n))], T, domain=QQ)
            if _verify_root(f1, f2, g):
                coeffs = [Fraction(int(x.p), int(x.q)) for x in reversed(g.all_coeffs())]
                coeffs += [Fraction(0)] * (n - len(coeffs))
                return FieldComparison(FieldVerdict.YES, root=tuple(coeffs), witness=q)
        k *= 2
    return FieldComparison(FieldVerdict.UNDETERMINED, note=f"height bound of {max_bits} bits exhausted")


@dataclass(frozen=True)
class ReducibleResult:
    congruent: bool | None
    representative: RationalEC
    alignment: Alignment
    comparison: FieldComparison


def reducible_congruent(E: RationalEC, E2: RationalEC) -> ReducibleResult:
    """Whether E[7] and E2[7] are isomorphic, replacing E2 by its 7-isogenous curve if needed."""
    E, E2 = minimal_model(E), minimal_model(E2)
    for C in (E, E2):
        if not has_rational_7_isogeny(C)[0]:
            raise ValueError("both curves need a rational 7-isogeny")
    al = align_characters(E, E2)
    rep = seven_isogenous(E2) if al is Alignment.SWAP else E2
    cmp = fields_isomorphic(second_isogeny_field(E), second_isogeny_field(rep))
    verdict = {FieldVerdict.YES: True, FieldVerdict.NO: False}.get(cmp.verdict)
    return ReducibleResult(verdict, rep, al, cmp)


# brute-force check that pi-preserving automorphisms of D.U are Borel conjugations ------------


def _mat_mul(a, b, p):
    return (
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    )


def _mat_inv(a, p):
    det = (a[0] * a[3] - a[1] * a[2]) % p
    di = pow(det, -1, p)
    return (a[3] * di % p, -a[1] * di % p, -a[2] * di % p, a[0] * di % p)


def _closure(gens, p):
    ident = (1, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mat_mul(x, g, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _extend_hom(gens, images, p):
    """The homomorphism on <gens> sending gens to images, or None if ill-defined."""
    ident = (1, 0, 0, 1)
    phi = {ident: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = _mat_mul(x, g, p)
                z = _mat_mul(phi[x], h, p)
                if y in phi:
                    if phi[y] != z:
                        return None
                else:
                    phi[y] = z
                    nxt.append(y)
        frontier = nxt
    return phi


@dataclass
class BorelReport:
    p: int
    subgroups: int = 0
    automorphisms: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def borel_conjugation_oracle(p: int) -> BorelReport:
    """Check exhaustively that every automorphism of H = D.U preserving diagonal parts is a conjugation in B."""
    if p > 13:
        raise ValueError("enumeration only supported for p <= 13")
    units = range(1, p)
    diag = [(a, 0, 0, d) for a in units for d in units]
    u = (1, 1, 0, 1)
    borel = [(a, b, 0, d) for a in units for b in range(p) for d in units]
    subgroups = {_closure([g1, g2], p) for g1 in diag for g2 in diag}
    report = BorelReport(p)
    for D in sorted(subgroups, key=lambda s: (len(s), sorted(s))):
        gens = [u] + _generators(D, p)
        H = _closure(gens, p)
        report.subgroups += 1
        for r in units:
            for shifts in product(range(p), repeat=len(gens) - 1):
                images = [(1, r, 0, 1)] + [_mat_mul(g, (1, b, 0, 1), p) for g, b in zip(gens[1:], shifts)]
                phi = _extend_hom(gens, images, p)
                if phi is None or len(set(phi.values())) != len(H):
                    continue
                report.automorphisms += 1
                if not any(all(_mat_mul(_mat_mul(A, g, p), _mat_inv(A, p), p) == h for g, h in zip(gens, images)) for A in borel):
                    report.failures.append((sorted(D), images))
    return report


def _generators(D, p) -> list:
    """At most two generators of an abelian group of diagonal matrices."""
    elems = sorted(D)
    for g in elems:
        if _closure([g], p) == D:
            return [g]
    for g1 in elems:
        for g2 in elems:
            if _closure([g1, g2], p) == D:
                return [g1, g2]
    raise AssertionError("diagonal subgroup needs more than two generators")
