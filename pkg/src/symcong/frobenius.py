"""Traces of Frobenius a_l by point counting over F_l.

Three routes, all returning the same integers:

* exhaustive x-enumeration with a quadratic-character table (small l);
* baby-step/giant-step search of the group order in the Hasse interval,
  with the quadratic-twist trick and exhaustive counting as fallbacks;
* for j = 0 and j = 1728, a vectorised lattice route over all primes up to
  a bound, using the sextic/quartic residue symbol of the CM prime above l.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np
from sympy.ntheory import sqrt_mod

from .arith import primes_upto
from .curve import RationalEC, minimal_model, short_model, tate_local

__all__ = [
    "NAIVE_LIMIT",
    "TraceVector",
    "ap",
    "ap_naive",
    "ap_bsgs",
    "trace_vector",
    "traces_upto",
    "trace_table",
    "batch_trace_vectors",
]

NAIVE_LIMIT = 2000
# above this the CM route's full prime table gets too large; count prime by prime
CM_TABLE_LIMIT = 5 * 10**7


# exhaustive count ---------------------------------------------------------------


@lru_cache(maxsize=256)
def _square_table(l: int) -> np.ndarray:
    x = np.arange(l, dtype=np.int64)
    table = np.zeros(l, dtype=bool)
    table[(x * x) % l] = True
    table[0] = False
    return table


def ap_naive(E: RationalEC, l: int) -> int:
    """l + 1 - #E(F_l) by enumerating x; valid for any integral model.

    At primes of bad reduction this still returns the right local trace
    (+1, -1 or 0) provided the model is minimal at l.
    """
    if l == 2:
        count = 1
        a1, a2, a3, a4, a6 = (c % 2 for c in E.ainvs)
        for x in (0, 1):
            for y in (0, 1):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    count += 1
        return 3 - count
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    c3, c2, c1, c0 = 4 % l, E.b2 % l, (2 * E.b4) % l, E.b6 % l
    x = np.arange(l, dtype=np.int64)
    f = (((c3 * x + c2) % l * x + c1) % l * x + c0) % l
    sq = _square_table(l)
    count = 1 + int(np.count_nonzero(f == 0)) + 2 * int(np.count_nonzero(sq[f]))
    return l + 1 - count


# baby-step giant-step ----------------------------------------------------------------

_O = None  # point at infinity


def _add(P, Q, a, l):
    if P is _O:
        return Q
    if Q is _O:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % l == 0:
            return _O
        m = (3 * x1 * x1 + a) * pow(2 * y1, -1, l) % l
    else:
        m = (y2 - y1) * pow(x2 - x1, -1, l) % l
    x3 = (m * m - x1 - x2) % l
    return (x3, (m * (x1 - x3) - y1) % l)


def _neg(P, l):
    return _O if P is _O else (P[0], (-P[1]) % l)


def _mul(n, P, a, l):
    if n < 0:
        return _mul(-n, _neg(P, l), a, l)
    R = _O
    while n:
        if n & 1:
            R = _add(R, P, a, l)
        P = _add(P, P, a, l)
        n >>= 1
    return R


def _random_point(a, b, l, rng):
    while True:
        x = rng.randrange(l)
        rhs = (x * x * x + a * x + b) % l
        if rhs == 0:
            return (x, 0)
        if pow(rhs, (l - 1) // 2, l) == 1:
            return (x, int(sqrt_mod(rhs, l)))


def _hasse_candidates(a, b, l, P) -> set[int]:
    """All t with |t| <= 2 sqrt(l) and [l + 1 - t] P = O."""
    w = isqrt(4 * l)
    g = isqrt(2 * w + 1) + 1
    baby = {}
    R = _O
    for j in range(g):
        baby.setdefault(R, []).append(j)
        R = _add(R, P, a, l)
    # looking for t = -w + i g + j with [t] P = [l + 1] P
    target = _mul(l + 1, P, a, l)
    step = _neg(_mul(g, P, a, l), l)
    T = _add(target, _mul(w, P, a, l), a, l)
    found = set()
    for i in range((2 * w) // g + 2):
        for j in baby.get(T, ()):
            t = -w + i * g + j
            if -w <= t <= w:
                found.add(t)
        T = _add(T, step, a, l)
    return found


def _twist_params(a, b, l, rng):
    # any non-residue c gives the quadratic twist y^2 = x^3 + c^2 a x + c^3 b
    while True:
        c = rng.randrange(2, l)
        if pow(c, (l - 1) // 2, l) == l - 1:
            return (c * c * a) % l, (c * c * c * b) % l


def ap_bsgs(E: RationalEC, l: int, points: int = 4, seed: int = 0) -> int:
    """Trace at a good prime l > 3 via group-order search in the Hasse interval."""
    sm = short_model(E)
    a = int(sm.a.numerator * pow(sm.a.denominator, -1, l)) % l
    b = int(sm.b.numerator * pow(sm.b.denominator, -1, l)) % l
    rng = random.Random(l * 1000003 + seed)
    cands = None
    for _ in range(points):
        c = _hasse_candidates(a, b, l, _random_point(a, b, l, rng))
        cands = c if cands is None else cands & c
        if len(cands) == 1:
            return cands.pop()
    # small exponent: intersect with the twist's constraint t' = -t
    ta, tb = _twist_params(a, b, l, rng)
    twist = None
    for _ in range(points):
        c = _hasse_candidates(ta, tb, l, _random_point(ta, tb, l, rng))
        twist = c if twist is None else twist & c
    both = cands & {-t for t in twist}
    if len(both) == 1:
        return both.pop()
    return ap_naive(E, l)


# dispatch -----------------------------------------------------------------------------


def ap(E: RationalEC, l: int) -> int:
    """Trace of Frobenius at l; local trace (+1/-1/0) at bad primes."""
    if E.disc % l == 0:
        return tate_local(E, l).local_trace
    if l <= NAIVE_LIMIT:
        return ap_naive(E, l)
    return ap_bsgs(E, l)


@dataclass(frozen=True)
class TraceVector:
    """Traces a_l at an ordered list of primes, with bad primes marked."""

    primes: tuple[int, ...]
    values: tuple[int, ...]
    bad: frozenset[int] = frozenset()

    def __post_init__(self):
        if len(self.primes) != len(self.values):
            raise ValueError("primes and values differ in length")

    def __len__(self) -> int:
        return len(self.primes)

    def __getitem__(self, l: int) -> int:
        return self.values[self.primes.index(l)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.primes, self.values))

    def good(self) -> dict[int, int]:
        return {l: a for l, a in zip(self.primes, self.values) if l not in self.bad}

    def reduce(self, p: int) -> tuple[int, ...]:
        return tuple(a % p for a in self.values)


def trace_vector(E: RationalEC, primes) -> TraceVector:
    E = minimal_model(E)
    primes = tuple(int(l) for l in primes)
    if not primes:
        return TraceVector((), ())
    if _cm_kind(E) and NAIVE_LIMIT < max(primes) <= CM_TABLE_LIMIT:
        ps, vs = trace_table(E, max(primes))
        idx = np.searchsorted(ps, np.array(primes))
        values = tuple(int(v) for v in vs[idx])
    else:
        values = tuple(ap(E, l) for l in primes)
    bad = frozenset(l for l in primes if E.disc % l == 0)
    return TraceVector(primes, values, bad)


def _one(args):
    E, primes = args
    return trace_vector(E, primes)


def batch_trace_vectors(curves, primes, jobs: int = 1) -> list[TraceVector]:
    """trace_vector for each curve, in input order regardless of ``jobs``."""
    work = [(E, tuple(primes)) for E in curves]
    if jobs <= 1 or len(work) < 2:
        return [_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_one, work, chunksize=max(1, len(work) // (4 * jobs))))


# vectorised CM route for j = 0 and j = 1728 ----------------------------------------------


def _cm_kind(E: RationalEC) -> int:
    if E.c4 == 0:
        return 3
    if E.c6 == 0:
        return 4
    return 0


def _powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod for moduli below 2**31."""
    result = np.ones_like(base)
    base = base % mod
    exp = exp.copy()
    while np.any(exp):
        odd = (exp & 1).astype(bool)
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def _bigmod(n: int, mod: np.ndarray) -> np.ndarray:
    """n % mod elementwise for an arbitrary Python integer n."""
    if abs(n) < 2**62:
        return np.int64(n) % mod
    sign, n = (-1 if n < 0 else 1), abs(n)
    digits = []
    while n:
        digits.append(n & 0xFFFFF)
        n >>= 20
    r = np.zeros_like(mod)
    for d in reversed(digits):
        r = (r * (1 << 20) + d) % mod
    return (sign * r) % mod


def _cm_split_traces(E: RationalEC, limit: int) -> dict[int, int]:
    """Traces at the primes l <= limit split in the CM field (l > 3)."""
    if limit >= 3 * 10**9:
        raise ValueError("vectorised CM route needs limit < 3e9")
    sm = short_model(E)
    kind = _cm_kind(E)
    if kind == 3:
        # pi = x + y w primary (x = 2 mod 3, y = 0 mod 3), w^2 + w + 1 = 0
        coeff = 4 * int(sm.b)
        ymax = isqrt(4 * limit // 3) + 2
        ys = np.arange(3, ymax + 1, 3, dtype=np.int64)
        xs = np.arange(-ymax - 2, 2 * ymax + 3, dtype=np.int64)
        xs = xs[xs % 3 == 2]
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        N = X * X - X * Y + Y * Y
        order = 6
    else:
        # pi = x + y i primary ((x, y) = (1, 0) or (3, 2) mod 4)
        coeff = -int(sm.a)
        r = isqrt(limit) + 2
        ys = np.arange(2, r + 1, 2, dtype=np.int64)
        xs = np.arange(-r, r + 1, dtype=np.int64)
        xs = xs[xs % 2 == 1]
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        keep = (X + Y) % 4 == 1
        X, Y = X[keep], Y[keep]
        N = X * X + Y * Y
        order = 4
    X, Y, N = X.ravel(), Y.ravel(), N.ravel()
    primes = primes_upto(limit)
    isp = np.zeros(limit + 1, dtype=bool)
    isp[primes] = True
    sel = (N > 3) & (N <= limit)
    sel[sel] = isp[N[sel]]
    X, Y, N = X[sel], Y[sel], N[sel]
    alpha = _bigmod(coeff, N)
    good = alpha != 0
    X, Y, N, alpha = X[good], Y[good], N[good], alpha[good]
    chi = _powmod(alpha, (N - 1) // order, N)
    # image of the CM generator (w or i) in F_l under pi -> 0
    root = (-X % N) * _powmod(Y % N, N - 2, N) % N
    # express chi as a unit u = u0 + u1 * gen, then form conj(u) * pi
    if kind == 3:
        r2 = root * root % N
        units = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)]
        images = [np.ones_like(N), N - 1, root, (N - root) % N, r2, (N - r2) % N]
        U0 = np.zeros_like(N)
        U1 = np.zeros_like(N)
        for (u0, u1), img in zip(units, images):
            hit = chi == img
            U0[hit], U1[hit] = u0, u1
        # conj(u0 + u1 w) = (u0 - u1) - u1 w
        c0, c1 = U0 - U1, -U1
        px = c0 * X - c1 * Y
        py = c0 * Y + c1 * X - c1 * Y
        trace = -(2 * px - py)
    else:
        units = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        images = [np.ones_like(N), N - 1, root, (N - root) % N]
        U0 = np.zeros_like(N)
        U1 = np.zeros_like(N)
        for (u0, u1), img in zip(units, images):
            hit = chi == img
            U0[hit], U1[hit] = u0, u1
        # conj(u) * pi, real part times 2
        trace = 2 * (U0 * X + U1 * Y)
    return dict(zip(N.tolist(), trace.tolist()))


@lru_cache(maxsize=16)
def _trace_table(ainvs: tuple[int, ...], limit: int) -> tuple[np.ndarray, np.ndarray]:
    E = RationalEC(*ainvs)
    primes = primes_upto(limit)
    kind = _cm_kind(E)
    if not kind:
        return primes, np.array([ap(E, l) for l in primes.tolist()], dtype=np.int64)
    split = _cm_split_traces(E, limit)
    values = np.zeros(len(primes), dtype=np.int64)
    for i, l in enumerate(primes.tolist()):
        if l <= 3 or E.disc % l == 0:
            values[i] = ap(E, l)
        elif l % kind == 1:
            values[i] = split[l]
        # otherwise inert in the CM field: supersingular, a_l = 0
    return primes, values


def trace_table(E: RationalEC, limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (primes, a_l) over all primes l <= limit, local traces at bad primes.

    Curves with j = 0 or 1728 take the vectorised CM route; others are
    counted prime by prime.  Results are cached per (model, limit).
    """
    E = minimal_model(E)
    primes, values = _trace_table(E.ainvs, int(limit))
    return primes, values


def traces_upto(E: RationalEC, limit: int) -> dict[int, int]:
    """a_l for every prime l <= limit (local traces at bad primes)."""
    primes, values = trace_table(E, limit)
    return dict(zip(primes.tolist(), values.tolist()))
