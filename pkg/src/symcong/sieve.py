"""Hash sieve over trace vectors and Sturm-bound certification of congruences."""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .arith import lcm, next_primes, prime_factors, primes_upto
from .curve import RationalEC, conductor, minimal_model
from .frobenius import NAIVE_LIMIT, TraceVector, _cm_kind, ap, batch_trace_vectors, trace_table

__all__ = [
    "HashKey",
    "SieveBucket",
    "CongruenceSet",
    "KOResult",
    "label_key",
    "hash_curve",
    "build_prime_window",
    "partition",
    "sturm_bound",
    "ko_certify",
    "certify_bucket",
]

MASK64 = (1 << 64) - 1
# exact sums are kept when they fit in this many bits
EXACT_BITS = 512


def label_key(label: str):
    """Natural sort key: digit runs compare numerically ("11a1" < "101a1")."""
    return tuple((0, int(tok), "") if tok.isdigit() else (1, 0, tok) for tok in re.findall(r"\d+|\D+", label))


@dataclass(frozen=True, order=True)
class HashKey:
    value: int
    exact: int | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{self.value:016x}"


@dataclass(frozen=True)
class SieveBucket:
    key: HashKey
    members: tuple[str, ...]

    @property
    def nontrivial(self) -> bool:
        return len(self.members) >= 2


@dataclass(frozen=True)
class KOResult:
    """Outcome of a Sturm-bound comparison between two curves."""

    certified: bool
    witness: int | None
    bound: int
    level: int
    checked: int
    reason: str = ""

    def __bool__(self) -> bool:
        return self.certified


@dataclass
class CongruenceSet:
    p: int
    classes: tuple[str, ...]
    certified: bool
    reducible: bool | None = None
    certificates: dict = field(default_factory=dict)

    @property
    def nontrivial(self) -> bool:
        return len(self.classes) >= 2


def hash_curve(t: TraceVector, p: int) -> HashKey:
    """Sum of (a_l mod p) * p**i over the window, wrapped to 64 bits."""
    if t.bad:
        raise ValueError(f"bad prime(s) {sorted(t.bad)} in hash window")
    if p in t.primes:
        raise ValueError("hash window contains p")
    digits = [a % p for a in t.values]
    value = 0
    for r in reversed(digits):
        value = (value * p + r) & MASK64
    if len(digits) * math.log2(p) <= EXACT_BITS:
        exact = 0
        for r in reversed(digits):
            exact = exact * p + r
        return HashKey(value, exact)
    return HashKey(value)


def build_prime_window(bound: int, B: int, exclude: int | None = None) -> list[int]:
    """The B smallest primes > bound, skipping ``exclude`` if it occurs."""
    if B < 1:
        raise ValueError("B must be positive")
    out = next_primes(bound, B + (1 if exclude is not None and exclude > bound else 0))
    if exclude in out:
        out.remove(exclude)
    return out[:B]


def partition(classes, p: int, window, traces=None, jobs: int = 1) -> list[SieveBucket]:
    """Group isogeny classes by the hash of their trace vectors mod p.

    ``classes`` is a sequence of (label, representative curve).  Precomputed
    trace vectors may be passed in the same order.  Buckets come back sorted
    by their first member, members sorted by label.
    """
    classes = list(classes)
    if traces is None:
        traces = batch_trace_vectors([E for _, E in classes], window, jobs=jobs)
    groups = defaultdict(list)
    for (label, _), t in zip(classes, traces):
        groups[hash_curve(t, p)].append(label)
    buckets = [SieveBucket(k, tuple(sorted(v, key=label_key))) for k, v in groups.items()]
    buckets.sort(key=lambda b: label_key(b.members[0]))
    return buckets


def sturm_bound(N: int) -> int:
    """floor(mu(N)/6), mu(N) the index of Gamma_0(N) in SL_2(Z)."""
    if N < 1:
        raise ValueError("level must be positive")
    mu = N
    for q in prime_factors(N):
        mu = mu // q * (q + 1)
    return mu // 6


def ko_certify(E: RationalEC, E2: RationalEC, p: int, max_bound: int = 3 * 10**7) -> KOResult:
    """Compare a_l(E), a_l(E2) mod p for all l up to the Sturm bound of the padded level.

    Primes dividing p*N*N2 are skipped.  Stops at the first mismatch and
    returns it as the witness.  If the bound exceeds ``max_bound`` nothing
    is certified.
    """
    E, E2 = minimal_model(E), minimal_model(E2)
    N, N2 = conductor(E), conductor(E2)
    level = lcm(N, N2) * p * p
    bound = sturm_bound(level)
    if bound > max_bound:
        return KOResult(False, None, bound, level, 0, "bound exceeds max_bound")
    skip = p * N * N2
    # cheap scan of small primes first: most false positives die here
    small = min(bound, NAIVE_LIMIT)
    checked = 0
    for l in primes_upto(small).tolist():
        if skip % l == 0:
            continue
        checked += 1
        if (ap(E, l) - ap(E2, l)) % p:
            return KOResult(False, l, bound, level, checked, "trace mismatch")
    if bound <= small:
        return KOResult(True, None, bound, level, checked)
    if _cm_kind(E) and _cm_kind(E2):
        ps, a1 = trace_table(E, bound)
        _, a2 = trace_table(E2, bound)
        sel = ps > small
        for q in prime_factors(skip):
            sel &= ps != q
        diff = np.flatnonzero(((a1 - a2) % p != 0) & sel)
        if len(diff):
            first = int(ps[diff[0]])
            n = int(np.count_nonzero(sel & (ps < first))) + 1
            return KOResult(False, first, bound, level, checked + n, "trace mismatch")
        return KOResult(True, None, bound, level, checked + int(np.count_nonzero(sel)))
    for l in primes_upto(bound).tolist():
        if l <= small or skip % l == 0:
            continue
        checked += 1
        if (ap(E, l) - ap(E2, l)) % p:
            return KOResult(False, l, bound, level, checked, "trace mismatch")
    return KOResult(True, None, bound, level, checked)


def certify_bucket(bucket: SieveBucket, reps: dict, p: int, max_bound: int = 3 * 10**7, fallback=None) -> list[CongruenceSet]:
    """Split a hash bucket into certified congruence sets.

    Congruence up to semisimplification is an equivalence relation, so each
    member is compared with a pivot; those that fail form a new bucket.
    Only sets with at least two classes are returned.  ``fallback(E, E2, p,
    result)`` may supply a certificate when the Sturm bound is out of reach.
    """
    out = []
    pending = list(bucket.members)
    while len(pending) >= 2:
        pivot, rest = pending[0], pending[1:]
        group, left, certs = [pivot], [], {}
        for label in rest:
            res = ko_certify(reps[pivot], reps[label], p, max_bound=max_bound)
            if fallback is not None and not res.certified and res.witness is None:
                res = fallback(reps[pivot], reps[label], p, res) or res
            certs[(pivot, label)] = res
            (group if res.certified else left).append(label)
        if len(group) >= 2:
            out.append(CongruenceSet(p, tuple(group), True, certificates=certs))
        pending = left
    return out
