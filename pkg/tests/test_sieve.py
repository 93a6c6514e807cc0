from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_ap, is_prime, mu_index, primes_below
from symcong.corpus import random_curves
from symcong.curve import RationalEC, conductor, minimal_model, sextic_twist
from symcong.frobenius import TraceVector, trace_vector
from symcong.sieve import (
    MASK64,
    HashKey,
    build_prime_window,
    certify_bucket,
    hash_curve,
    ko_certify,
    label_key,
    partition,
    sturm_bound,
)


def test_hash_examples():
    t = TraceVector((11, 13, 17), (3, 7, 5))
    assert hash_curve(t, 7).value == 3 + 0 * 7 + 5 * 49
    z = TraceVector(tuple(primes_below(200)[5:]), (0,) * len(primes_below(200)[5:]))
    assert hash_curve(z, 7).value == 0


@given(st.lists(st.integers(-100, 100), min_size=1, max_size=120), st.sampled_from([7, 11, 13, 97]))
def test_hash_matches_direct_sum(values, p):
    ps = tuple(l for l in range(1000, 3000) if is_prime(l))[: len(values)]
    key = hash_curve(TraceVector(ps, tuple(values)), p)
    full = sum((a % p) * p**i for i, a in enumerate(values))
    assert key.value == full & MASK64
    if key.exact is not None:
        assert key.exact == full


def test_hash_rejects_bad_window():
    with pytest.raises(ValueError):
        hash_curve(TraceVector((11, 13), (1, 1), frozenset({11})), 7)
    with pytest.raises(ValueError):
        hash_curve(TraceVector((7, 13), (1, 1)), 7)


def test_hash_key_hex():
    assert str(HashKey(255)) == "00000000000000ff"


def test_prime_window_examples():
    assert build_prime_window(10, 3) == [11, 13, 17]
    assert build_prime_window(500000, 2) == [500009, 500029]
    w = build_prime_window(400000, 35)
    assert w[-1] < 400457
    assert build_prime_window(5, 3, exclude=7) == [11, 13, 17]


@given(st.integers(1, 5000), st.integers(1, 30))
def test_prime_window_is_next_primes(bound, B):
    w = build_prime_window(bound, B)
    expect, k = [], bound + 1
    while len(expect) < B:
        if is_prime(k):
            expect.append(k)
        k += 1
    assert w == expect


def test_sturm_examples():
    assert sturm_bound(11) == 2
    assert sturm_bound(1) == 0
    assert sturm_bound(36) == 12


@given(st.integers(1, 10**6))
def test_sturm_bound_formula(N):
    assert sturm_bound(N) == int(mu_index(N) / 6)


def test_label_key_natural_order():
    labels = ["101a1", "11a2", "11a1", "11b1", "1764a1", "36a1"]
    assert sorted(labels, key=label_key) == ["11a1", "11a2", "11b1", "36a1", "101a1", "1764a1"]


def test_ko_self_and_theorem_pair():
    E = RationalEC.from_short(0, 1)
    assert ko_certify(E, E, 7)
    res = ko_certify(E, sextic_twist(1, -28), 7)
    assert res.certified and res.witness is None
    assert res.bound == sturm_bound(res.level)


def test_ko_rejects_with_small_witness():
    E, F = RationalEC.from_short(0, 1), RationalEC.from_short(1, 0)
    res = ko_certify(E, F, 7)
    assert not res.certified
    l = res.witness
    assert l < 50
    assert (brute_ap(minimal_model(E).ainvs, l) - brute_ap(minimal_model(F).ainvs, l)) % 7


def test_ko_witness_is_the_first_mismatch():
    E, F = minimal_model(RationalEC(0, -1, 1, -10, -20)), minimal_model(RationalEC(0, 0, 1, -1, 0))
    res = ko_certify(E, F, 5)
    skip = 5 * 11 * 37
    first = next(l for l in primes_below(1000) if skip % l and (brute_ap(E.ainvs, l) - brute_ap(F.ainvs, l)) % 5)
    assert res.witness == first


@pytest.mark.parametrize("b", [1, 2, 3, -5])
def test_ko_symmetric(b):
    E, F = sextic_twist(b, 1), sextic_twist(b, Fraction(-28, b * b))
    G = RationalEC.from_short(1, 0)
    for X, Y in ((E, F), (E, G)):
        r1, r2 = ko_certify(X, Y, 7), ko_certify(Y, X, 7)
        assert (r1.certified, r1.witness, r1.bound) == (r2.certified, r2.witness, r2.bound)


def test_ko_respects_max_bound():
    res = ko_certify(RationalEC.from_short(0, 1), sextic_twist(1, -28), 7, max_bound=100)
    assert not res.certified and res.witness is None and "max_bound" in res.reason


def _desk_corpus():
    classes = []
    for b in (1, 2, 3):
        classes.append((f"j0b{b}", minimal_model(sextic_twist(b, 1))))
        classes.append((f"j0b{b}x", minimal_model(sextic_twist(b, Fraction(-28, b * b)))))
    used = {conductor(E) for _, E in classes}
    for i, E in enumerate(random_curves(20, seed=3, avoid_conductors=used)):
        classes.append((f"r{i}", E))
    return classes


def _window(classes, p, B=50):
    disc = 1
    for _, E in classes:
        disc *= E.disc
    out, bound = [], max(conductor(E) for _, E in classes)
    while len(out) < B:
        bound += 1
        if bound != p and is_prime(bound) and disc % bound:
            out.append(bound)
    return out


def test_partition_desk_corpus():
    classes = _desk_corpus()
    window = _window(classes, 7)
    buckets = [b for b in partition(classes, 7, window) if b.nontrivial]
    assert sorted(b.members for b in buckets) == [("j0b1", "j0b1x"), ("j0b2", "j0b2x"), ("j0b3", "j0b3x")]


def test_partition_refines_trace_equality():
    classes = _desk_corpus()
    window = _window(classes, 7, B=8)
    red = {lab: trace_vector(E, window).reduce(7) for lab, E in classes}
    buckets = partition(classes, 7, window)
    assert sorted(m for b in buckets for m in b.members) == sorted(red)
    for b in buckets:
        assert len({red[m] for m in b.members}) == 1
    keys = [red[b.members[0]] for b in buckets]
    assert len(set(keys)) == len(keys)


def test_partition_deterministic_across_jobs():
    classes = _desk_corpus()
    window = _window(classes, 7, B=20)
    assert partition(classes, 7, window, jobs=1) == partition(classes, 7, window, jobs=3)
    assert partition(classes, 7, window) == partition(list(reversed(classes)), 7, window)


def test_certify_bucket_splits_false_positive():
    from symcong.sieve import SieveBucket

    reps = {
        "a": minimal_model(sextic_twist(1, 1)),
        "b": minimal_model(sextic_twist(1, -28)),
        "c": minimal_model(RationalEC.from_short(1, 0)),
    }
    sets = certify_bucket(SieveBucket(HashKey(0), ("a", "b", "c")), reps, 7)
    assert [s.classes for s in sets] == [("a", "b")]
    assert sets[0].certificates[("a", "c")].witness is not None
