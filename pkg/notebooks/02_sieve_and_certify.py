"""
Hashing trace vectors and certifying congruences
================================================
"""

# %%
from symcong.corpus import CorpusBuilder, random_curves, theorem_j0_family
from symcong.sieve import build_prime_window, hash_curve, ko_certify, partition, sturm_bound

# %% [markdown]
# A small corpus: two j = 0 families with planted 7-congruences, plus a few
# random curves as decoys.

# %%
cb = CorpusBuilder()
for b in (1, 2):
    first, second = theorem_j0_family(b)
    print("planted:", cb.add_class(first), "<->", cb.add_class(second))
for E in random_curves(8, seed=5, avoid_conductors=cb.conductors()):
    cb.add_class([E])
print(len(cb.records), "curves")

# %%
from math import lcm

from symcong.frobenius import trace_vector

p = 7
reps = {}
for r in cb.records:
    reps.setdefault(r.class_label, r.curve)
window = build_prime_window(max(r.conductor for r in cb.records), 50, exclude=p)
print("window:", window[:5], "...", len(window), "primes above the largest conductor")
buckets = partition(list(reps.items()), p, window)
for bk in buckets:
    if len(bk.members) > 1:
        print("bucket", bk.members, bk.key)

# %% [markdown]
# Equal hashes only suggest a congruence. A Sturm-type bound turns the
# suggestion into a proof by checking traces up to a finite limit.

# %%
a, b = reps["36a"], reps["1764a"]
print("Sturm bound:", sturm_bound(lcm(36, 1764) * p * p))
print(ko_certify(a, b, p))
print("hash of 36a:", hash_curve(trace_vector(a, window), p))
