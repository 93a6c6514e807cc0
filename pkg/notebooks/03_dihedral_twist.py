"""
A quadratic twist congruence with dihedral image
================================================

The curve below has mod-7 image in the normaliser of a non-split Cartan,
so a_l vanishes mod 7 at every prime inert in one quadratic field. Its twist
by that field's discriminant is then 7-congruent to it.
"""

# %%
from symcong.curve import RationalEC, minimal_model, quadratic_twist
from symcong.frobenius import ap
from symcong.galois import trace_zero_quadratic
from symcong.twists import find_quadratic_twist_congruence

E = minimal_model(RationalEC(0, -1, 1, -74988699621831, 238006866237979285299))

# %%
w = trace_zero_quadratic(E, 7)
print("witness d =", w.d, " Cartan:", w.cartan.kind.name, f"({w.cartan.evidence_count} primes of evidence)")

# %%
Ed = minimal_model(quadratic_twist(E, w.d))
diffs = [(ap(E, l) - ap(Ed, l)) % 7 for l in range(3, 3000, 2) if all(l % q for q in range(3, int(l**0.5) + 1, 2)) and (E.disc * Ed.disc) % l]
print("primes checked:", len(diffs), " non-congruent:", sum(1 for x in diffs if x))

# %%
(tc,) = find_quadratic_twist_congruence(E, 7, w)
print("type:", tc.type.value.value, "via", tc.type.basis.value)
