"""
Quartic and sextic twist partners
=================================
"""

# %%
from symcong.curve import RationalEC
from symcong.sieve import ko_certify
from symcong.twists import higher_twist_partner, isogeny_criterion

# %% [markdown]
# For j = 1728 at p = 3, 5 and j = 0 at p = 5, 7 there are three explicit
# partners: one symplectic, one through the 2- or 3-isogeny, and their
# composite.

# %%
for j, p, E in [(1728, 3, RationalEC.from_short(2, 0)), (1728, 5, RationalEC.from_short(2, 0)), (0, 5, RationalEC.from_short(0, 3)), (0, 7, RationalEC.from_short(0, 3))]:
    print(f"j = {j}, p = {p}")
    for tc in higher_twist_partner(E, p):
        cert = ko_certify(E, tc.partner, p)
        print(f"   n = {tc.n}  u = {tc.u_or_d!s:>8}  {tc.type.value.value:15s} certified={cert.certified}")

# %% [markdown]
# Composing with an isogeny of degree n multiplies the type by (n/p).

# %%
for n, p in [(2, 3), (2, 5), (2, 7), (3, 5), (3, 7), (3, 11)]:
    print(n, p, isogeny_criterion(n, p).value.value)
