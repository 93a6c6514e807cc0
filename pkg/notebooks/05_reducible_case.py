"""
Congruences when E[7] is reducible
==================================

Traces cannot separate two curves with the same semisimplification. The
degree-7 field cut out by the second isogeny can.
"""

# %%
from symcong.curve import RationalEC, minimal_model
from symcong.galois import has_rational_7_isogeny
from symcong.reducible import align_characters, fields_isomorphic, reducible_congruent, second_isogeny_field, seven_isogenous

E = RationalEC(1, -1, 1, -8950178, 9887708800)  # j = 21609
print("rational 7-isogeny:", has_rational_7_isogeny(E))

# %%
E2 = seven_isogenous(E)
print("isogenous curve:", E2.ainvs)
print("character alignment:", align_characters(E, E2).name)

# %%
F1, F2 = second_isogeny_field(E), second_isogeny_field(E2)
print("F(E)  :", F1.f)
print("F(E') :", F2.f)
print(fields_isomorphic(F1, F2))


# %% [markdown]
# Two curves with a rational 7-torsion point have the same traces mod 7 but
# can still fail to be congruent.

# %%
def tate_normal_7(d):
    b, c = d**3 - d**2, d**2 - d
    return minimal_model(RationalEC(1 - c, -b, -b, 0, 0))


res = reducible_congruent(tate_normal_7(2), tate_normal_7(3))
print("congruent:", res.congruent, " field test:", res.comparison.verdict.name)
