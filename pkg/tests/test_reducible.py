from fractions import Fraction

import pytest
import sympy

from oracles import euler_symbol, primes_below
from symcong.curve import RationalEC, conductor, minimal_model
from symcong.frobenius import ap, trace_vector
from symcong.galois import fricke_polynomial, has_rational_7_isogeny
from symcong.reducible import (
    Alignment,
    FieldVerdict,
    SevenIsogenyField,
    align_characters,
    borel_conjugation_oracle,
    character_table,
    factor_pattern,
    fields_isomorphic,
    irreducibility_certificate,
    reducible_congruent,
    sample_primes,
    second_isogeny_field,
    seven_isogenous,
    velu_isogenous,
)

T = sympy.Symbol("t")
J21609 = RationalEC(1, -1, 1, -8950178, 9887708800)


def x07_curve(t) -> RationalEC:
    t = Fraction(t)
    j = (t * t + 13 * t + 49) * (t * t + 5 * t + 1) ** 3 / t
    return minimal_model(RationalEC.from_short(-3 * j * (j - 1728), -2 * j * (j - 1728) ** 2))


def tate_normal_7(d: int) -> RationalEC:
    """Tate normal form with a rational point of order 7."""
    b, c = d**3 - d**2, d**2 - d
    return minimal_model(RationalEC(1 - c, -b, -b, 0, 0))


def _pattern_oracle(coeffs, q):
    """Degrees of the irreducible factors mod q, or None if not squarefree mod q."""
    f = sympy.Poly(coeffs, T, modulus=q)
    if sympy.degree(sympy.gcd(f, f.diff(T))) > 0 or f.degree() != len(coeffs) - 1:
        return None
    return tuple(sorted(g.degree() for g, _ in f.factor_list()[1]))


def test_j21609_curve():
    assert J21609.j == 21609
    assert has_rational_7_isogeny(J21609) == (True, 1)


def test_seven_isogenous_roundtrip():
    E2 = seven_isogenous(J21609)
    assert conductor(E2) == conductor(J21609)
    assert E2 != minimal_model(J21609)
    assert seven_isogenous(E2) == minimal_model(J21609)
    ps = [l for l in primes_below(400) if J21609.disc % l]
    assert trace_vector(J21609, ps).values == trace_vector(E2, ps).values


def test_second_isogeny_field_divides_fricke():
    for E in (J21609, seven_isogenous(J21609), x07_curve(-7)):
        F = second_isogeny_field(E)
        g = sympy.Poly(list(F.f), T)
        assert g.is_irreducible
        # g is the monic rescaling c^6 h(t/c) of the degree-7 factor h of the Fricke polynomial
        fp = sympy.Poly(fricke_polynomial(E.j).as_expr(), T)
        found = False
        for h, _ in fp.factor_list()[1]:
            if h.degree() == 7:
                c = h.LC()
                resc = sympy.Poly(sympy.expand(c**6 * h.as_expr().subs(T, T / c)), T)
                found |= resc.monic() == g.monic()
        assert found


def test_second_isogeny_field_needs_isogeny():
    with pytest.raises(ValueError):
        second_isogeny_field(RationalEC(0, 0, 1, -1, 0))


def test_isogenous_partner_gives_other_field():
    F1, F2 = second_isogeny_field(J21609), second_isogeny_field(seven_isogenous(J21609))
    assert F1 != F2


def test_irreducibility_certificate_is_genuine():
    F = second_isogeny_field(J21609)
    cert = irreducibility_certificate(list(F.f))
    assert cert
    for q, pat in cert.items():
        assert _pattern_oracle(list(F.f), q) == pat
    assert irreducibility_certificate([1, 0, 0, 0, 0, 0, 0, -1]) is None  # t^7 - 1 = (t - 1)(...)


@pytest.mark.parametrize("q", [2, 3, 5, 11, 13, 29, 347])
def test_factor_pattern_matches_sympy(q):
    c = list(second_isogeny_field(J21609).f)
    assert factor_pattern(c, q) == _pattern_oracle(c, q)


def test_character_relations():
    for E in (J21609, seven_isogenous(J21609), x07_curve(2)):
        ps = sample_primes([E], 50)
        ct = character_table(E, ps)
        for l in ps:
            m1, m2 = ct.values[l], ct.chi2(l)
            assert m1 * m2 % 7 == l % 7
            assert (m1 + m2 - ap(E, l)) % 7 == 0
        assert 6 % ct.order == 0


def test_characters_swap_under_isogeny():
    E2 = seven_isogenous(J21609)
    ps = sample_primes([J21609, E2], 60)
    c1, c2 = character_table(J21609, ps), character_table(E2, ps)
    assert all(c2.values[l] == c1.chi2(l) for l in ps)


def test_cm7_character_pattern():
    E = RationalEC(1, -1, 0, -2, -1)  # j = -3375
    ps = sample_primes([E], 50)
    ct = character_table(E, ps)
    fits = [(d, k) for d in (1, -1, 7, -7) for k in range(6) if all(ct.values[l] == euler_symbol(d, l) * pow(l, k, 7) % 7 for l in ps)]
    assert (-7, 2) in fits


def test_align_characters():
    assert align_characters(J21609, J21609) is Alignment.KEEP
    assert align_characters(J21609, seven_isogenous(J21609)) is Alignment.SWAP


def test_fields_isomorphic_basic():
    F = second_isogeny_field(J21609)
    assert fields_isomorphic(F, F).verdict is FieldVerdict.YES
    G = second_isogeny_field(seven_isogenous(J21609))
    res = fields_isomorphic(F, G)
    assert res.verdict is FieldVerdict.NO
    assert _pattern_oracle(list(F.f), res.witness) != _pattern_oracle(list(G.f), res.witness)
    assert fields_isomorphic(G, F).verdict is FieldVerdict.NO


def test_fields_isomorphic_shift_certificate():
    F = second_isogeny_field(J21609)
    g = sympy.Poly(sympy.expand(F.poly.as_expr().subs(T, T - 1)), T)
    G = SevenIsogenyField(tuple(int(c) for c in g.all_coeffs()))
    res = fields_isomorphic(F, G)
    assert res.verdict is FieldVerdict.YES
    # root of G in Q[t]/(F): t + 1
    assert res.root[:2] == (Fraction(1), Fraction(1)) and all(c == 0 for c in res.root[2:])
    back = fields_isomorphic(G, F)
    assert back.verdict is FieldVerdict.YES and back.root[:2] == (Fraction(-1), Fraction(1))


def test_fields_isomorphic_rejects_reducible():
    with pytest.raises(ValueError):
        fields_isomorphic([1, 0, 0, 0, 0, 0, 0, -1], [1, 0, 0, 0, 0, 0, 0, -2])


def test_reducible_congruent_self_and_partner():
    assert reducible_congruent(J21609, J21609).congruent
    res = reducible_congruent(J21609, seven_isogenous(J21609))
    assert res.congruent and res.alignment is Alignment.SWAP
    assert res.representative == minimal_model(J21609)


def test_reducible_congruent_distinguishes_fields():
    E1, E2 = tate_normal_7(2), tate_normal_7(3)
    # same semisimplification 1 + cyclotomic
    for l in primes_below(300):
        if (7 * E1.disc * E2.disc) % l:
            assert (ap(E1, l) - ap(E2, l)) % 7 == 0
    res = reducible_congruent(E1, E2)
    assert res.congruent is False
    assert res.comparison.verdict is FieldVerdict.NO


@pytest.mark.parametrize("ainvs", [(0, 0, 0, 0, 1), (1, 0, 1, 4, -6), (0, 0, 0, -4, 0)])
def test_velu_codomain_is_isogenous(ainvs):
    from symcong.curve import short_model
    from symcong.galois import kernel_polynomials

    sm = short_model(RationalEC(*ainvs))
    S = RationalEC.from_short(sm.a, sm.b)
    for p in (2, 3):
        for g in kernel_polynomials(S, p):
            F = velu_isogenous(S, g)
            ps = [l for l in primes_below(200) if (6 * F.disc) % l]
            assert trace_vector(S, ps).values == trace_vector(F, ps).values


@pytest.mark.parametrize("p,subgroups", [(3, 5), (5, 15)])
def test_borel_oracle_small(p, subgroups):
    rep = borel_conjugation_oracle(p)
    assert rep.ok and rep.subgroups == subgroups and not rep.failures
