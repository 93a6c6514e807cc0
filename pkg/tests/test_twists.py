from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import D2_CURVE, DIHEDRAL_7_D
from oracles import euler_symbol, primes_below
from symcong.curve import RationalEC, minimal_model, quadratic_twist, quartic_twist, sextic_twist
from symcong.frobenius import ap
from symcong.galois import CartanClass, CartanKind, trace_zero_quadratic
from symcong.twists import (
    Basis,
    SymplecticType,
    TypeValue,
    cm_twist_congruence,
    find_quadratic_twist_congruence,
    higher_twist_partner,
    higher_twist_type,
    isogeny_criterion,
    pstar,
    quadratic_twist_type,
    twist_order,
)

S, A = TypeValue.SYMPLECTIC, TypeValue.ANTISYMPLECTIC
odd_primes = [p for p in primes_below(200) if p > 2]


def _congruent(E, F, p, n=200):
    E, F = minimal_model(E), minimal_model(F)
    bad = p * E.disc * F.disc
    good = [l for l in primes_below(5000) if bad % l][:n]
    return all((ap(E, l) - ap(F, l)) % p == 0 for l in good)


def test_isogeny_criterion_examples():
    assert isogeny_criterion(1, 11).value is S
    assert isogeny_criterion(2, 7).value is S
    assert isogeny_criterion(3, 7).value is A
    with pytest.raises(ValueError):
        isogeny_criterion(14, 7)


@given(st.integers(1, 10**4), st.sampled_from(odd_primes))
def test_isogeny_criterion_is_residue_symbol(n, p):
    if n % p == 0:
        return
    assert isogeny_criterion(n, p).sign == euler_symbol(n, p)


@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from(odd_primes))
def test_type_composition_is_multiplicative(m, n, p):
    if (m * n) % p == 0:
        return
    assert (isogeny_criterion(m, p) * isogeny_criterion(n, p)).sign == isogeny_criterion(m * n, p).sign


def test_composition_with_undetermined():
    u = SymplecticType(TypeValue.UNDETERMINED, Basis.QUADRATIC_TWIST)
    assert not (u * isogeny_criterion(2, 7)).decided


def test_quadratic_twist_type_examples():
    c = lambda k: CartanClass(k, 40)
    assert quadratic_twist_type(c(CartanKind.NONSPLIT), 7).value is S
    assert quadratic_twist_type(c(CartanKind.SPLIT), 5).value is S
    assert quadratic_twist_type(c(CartanKind.SPLIT), 7).value is A
    assert quadratic_twist_type(CartanClass(CartanKind.UNDETERMINED, 0), 7).value is TypeValue.UNDETERMINED


@pytest.mark.parametrize("p", odd_primes)
def test_quadratic_twist_type_dichotomy(p):
    a = quadratic_twist_type(CartanKind.SPLIT, p)
    b = quadratic_twist_type(CartanKind.NONSPLIT, p)
    assert a.decided and b.decided and a.value is not b.value


def test_dihedral_example_partner(dihedral_curve):
    w = trace_zero_quadratic(dihedral_curve, 7)
    (tc,) = find_quadratic_twist_congruence(dihedral_curve, 7, w)
    assert tc.u_or_d == DIHEDRAL_7_D and tc.n == 2
    assert tc.type.value is S and tc.type.basis is Basis.QUADRATIC_TWIST
    assert tc.partner == minimal_model(quadratic_twist(dihedral_curve, DIHEDRAL_7_D))
    assert _congruent(dihedral_curve, tc.partner, 7)


def test_d2_partners():
    E = RationalEC(*D2_CURVE)
    w = trace_zero_quadratic(E, 3)
    types = {int(tc.u_or_d): tc.type.value for tc in find_quadratic_twist_congruence(E, 3, w)}
    assert types == {-3: S, -11: A, 33: A}
    for tc in find_quadratic_twist_congruence(E, 3, w):
        assert _congruent(E, tc.partner, 3)


def test_no_witness_no_partner():
    assert find_quadratic_twist_congruence(RationalEC(0, -1, 1, -10, -20), 7, None) == []


def test_j1728_minus_one_partner_is_quartic():
    E = RationalEC.from_short(3, 0)
    w = trace_zero_quadratic(E, 5)
    (tc,) = find_quadratic_twist_congruence(E, 5, w)
    assert tc.n == 4 and tc.u_or_d == -4
    assert tc.type.sign == euler_symbol(2, 5)
    assert _congruent(E, tc.partner, 5)


def test_cm_examples():
    E7 = RationalEC(1, -1, 0, -2, -1)
    assert cm_twist_congruence(E7, 7, 11).type.value is A
    assert cm_twist_congruence(RationalEC.from_short(1, 0), 4, 7).type.value is S
    tc = cm_twist_congruence(RationalEC.from_short(0, 1), 3, 17)
    assert tc.type.value is A
    with pytest.raises(ValueError):
        cm_twist_congruence(E7, 7, 7)
    with pytest.raises(ValueError):
        cm_twist_congruence(RationalEC.from_short(0, 1), 3, 7)  # 7 is not +-1 mod 9
    with pytest.raises(ValueError):
        cm_twist_congruence(E7, 8, 11)


@pytest.mark.parametrize("p", [17, 19, 37])
def test_cm_j0_partner_is_congruent(p):
    E = RationalEC.from_short(0, 2)
    tc = cm_twist_congruence(E, 3, p)
    assert _congruent(E, tc.partner, p)


def test_twist_order():
    assert twist_order(0, 64) == 1
    assert twist_order(0, -27) == 2  # (-3)^3
    assert twist_order(0, 4) == 3
    assert twist_order(0, Fraction(-28)) == 6
    assert twist_order(1728, 16) == 1
    assert twist_order(1728, -4) == 4
    assert twist_order(1728, 5) == 4
    assert twist_order(1728, 9) == 2


def test_higher_twist_type_examples():
    for b in (1, 2, 3, 5):
        assert higher_twist_type(6, Fraction(-28, b * b), 7).value is S
    for a in (1, 2, 3):
        assert higher_twist_type(4, Fraction(5, a * a), 5).value is S
    assert higher_twist_type(3, 2, 7).value is A
    with pytest.raises(ValueError):
        higher_twist_type(3, 8, 7)
    with pytest.raises(ValueError):
        higher_twist_type(4, -9, 5)
    with pytest.raises(ValueError):
        higher_twist_type(6, -3, 7)


def test_higher_twist_side_conditions_flagged():
    assert "side condition" in higher_twist_type(4, 5, 7).note
    assert "side condition" in higher_twist_type(6, 7, 11).note
    assert higher_twist_type(6, -28, 7).note == ""


EXPECTED = {
    (1728, 3): [(Fraction(-1, 3), -2, S), (Fraction(-4), 0, A), (Fraction(4, 3), -2, A)],
    (1728, 5): [(Fraction(5), -2, S), (Fraction(-4), 0, A), (Fraction(-20), -2, A)],
    (0, 5): [(Fraction(4, 5), -2, S), (Fraction(-27), 0, A), (Fraction(-108, 5), -2, A)],
    (0, 7): [(Fraction(-28), -2, S), (Fraction(-27), 0, A), (Fraction(756), -2, A)],
}


@pytest.mark.parametrize("j,p", list(EXPECTED))
@pytest.mark.parametrize("c", [1, 2, 3, -5])
def test_higher_twist_partners(j, p, c):
    E = RationalEC.from_short(c, 0) if j == 1728 else RationalEC.from_short(0, c)
    out = higher_twist_partner(E, p)
    assert len(out) == 3
    for tc, (u0, power, typ) in zip(out, EXPECTED[(j, p)]):
        u = u0 * Fraction(c) ** power
        expect = quartic_twist(c, u) if j == 1728 else sextic_twist(c, u)
        assert tc.partner == minimal_model(expect)
        assert tc.type.value is typ
        assert _congruent(E, tc.partner, p)


@pytest.mark.parametrize("j,p", list(EXPECTED))
def test_isogeny_composition_flips_types(j, p):
    # composing with the 2-isogeny (j = 1728) or 3-isogeny (j = 0) multiplies by (2/p) or (3/p)
    deg = 2 if j == 1728 else 3
    E = RationalEC.from_short(1, 0) if j == 1728 else RationalEC.from_short(0, 1)
    sym, _, anti = higher_twist_partner(E, p)
    flip = isogeny_criterion(deg, p)
    assert (sym.type * flip).value is anti.type.value
    assert (flip.sign == -1) == (sym.type.value is not anti.type.value)


def test_unsupported_pairs_give_nothing():
    assert higher_twist_partner(RationalEC(0, -1, 1, -10, -20), 7) == []
    assert higher_twist_partner(RationalEC.from_short(1, 0), 7) == []


def test_pstar():
    assert [pstar(p) for p in (3, 5, 7, 13)] == [-3, 5, -7, 13]
