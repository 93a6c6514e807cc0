from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import DIHEDRAL_7
from oracles import brute_ap, euler_symbol, factor, invariants, primes_below, short_ainvs, val
from symcong.curve import (
    CM_J_INVARIANTS,
    RationalEC,
    ReductionKind,
    conductor,
    is_cm,
    local_data,
    minimal_model,
    quadratic_twist,
    quartic_twist,
    sextic_twist,
    short_model,
    tate_local,
)
from symcong.frobenius import ap

# (label, a-invariants) from the standard tables
KNOWN = [
    (11, (0, -1, 1, -10, -20)),
    (11, (0, -1, 1, 0, 0)),
    (14, (1, 0, 1, 4, -6)),
    (15, (1, 1, 1, -10, -10)),
    (19, (0, 1, 1, -9, -15)),
    (20, (0, 1, 0, 4, 4)),
    (24, (0, -1, 0, -4, 4)),
    (26, (1, 0, 1, -5, -8)),
    (27, (0, 0, 1, 0, -7)),
    (32, (0, 0, 0, 4, 0)),
    (36, (0, 0, 0, 0, 1)),
    (37, (0, 0, 1, -1, 0)),
    (43, (0, 1, 1, 0, 0)),
    (49, (1, -1, 0, -2, -1)),
    (64, (0, 0, 0, -4, 0)),
    (389, (0, 1, 1, -2, 0)),
    (5077, (0, 0, 1, -7, 6)),
]

ainvs_st = st.tuples(*[st.integers(-50, 50) for _ in range(5)])


def _curve(a):
    c4, c6, d = invariants(*a)
    assume(d != 0)
    return RationalEC(*a)


@given(ainvs_st)
def test_invariants_match_independent_formulas(a):
    E = _curve(a)
    c4, c6, d = invariants(*a)
    assert (E.c4, E.c6, E.disc) == (c4, c6, d)
    assert E.c4**3 - E.c6**2 == 1728 * E.disc
    assert E.j == Fraction(E.c4**3, E.disc)


def test_singular_rejected():
    with pytest.raises(ValueError):
        RationalEC(0, 0, 0, 0, 0)


@given(ainvs_st)
def test_minimal_model_idempotent_and_preserves_j(a):
    E = _curve(a)
    M = minimal_model(E)
    assert minimal_model(M) == M
    assert M.j == E.j
    assert abs(M.disc) <= abs(E.disc)
    # minimal discriminant differs by a twelfth power
    r = Fraction(E.disc, M.disc)
    assert r > 0 and r.denominator == 1
    for q, e in factor(r.numerator).items():
        assert e % 12 == 0


@given(ainvs_st, st.integers(2, 4))
def test_minimal_model_undoes_scaling(a, u):
    E = minimal_model(_curve(a))
    big = E.change_coords(u=Fraction(1, u))
    assert big.disc == E.disc * u**12
    assert minimal_model(big) == E


def test_minimal_model_reduces_nonminimal_at_2():
    E = RationalEC(0, 0, 0, -(2**4) * 27, 0)
    M = minimal_model(E)
    assert abs(M.disc) < abs(E.disc)
    assert val(E.disc, 2) - val(M.disc, 2) == 12


def test_short_model_examples():
    assert short_model(RationalEC(0, 0, 0, 1, 0)).b == 0
    assert short_model(RationalEC(0, 0, 0, 0, 1)).a == 0
    E = RationalEC(*DIHEDRAL_7)
    S = short_model(E)
    assert S.j == E.j
    assert S.a.denominator == 1 and S.b.denominator == 1


def test_tate_local_examples():
    assert tate_local(RationalEC(0, 0, 0, 0, 1), 5).cond_exp == 0
    r = tate_local(RationalEC(0, -1, 1, 0, 0), 11)
    assert r.kind.multiplicative and (r.cond_exp, r.disc_exp) == (1, 1)
    r = tate_local(RationalEC(*DIHEDRAL_7), 7)
    assert r.kind is ReductionKind.ADDITIVE and r.cond_exp == 2


@pytest.mark.parametrize("N,a", KNOWN)
def test_conductor_matches_tables(N, a):
    assert conductor(RationalEC(*a)) == N


def test_conductor_of_dihedral_curve():
    assert conductor(RationalEC(*DIHEDRAL_7)) == 7**2 * 2381 * 134177**2


@given(ainvs_st)
def test_local_data_consistency(a):
    E = minimal_model(_curve(a))
    for q, r in local_data(E).items():
        assert r.disc_exp == val(E.disc, q)
        assert r.disc_exp >= r.cond_exp
        assert (r.kind is ReductionKind.GOOD) == (r.cond_exp == 0)
        assert r.kind.multiplicative == (r.cond_exp == 1)
        if q >= 5:
            assert r.cond_exp <= 2


@given(ainvs_st)
def test_multiplicative_marker_matches_point_count(a):
    # at a multiplicative prime the nonsingular points number q - a_q
    E = minimal_model(_curve(a))
    for q, r in local_data(E).items():
        if r.kind.multiplicative and q < 200:
            assert ap(E, q) == brute_ap(E.ainvs, q)


def test_quadratic_twist_examples():
    E = RationalEC.from_short(1, 1)
    assert minimal_model(quadratic_twist(E, 2)) == minimal_model(RationalEC.from_short(4, 8))
    assert minimal_model(quadratic_twist(E, 1)) == minimal_model(E)
    assert conductor(quadratic_twist(E, 1)) == conductor(E)
    F = RationalEC.from_short(3, 0)
    assert minimal_model(quadratic_twist(F, -1)) == minimal_model(F)
    with pytest.raises(ValueError):
        quadratic_twist(E, 0)


@given(ainvs_st, st.sampled_from([-1, 2, -3, 5, -7, 6, -15, 13]))
def test_quadratic_twist_involution_and_traces(a, d):
    E = minimal_model(_curve(a))
    Ed = quadratic_twist(E, d)
    assert Ed.j == E.j
    assert minimal_model(quadratic_twist(Ed, d)) == E
    for l in primes_below(60):
        if (2 * d * E.disc) % l:
            assert brute_ap(Ed.ainvs, l) == euler_symbol(d, l) * brute_ap(E.ainvs, l)


def test_quartic_and_sextic_examples():
    assert minimal_model(quartic_twist(1, 16)) == minimal_model(RationalEC.from_short(1, 0))
    assert minimal_model(sextic_twist(1, 64)) == minimal_model(RationalEC.from_short(0, 1))
    assert quartic_twist(1, Fraction(-1, 3)).j == 1728
    assert minimal_model(sextic_twist(1, -28)) == minimal_model(RationalEC(*short_ainvs(0, -28)))
    with pytest.raises(ValueError):
        quartic_twist(1, 0)
    with pytest.raises(ValueError):
        sextic_twist(1, 0)


@pytest.mark.parametrize("c", [1, 2, 3, -5, 7])
def test_special_twists_are_isogenous(c):
    # E_{a,0} ~ E_{-4a,0} (degree 2) and E_{0,b} ~ E_{0,-27b} (degree 3): equal traces
    pairs = [(quartic_twist(c, 1), quartic_twist(c, -4)), (sextic_twist(c, 1), sextic_twist(c, -27))]
    for E, F in pairs:
        for l in primes_below(80):
            if (6 * E.disc * F.disc) % l:
                assert brute_ap(E.ainvs, l) == brute_ap(F.ainvs, l)


@given(st.integers(1, 40), st.sampled_from([2, 3, 5, 6, 7, 10, Fraction(1, 2), Fraction(3, 5)]))
def test_higher_twist_class_invariance(c, u):
    assert minimal_model(quartic_twist(c, u)) == minimal_model(quartic_twist(c, u * Fraction(3) ** 4))
    assert minimal_model(sextic_twist(c, u)) == minimal_model(sextic_twist(c, u * Fraction(2) ** 6))


def _curve_with_j(j):
    j = Fraction(j)
    if j == 0:
        return RationalEC.from_short(0, 1)
    if j == 1728:
        return RationalEC.from_short(1, 0)
    return RationalEC.from_short(-3 * j * (j - 1728), -2 * j * (j - 1728) ** 2)


def test_cm_list_has_thirteen_entries():
    assert len(CM_J_INVARIANTS) == 13
    assert is_cm(_curve_with_j(0)) == -3
    assert is_cm(_curve_with_j(1728)) == -4
    assert is_cm(_curve_with_j(287496)) == -16


@pytest.mark.parametrize("j,disc", sorted(CM_J_INVARIANTS.items()))
def test_cm_list_supersingular_at_inert_primes(j, disc):
    E = minimal_model(_curve_with_j(j))
    assert E.j == j
    for l in primes_below(1000):
        if l > 3 and E.disc % l and euler_symbol(disc, l) == -1:
            assert ap(E, l) == 0


@given(ainvs_st)
def test_is_cm_rejects_generic_curves(a):
    E = _curve(a)
    assert (is_cm(E) is not None) == (E.j in CM_J_INVARIANTS)
