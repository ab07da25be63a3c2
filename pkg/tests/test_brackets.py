import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicvoa.brackets import (
    LaurentSeries,
    apply_h_bracket,
    apply_L0_bracket,
    apply_Lm1_bracket,
    bracket_coeffs,
    bracket_lift,
    bracket_vacuum_state,
    bracket_weight,
    creation_coeffs,
    omega_tilde,
    stirling2,
    theta_series,
)
from padicvoa.fock import FockState, basis
from padicvoa.modes import omega, random_state

S = FockState
vac = S.vacuum()
h = lambda *parts: S.monomial(parts)


def test_laurent_exp_inverse():
    e = LaurentSeries.exp(12)
    em = LaurentSeries.exp(12, scale=-1)
    one = e * em
    assert [one.coeff(k) for k in range(12)] == [1] + [0] * 11
    inv = e.inverse()
    assert [inv.coeff(k) for k in range(12)] == [em.coeff(k) for k in range(12)]
    with pytest.raises(ValueError):
        one.coeff(12)


def test_laurent_negative_power():
    z = LaurentSeries.monomial(1, 10)
    zi = z ** -2
    assert zi.val == -2 and zi.coeff(-2) == 1 and zi.coeff(0) == 0


def test_theta_examples():
    assert theta_series(-1, -1) == 1
    for n in range(-4, 3):
        for m in range(-6, n):
            assert theta_series(n, m) == 0
    table = bracket_coeffs(-2, 4)
    doubled = bracket_coeffs(-2, 4, extra=8)
    assert table.theta == doubled.theta
    assert table[-2] == 1 and table[-1] == 1


@pytest.mark.parametrize("n", [-5, -3, -1, 0, 2])
def test_table_certification(n):
    assert bracket_coeffs(n, 6).theta == bracket_coeffs(n, 6, extra=12).theta
    with pytest.raises(KeyError):
        bracket_coeffs(n, 6)[7]


def test_theta_direct_expansion():
    # (e^z-1)^{-m-1} e^z for m = -3 is (e^z-1)^2 e^z = e^{3z} - 2e^{2z} + e^z
    for n in range(-6, 0):
        k = -n - 1
        expect = sum(Fraction(c * b**k) for c, b in ((1, 3), (-2, 2), (1, 1))) / __import__("math").factorial(k)
        assert theta_series(n, -3) == expect


def test_stirling_route_matches_series():
    for k in range(1, 12):
        c = creation_coeffs(k)
        for i in range(1, k + 1):
            assert c[-i] == theta_series(-k, -i), (k, i)
    assert stirling2(5, 2) == 15


def test_apply_h_bracket_examples():
    assert apply_h_bracket(-1, vac) == h(1)
    for n in range(0, 4):
        assert not apply_h_bracket(n, vac)
    assert apply_h_bracket(-2, vac) == h(2) + h(1)
    assert apply_h_bracket(-2, vac) == bracket_lift(h(2))


def test_bracket_vacuum_state_routes_agree():
    for k in range(1, 10):
        assert bracket_vacuum_state(k) == apply_h_bracket(-k, vac)


def test_L0_bracket_examples():
    assert apply_L0_bracket(h(1)) == h(1)
    assert not apply_L0_bracket(vac)
    assert apply_L0_bracket(h(2)) == h(2) * 2 + h(1)


def test_Lm1_bracket_examples():
    assert not apply_Lm1_bracket(vac)
    assert apply_Lm1_bracket(h(1)) == h(1) + h(2)


def test_bracket_lift_examples():
    assert bracket_lift(h(1)) == h(1)
    assert bracket_lift(h(2)) == h(2) + h(1)
    assert bracket_lift(vac) == vac
    assert bracket_weight(bracket_lift(vac)) == 0
    with pytest.raises(ValueError):
        bracket_lift(h(2) + h(1))


@pytest.mark.parametrize("d", range(0, 7))
def test_lifts_are_eigenstates_with_unit_leading_term(d):
    for lam in basis(d):
        a = bracket_lift(S.monomial(lam))
        assert apply_L0_bracket(a) == a * d
        assert a.components()[d] == S.monomial(lam)
        assert bracket_weight(a) == d


def _bracket_monomial(lam):
    out = vac
    for n in reversed(lam):
        out = apply_h_bracket(-n, out)
    return out


@pytest.mark.parametrize("d", range(1, 7))
def test_two_routes_to_bracket_eigenstates(d):
    for lam in basis(d):
        assert _bracket_monomial(lam) == bracket_lift(S.monomial(lam)), lam


def test_L0_L_minus1_commutator():
    for d in range(0, 9):
        for lam in basis(d):
            v = S.monomial(lam)
            lhs = apply_L0_bracket(apply_Lm1_bracket(v)) - apply_Lm1_bracket(apply_L0_bracket(v))
            assert lhs == apply_Lm1_bracket(v)


def test_eigenvalue_shift():
    for lam in basis(4):
        a = bracket_lift(S.monomial(lam))
        b = apply_Lm1_bracket(a)
        assert apply_L0_bracket(b) == b * 5


def test_omega_tilde():
    assert omega_tilde() == omega() - vac * Fraction(1, 24)
    assert bracket_weight(bracket_lift(omega())) == 2


@given(st.integers(0, 10**6))
def test_L0_bracket_lowers_degree_off_diagonal(seed):
    a = random_state(random.Random(seed), 6, terms=3)
    from padicvoa.modes import apply_L
    diff = apply_L0_bracket(a) - apply_L(0, a)
    assert not diff or diff.degree < a.degree


@given(st.integers(-6, -1), st.integers(0, 10**6))
def test_bracket_mode_shifts_bracket_weight(n, seed):
    # [L[0], h[n]] = -n h[n]
    v = random_state(random.Random(seed), 4, homogeneous=True)
    a = bracket_lift(v)
    b = apply_h_bracket(n, a)
    assert apply_L0_bracket(b) == b * (int(v.degree) - n)
