import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from padicvoa.fock import FockState, basis
from padicvoa.modes import (
    apply_h,
    apply_L,
    ccr_failures,
    grading_failures,
    jacobi_check,
    jacobi_failures,
    matrix_to_json,
    mode_decay_bound,
    mode_product,
    norm_compat_failures,
    omega,
    random_state,
    translation_failures,
    virasoro_failures,
    zero_mode_matrix,
)

S = FockState
vac = S.vacuum()
h = lambda *parts: S.monomial(parts)


def identity(n, scale=1):
    return [[Fraction(scale) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


# -- an independent L(n) built from [L(m), h(-k)] = k h(m-k) and L(m)1 ----------

def L_oracle(m: int, lam: tuple) -> S:
    if not lam:
        if m >= -1:
            return S.zero()
        out = S.zero()
        for j in range(1, -m):
            out = out + apply_h(-j, apply_h(m + j, vac)) * Fraction(1, 2)
        return out
    k, rest = lam[0], S.monomial(lam[1:])
    return apply_h(-k, L_oracle(m, lam[1:])) + apply_h(m - k, rest) * k


def test_apply_h_examples():
    assert apply_h(2, h(2)) == vac * 2
    assert apply_h(1, h(1, 1)) == h(1) * 2
    assert apply_h(-3, h(1)) == h(3, 1)
    assert not apply_h(0, h(2, 1))
    for n in range(0, 4):
        assert not apply_h(n, vac)


def test_apply_L_examples():
    assert apply_L(0, h(2, 1)) == h(2, 1) * 3
    assert apply_L(2, omega()) == vac * Fraction(1, 2)
    assert not apply_L(-1, vac)
    assert omega() == h(1, 1) * Fraction(1, 2)


@pytest.mark.parametrize("d", range(0, 7))
def test_apply_L_matches_commutator_oracle(d):
    for lam in basis(d):
        for m in range(-4, 5):
            assert apply_L(m, S.monomial(lam)) == L_oracle(m, lam), (m, lam)


def test_mode_product_examples():
    b = h(3, 1) + h(2) * Fraction(-2, 3)
    for t in range(-3, 3):
        assert mode_product(vac, t, b) == (b if t == -1 else S.zero())
    for a in (h(1), h(2, 2), omega(), h(3, 1) - h(4)):
        assert mode_product(a, -1, vac) == a
    assert mode_product(omega(), 1, h(2)) == h(2) * 2
    assert mode_product(h(1), 1, h(1)) == vac


def test_vertex_operator_of_h_is_h():
    rng = random.Random(3)
    for _ in range(40):
        b = random_state(rng, 6, terms=3)
        t = rng.randint(-4, 4)
        assert mode_product(h(1), t, b) == apply_h(t, b)


def test_vertex_operator_of_omega_is_virasoro():
    rng = random.Random(4)
    for _ in range(40):
        b = random_state(rng, 6, terms=3)
        n = rng.randint(-3, 4)
        assert mode_product(omega(), n + 1, b) == apply_L(n, b)


def _skew_rhs(a, n, b, depth):
    # a(n)b = sum_i (-1)^(n+i+1) L(-1)^i/i! (b(n+i)a)
    out = S.zero()
    for i in range(depth + 1):
        x = mode_product(b, n + i, a)
        for _ in range(i):
            x = apply_L(-1, x)
        out = out + x * Fraction(1 if (n + i + 1) % 2 == 0 else -1, factorial(i))
    return out


def test_skew_symmetry():
    rng = random.Random(5)
    for _ in range(40):
        a = random_state(rng, 4, terms=2)
        b = random_state(rng, 4, terms=2)
        n = rng.randint(-3, 3)
        depth = int(a.degree + b.degree) + 2
        assert mode_product(a, n, b) == _skew_rhs(a, n, b, depth)


def test_zero_mode_examples():
    for d in range(5):
        assert zero_mode_matrix(vac, d) == identity(len(basis(d)))
    assert zero_mode_matrix(omega(), 3) == identity(3, 3)
    assert zero_mode_matrix(h(1, 1), 2) == identity(2, 4)


@pytest.mark.parametrize("d", range(0, 7))
def test_zero_mode_of_h1_squared_is_twice_L0(d):
    assert zero_mode_matrix(h(1, 1), d) == identity(len(basis(d)), 2 * d)


def test_zero_mode_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        zero_mode_matrix(h(2) + vac, 2)


def test_matrix_json():
    assert matrix_to_json(zero_mode_matrix(omega(), 2)) == [["2/1", "0/1"], ["0/1", "2/1"]]


def test_jacobi_examples():
    rng = random.Random(6)
    for _ in range(10):
        b, c = random_state(rng, 4), random_state(rng, 4)
        r, s, t = (rng.randint(-3, 3) for _ in range(3))
        assert not jacobi_check(vac, b, c, r, s, t)
    assert not jacobi_check(h(1), h(1), vac, 0, -1, 0)


def test_small_suites_pass():
    assert ccr_failures(6, 4) == []
    assert virasoro_failures(5, 3) == []
    assert jacobi_failures(40, 5, 3, seed=11) == []
    assert grading_failures(100, seed=2) == []
    assert norm_compat_failures(100, seed=3) == []
    assert translation_failures(60, seed=4) == []


def test_broken_relation_is_detected():
    # a check that compares against the wrong commutator must report failures
    v = h(2, 1)
    lhs = apply_h(2, apply_h(-2, v)) - apply_h(-2, apply_h(2, v))
    assert lhs == v * 2
    assert lhs != v * 3


@given(st.integers(0, 10**6), st.integers(-4, 4))
def test_mode_decay(seed, extra):
    rng = random.Random(seed)
    a, b = random_state(rng, 4), random_state(rng, 4)
    top = mode_decay_bound(a, b)
    assert not mode_product(a, top + 1 + abs(extra), b)


@given(st.integers(0, 10**6))
def test_mode_product_bilinear(seed):
    rng = random.Random(seed)
    a1, a2, b = (random_state(rng, 4) for _ in range(3))
    t = rng.randint(-3, 3)
    x, y = Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 7)
    assert mode_product(a1 * x + a2 * y, t, b) == mode_product(a1, t, b) * x + mode_product(a2, t, b) * y
