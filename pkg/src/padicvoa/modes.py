"""Mode actions on the Heisenberg Fock space and checkers for the vertex algebra axioms.

Heisenberg modes satisfy [h(m), h(n)] = m delta_{m,-n}; h(0) acts as zero
(uncharged sector). L(n) = 1/2 sum_{j+k=n} :h(j)h(k): gives central charge 1.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional

from . import kernels
from .fock import FockState, basis, basis_index

binom = kernels.binom


def _accumulate(acc: dict, action: dict, coeff) -> None:
    for lam, v in action.items():
        acc[lam] = acc.get(lam, 0) + coeff * v


def apply_h(n: int, b: FockState) -> FockState:
    acc: dict = {}
    for lam, c in b._terms.items():
        _accumulate(acc, kernels.h_act(n, lam), c)
    return FockState._raw(acc)


def _h_chain(modes: Iterable[int], lam: tuple) -> dict:
    """Apply h(m_k), ..., h(m_1) to lam, rightmost mode first."""
    cur = {lam: 1}
    for m in reversed(list(modes)):
        nxt: dict = {}
        for mu, v in cur.items():
            _accumulate(nxt, kernels.h_act(m, mu), v)
        cur = nxt
        if not cur:
            break
    return cur


def apply_L(n: int, b: FockState) -> FockState:
    """Virasoro mode L(n), normal ordered with annihilators on the right."""
    acc: dict = {}
    half = Fraction(1, 2)
    for lam, c in b._terms.items():
        # h(k) with k > 0 kills lam unless k is one of its parts
        for k in set(lam):
            j = n - k
            if j > 0:
                _accumulate(acc, _h_chain((j, k), lam), half * c)
            elif j < 0:
                _accumulate(acc, _h_chain((j, k), lam), c)
        for j in range(n + 1, 0):
            _accumulate(acc, _h_chain((j, n - j), lam), half * c)
    return FockState._raw(acc)


def mode_product(a: FockState, t: int, b: FockState) -> FockState:
    """The t-th product a(t)b, built recursively from Heisenberg modes."""
    acc: dict = {}
    for J, ca in a._terms.items():
        for lam, cb in b._terms.items():
            _accumulate(acc, kernels.mode_act(J, t, lam), ca * cb)
    return FockState._raw(acc)


def omega() -> FockState:
    """The conformal vector 1/2 h(-1)^2 1."""
    return FockState.monomial((1, 1), Fraction(1, 2))


def zero_mode_matrix(a: FockState, d: int) -> list[list[Fraction]]:
    """Matrix of o(a) = a(l-1) on basis(d); column j is the image of basis(d)[j]."""
    if not a.is_homogeneous():
        raise ValueError("zero modes are defined for homogeneous states only")
    slice_ = basis(d)
    dim = len(slice_)
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    if not a:
        return mat
    t = a.degree - 1
    index = basis_index(d)
    for col, lam in enumerate(slice_):
        for J, ca in a._terms.items():
            for mu, v in kernels.mode_act(J, t, lam).items():
                mat[index[mu]][col] += ca * v
    return mat


def matrix_to_json(mat) -> list:
    from .scalar import scalar_to_str

    return [[scalar_to_str(x) for x in row] for row in mat]


def _deg(x: FockState) -> int:
    return int(x.degree)


def jacobi_check(a: FockState, b: FockState, c: FockState, r: int, s: int, t: int) -> FockState:
    """LHS - RHS of the Jacobi identity at (r, s, t); zero iff it holds."""
    if not (a and b and c):
        return FockState.zero()
    la, lb, lc = _deg(a), _deg(b), _deg(c)
    # a(n)x vanishes once n exceeds deg a + deg x - 1, so every sum is finite
    top_lhs = la + lb - 1 - t
    if r >= 0:
        top_lhs = min(top_lhs, r)
    lhs = FockState.zero()
    for i in range(max(top_lhs, -1) + 1):
        coef = binom(r, i)
        if coef:
            lhs = lhs + coef * mode_product(mode_product(a, t + i, b), r + s - i, c)
    top_rhs = max(lb + lc - 1 - s, la + lc - 1 - r)
    if t >= 0:
        top_rhs = min(top_rhs, t)
    sign_t = -1 if t % 2 else 1
    rhs = FockState.zero()
    for i in range(max(top_rhs, -1) + 1):
        coef = (-1) ** i * binom(t, i)
        if not coef:
            continue
        first = mode_product(a, r + t - i, mode_product(b, s + i, c))
        second = mode_product(b, s + t - i, mode_product(a, r + i, c))
        rhs = rhs + coef * (first - sign_t * second)
    return lhs - rhs


# -- axiom suites ---------------------------------------------------------------

def _basis_upto(max_degree: int):
    for d in range(max_degree + 1):
        for lam in basis(d):
            yield FockState._raw({lam: 1})


def ccr_failures(max_degree: int = 10, mode_bound: int = 6) -> list[dict]:
    """[h(m), h(n)] = m delta_{m,-n} on every basis state up to max_degree."""
    bad = []
    for v in _basis_upto(max_degree):
        for m in range(-mode_bound, mode_bound + 1):
            for n in range(-mode_bound, mode_bound + 1):
                lhs = apply_h(m, apply_h(n, v)) - apply_h(n, apply_h(m, v))
                rhs = v * m if m == -n else FockState.zero()
                if lhs != rhs:
                    bad.append({"state": str(v), "m": m, "n": n})
    return bad


def virasoro_failures(max_degree: int = 8, mode_bound: int = 4, c: Fraction = Fraction(1)) -> list[dict]:
    bad = []
    for v in _basis_upto(max_degree):
        images = {n: apply_L(n, v) for n in range(-mode_bound, mode_bound + 1)}
        for m in range(-mode_bound, mode_bound + 1):
            for n in range(-mode_bound, mode_bound + 1):
                lhs = apply_L(m, images[n]) - apply_L(n, images[m])
                rhs = (m - n) * apply_L(m + n, v)
                if m == -n:
                    rhs = rhs + v * (Fraction(m**3 - m, 12) * c)
                if lhs != rhs:
                    bad.append({"state": str(v), "m": m, "n": n})
    return bad


def random_state(rng: random.Random, max_degree: int, terms: int = 2, homogeneous: bool = False) -> FockState:
    """A nonzero random state with small integer coefficients."""
    while True:
        out = {}
        d = rng.randint(0, max_degree)
        for _ in range(rng.randint(1, terms)):
            if not homogeneous:
                d = rng.randint(0, max_degree)
            lam = rng.choice(basis(d))
            out[lam] = out.get(lam, 0) + rng.choice([-3, -2, -1, 1, 2, 3])
        state = FockState._raw(out)
        if state:
            return state


def random_padic_state(rng: random.Random, p: int, max_degree: int, terms: int = 3) -> FockState:
    """Random state whose coefficients carry assorted powers of p."""
    out = {}
    for _ in range(rng.randint(1, terms)):
        lam = rng.choice(basis(rng.randint(0, max_degree)))
        if lam in out:
            continue
        num = rng.randint(1, 40) * rng.choice([-1, 1])
        out[lam] = Fraction(num, rng.randint(1, 9)) * Fraction(p) ** rng.randint(-2, 3)
    return FockState._raw(out)


def grading_failures(samples: int = 200, max_degree: int = 6, mode_window: int = 4, seed: int = 0) -> list[dict]:
    """a(n)b lies in degree l + m - n - 1 for homogeneous a, b."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        a = random_state(rng, max_degree, homogeneous=True)
        b = random_state(rng, max_degree, homogeneous=True)
        n = rng.randint(-mode_window, mode_window)
        out = mode_product(a, n, b)
        want = _deg(a) + _deg(b) - n - 1
        if out and not (out.is_homogeneous() and out.degree == want):
            bad.append({"a": str(a), "b": str(b), "n": n})
    return bad


def norm_compat_failures(samples: int = 500, primes=(2, 5), max_degree: int = 5, mode_window: int = 4,
                         seed: int = 0) -> list[dict]:
    """|a(n)b| <= |a||b| for the sup-norm."""
    from .fock import sup_norm

    rng = random.Random(seed)
    bad = []
    for i in range(samples):
        p = primes[i % len(primes)]
        a = random_padic_state(rng, p, max_degree)
        b = random_padic_state(rng, p, max_degree)
        n = rng.randint(-mode_window, mode_window)
        lhs = sup_norm(mode_product(a, n, b), p)
        if lhs > sup_norm(a, p) * sup_norm(b, p):
            bad.append({"p": p, "a": str(a), "b": str(b), "n": n})
    return bad


def translation_failures(samples: int = 100, max_degree: int = 5, mode_window: int = 3, seed: int = 0) -> list[dict]:
    """[L(-1), a(t)] = -t a(t-1) on sampled states."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        a = random_state(rng, max_degree)
        c = random_state(rng, max_degree)
        t = rng.randint(-mode_window, mode_window)
        lhs = apply_L(-1, mode_product(a, t, c)) - mode_product(a, t, apply_L(-1, c))
        if lhs != mode_product(a, t - 1, c) * (-t):
            bad.append({"a": str(a), "c": str(c), "t": t})
    return bad


def jacobi_failures(trials: int = 200, max_degree: int = 6, window: int = 3, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        a, b, c = (random_state(rng, max_degree, terms=1) for _ in range(3))
        r, s, t = (rng.randint(-window, window) for _ in range(3))
        res = jacobi_check(a, b, c, r, s, t)
        if res:
            bad.append({"a": str(a), "b": str(b), "c": str(c), "r": r, "s": s, "t": t})
    return bad


def mode_decay_bound(a: FockState, b: FockState) -> Optional[int]:
    """Largest n with a(n)b possibly nonzero (None when a or b is zero)."""
    if not (a and b):
        return None
    return _deg(a) + _deg(b) - 1


__all__ = [
    "apply_h",
    "apply_L",
    "mode_product",
    "omega",
    "zero_mode_matrix",
    "jacobi_check",
    "ccr_failures",
    "virasoro_failures",
    "grading_failures",
    "norm_compat_failures",
    "translation_failures",
    "jacobi_failures",
]
