"""Pure-Python mode-action kernels (reference backend).

Everything here works on basis partitions with integer coefficients: every
structure constant of a monomial acting on a monomial is an integer.
"""
from __future__ import annotations

from math import comb

CACHE_LIMIT = 400_000

_cache: dict = {}
_partition_cache: dict = {}


def binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for any integer n and k >= 0."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    return (-1) ** k * comb(k - n - 1, k)


def partitions(d: int) -> tuple:
    got = _partition_cache.get(d)
    if got is None:
        got = tuple(_gen(d, d))
        _partition_cache[d] = got
    return got


def _gen(d, largest):
    if d == 0:
        yield ()
        return
    for first in range(min(d, largest), 0, -1):
        for rest in _gen(d - first, first):
            yield (first,) + rest


def _remove(c: tuple, m: int) -> tuple:
    i = c.index(m)
    return c[:i] + c[i + 1:]


def _insert(c: tuple, r: int) -> tuple:
    i = 0
    n = len(c)
    while i < n and c[i] >= r:
        i += 1
    return c[:i] + (r,) + c[i:]


def h_act(n: int, c: tuple) -> dict:
    """h(n) on the basis vector indexed by c."""
    if n < 0:
        return {_insert(c, -n): 1}
    if n == 0:
        return {}
    mult = c.count(n)
    if not mult:
        return {}
    return {_remove(c, n): n * mult}


def mode_act(J: tuple, t: int, c: tuple) -> dict:
    """(h^J)(t) applied to h^c, peeling h(-J[0]) off the state.

    Uses the Jacobi identity at r = 0 with a = h:
    (h(-n)b)(t) = sum_{r>=n} C(r-1, n-1) h(-r) b(t+r-n)
                  + sum_{m>0} C(-m-1, n-1) b(t-m-n) h(m).
    """
    key = (J, t, c)
    got = _cache.get(key)
    if got is not None:
        return got
    dc = sum(c)
    wt = sum(J) + dc - t - 1
    if not J:
        out = {c: 1} if t == -1 else {}
    elif wt < 0:
        out = {}
    else:
        n = J[0]
        rest = J[1:]
        lrest = wt + t + 1 - dc - n  # weight of rest
        acc: dict = {}
        prev = 0
        for m in c:
            if m == prev:
                continue
            prev = m
            coef = binom(-m - 1, n - 1) * m * c.count(m)
            for lam, v in mode_act(rest, t - m - n, _remove(c, m)).items():
                acc[lam] = acc.get(lam, 0) + coef * v
        for r in range(n, lrest + dc - t + n):
            coef = binom(r - 1, n - 1)
            for lam, v in mode_act(rest, t + r - n, c).items():
                lam2 = _insert(lam, r)
                acc[lam2] = acc.get(lam2, 0) + coef * v
        out = {k: v for k, v in acc.items() if v}
    if len(_cache) >= CACHE_LIMIT:
        _cache.clear()
    _cache[key] = out
    return out


def slice_trace(J: tuple, d: int) -> int:
    """Trace of the zero mode of h^J on the degree-d slice, column by column."""
    t = sum(J) - 1
    total = 0
    for lam in partitions(d):
        total += mode_act(J, t, lam).get(lam, 0)
    return total


def clear_cache() -> None:
    _cache.clear()


def cache_size() -> int:
    return len(_cache)
