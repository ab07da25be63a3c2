# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mode-action kernels; same API and results as _kernels_py."""
from math import comb

CACHE_LIMIT = 400_000

cdef dict _cache = {}
cdef dict _partition_cache = {}


cpdef object binom(long n, long k):
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    if k % 2:
        return -comb(k - n - 1, k)
    return comb(k - n - 1, k)


def _gen(long d, long largest):
    cdef long first
    if d == 0:
        yield ()
        return
    for first in range(min(d, largest), 0, -1):
        for rest in _gen(d - first, first):
            yield (first,) + rest


cpdef tuple partitions(long d):
    got = _partition_cache.get(d)
    if got is None:
        got = tuple(_gen(d, d))
        _partition_cache[d] = got
    return <tuple>got


cdef inline tuple _remove(tuple c, long m):
    cdef Py_ssize_t i = 0, n = len(c)
    while i < n and <long>c[i] != m:
        i += 1
    return c[:i] + c[i + 1:]


cdef inline tuple _insert(tuple c, long r):
    cdef Py_ssize_t i = 0, n = len(c)
    while i < n and <long>c[i] >= r:
        i += 1
    return c[:i] + (r,) + c[i:]


cdef inline long _psum(tuple c):
    cdef long s = 0
    cdef Py_ssize_t i
    for i in range(len(c)):
        s += <long>c[i]
    return s


cdef inline long _count(tuple c, long m):
    cdef long k = 0
    cdef Py_ssize_t i
    for i in range(len(c)):
        if <long>c[i] == m:
            k += 1
    return k


cpdef dict h_act(long n, tuple c):
    cdef long mult
    if n < 0:
        return {_insert(c, -n): 1}
    if n == 0:
        return {}
    mult = _count(c, n)
    if not mult:
        return {}
    return {_remove(c, n): n * mult}


cpdef dict mode_act(tuple J, long t, tuple c):
    key = (J, t, c)
    got = _cache.get(key)
    if got is not None:
        return <dict>got
    cdef long dc = _psum(c)
    cdef long wt = _psum(J) + dc - t - 1
    cdef long n, lrest, m, prev, r
    cdef Py_ssize_t i
    cdef dict acc, sub, out
    cdef tuple rest, lam2
    if len(J) == 0:
        out = {c: 1} if t == -1 else {}
    elif wt < 0:
        out = {}
    else:
        n = <long>J[0]
        rest = J[1:]
        lrest = wt + t + 1 - dc - n
        acc = {}
        prev = 0
        for i in range(len(c)):
            m = <long>c[i]
            if m == prev:
                continue
            prev = m
            coef = binom(-m - 1, n - 1) * (m * _count(c, m))
            sub = mode_act(rest, t - m - n, _remove(c, m))
            for lam, v in sub.items():
                acc[lam] = acc.get(lam, 0) + coef * v
        for r in range(n, lrest + dc - t + n):
            coef = binom(r - 1, n - 1)
            sub = mode_act(rest, t + r - n, c)
            for lam, v in sub.items():
                lam2 = _insert(<tuple>lam, r)
                acc[lam2] = acc.get(lam2, 0) + coef * v
        out = {k: v for k, v in acc.items() if v}
    if len(_cache) >= CACHE_LIMIT:
        _cache.clear()
    _cache[key] = out
    return out


cpdef object slice_trace(tuple J, long d):
    cdef long t = _psum(J) - 1
    total = 0
    for lam in partitions(d):
        total += (<dict>mode_act(J, t, lam)).get(lam, 0)
    return total


def clear_cache():
    _cache.clear()


def cache_size():
    return len(_cache)
