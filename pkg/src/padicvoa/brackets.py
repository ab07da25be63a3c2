"""Square-bracket modes: Y[a, z] = e^{lz} Y(a, e^z - 1) for the Heisenberg field.

h[n] = sum_m theta(n, m) h(m) where theta(n, m) is the coefficient of
z^{-n-1} in (e^z - 1)^{-m-1} e^z.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from .fock import FockState
from .modes import apply_h, apply_L, omega


class LaurentSeries:
    """sum_i coeffs[i] z^(val + i) + O(z^prec), exact rational coefficients."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs, prec: int):
        coeffs = [Fraction(c) for c in coeffs[: max(prec - val, 0)]]
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    @classmethod
    def exp(cls, prec: int, scale: int = 1) -> "LaurentSeries":
        """e^{scale z} to O(z^prec)."""
        return cls(0, [Fraction(scale**k, factorial(k)) for k in range(max(prec, 0))], prec)

    @classmethod
    def monomial(cls, k: int, prec: int) -> "LaurentSeries":
        return cls(k, [1], prec)

    def coeff(self, k: int) -> Fraction:
        if k >= self.prec:
            raise ValueError(f"z^{k} lies beyond the certified precision O(z^{self.prec})")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = max(prec - val, 0)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    out[i + j] += a * b
        return LaurentSeries(val, out, prec)

    def inverse(self) -> "LaurentSeries":
        if not self.coeffs or self.coeffs[0] == 0:
            raise ZeroDivisionError("leading coefficient must be nonzero")
        n = self.prec - self.val
        cs = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        a0 = cs[0]
        inv = [Fraction(1) / a0]
        for k in range(1, n):
            s = sum(cs[j] * inv[k - j] for j in range(1, k + 1))
            inv.append(-s / a0)
        return LaurentSeries(-self.val, inv, -self.val + n)

    def __pow__(self, k: int) -> "LaurentSeries":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = LaurentSeries(0, [1], base.prec - base.val)  # precision matched to base
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __repr__(self):
        return f"LaurentSeries(val={self.val}, prec={self.prec}, coeffs={self.coeffs})"


def _expm1_over_z(prec: int) -> LaurentSeries:
    """(e^z - 1)/z = sum z^k/(k+1)!."""
    return LaurentSeries(0, [Fraction(1, factorial(k + 1)) for k in range(max(prec, 0))], prec)


def theta_series(n: int, m: int, extra: int = 0) -> Fraction:
    """theta(n, m) from the Laurent expansion of (e^z-1)^{-m-1} e^z.

    ``extra`` carries additional terms through the computation; the result
    must not depend on it.
    """
    if m < n:
        return Fraction(0)
    # (e^z - 1)^{-m-1} e^z = z^{-m-1} g^{-m-1} e^z with g = (e^z-1)/z; need z^{m-n}
    need = m - n + 1 + extra
    g = _expm1_over_z(need)
    series = (g ** (-m - 1)) * LaurentSeries.exp(need)
    return series.coeff(m - n)


@dataclass(frozen=True)
class BracketCoeffTable:
    n: int
    dmax: int
    theta: dict  # round index m -> coefficient, for -dmax <= m <= dmax

    def __getitem__(self, m: int) -> Fraction:
        if not -self.dmax <= m <= self.dmax:
            raise KeyError(f"m = {m} outside the certified window [-{self.dmax}, {self.dmax}]")
        return self.theta.get(m, Fraction(0))


@lru_cache(maxsize=None)
def bracket_coeffs(n: int, dmax: int, extra: int = 0) -> BracketCoeffTable:
    if dmax < 0:
        raise ValueError("dmax must be non-negative")
    theta = {}
    for m in range(max(n, -dmax), dmax + 1):
        c = theta_series(n, m, extra)
        if c:
            theta[m] = c
    return BracketCoeffTable(n, dmax, theta)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def creation_coeffs(k: int) -> dict:
    """theta(-k, -i) for 1 <= i <= k via Stirling numbers: (i-1)! S(k, i) / (k-1)!.

    Independent of the series route; suited to large k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    # iterative table avoids deep recursion for large k
    row = [1]  # S(0, 0)
    for nn in range(1, k + 1):
        new = [0] * (nn + 1)
        for kk in range(1, nn + 1):
            new[kk] = kk * (row[kk] if kk < len(row) else 0) + row[kk - 1]
        row = new
    fk = factorial(k - 1)
    return {-i: Fraction(factorial(i - 1) * row[i], fk) for i in range(1, k + 1)}


def bracket_vacuum_state(k: int) -> FockState:
    """h[-k]1, built from the Stirling route."""
    return FockState._raw({(-m,): c for m, c in creation_coeffs(k).items()})


def apply_h_bracket(n: int, b: FockState) -> FockState:
    if not b:
        return FockState.zero()
    deg = int(b.degree)
    table = bracket_coeffs(n, max(deg, -n, 0))
    out = FockState.zero()
    for m, c in table.theta.items():
        if m != 0 and m <= deg:
            out = out + apply_h(m, b) * c
    return out


def _l0_bracket_coeff(n: int) -> Fraction:
    return Fraction((-1) ** (n + 1), n * (n + 1))


def apply_L0_bracket(b: FockState) -> FockState:
    """L[0] = L(0) + sum_{n>=1} (-1)^{n+1}/(n(n+1)) L(n)."""
    out = apply_L(0, b)
    if not b:
        return out
    for n in range(1, int(b.degree) + 1):
        out = out + apply_L(n, b) * _l0_bracket_coeff(n)
    return out


def apply_Lm1_bracket(b: FockState) -> FockState:
    """L[-1] = L(0) + L(-1)."""
    return apply_L(0, b) + apply_L(-1, b)


def omega_tilde() -> FockState:
    """omega - (c/24) 1 with c = 1."""
    return omega() - FockState.vacuum() * Fraction(1, 24)


def bracket_lift(v: FockState) -> FockState:
    """The L[0]-eigenstate v + (lower degrees) with eigenvalue deg v.

    Solved top-down: the degree-j part is sum_n c_n L(n) a_{j+n} / (l - j).
    """
    if not v:
        return v
    if not v.is_homogeneous():
        raise ValueError("bracket_lift needs a homogeneous state")
    top = int(v.degree)
    parts = {top: v}
    for j in range(top - 1, -1, -1):
        acc = FockState.zero()
        for n in range(1, top - j + 1):
            acc = acc + apply_L(n, parts[j + n]) * _l0_bracket_coeff(n)
        parts[j] = acc * Fraction(1, top - j)
    out = FockState.zero()
    for part in parts.values():
        out = out + part
    return out


def bracket_weight(a: FockState) -> Optional[int]:
    """Eigenvalue of L[0] on a when a is an exact eigenstate with integer eigenvalue."""
    if not a:
        return None
    top = int(a.degree)
    if apply_L0_bracket(a) == a * top:
        return top
    return None
