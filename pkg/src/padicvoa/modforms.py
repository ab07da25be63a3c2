"""Truncated q-expansions of (quasi)modular and p-adic Eisenstein series."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

from .scalar import (
    NormValue,
    check_prime,
    max_norm,
    padic_norm,
    padic_valuation,
    scalar_to_str,
    to_scalar,
    weight_limit,
)

BERNOULLI_CAP = 2000


class QSeries:
    """sum_{n=0}^{D} a_n q^n + O(q^{D+1}) with exact coefficients."""

    __slots__ = ("D", "coeffs")

    def __init__(self, coeffs: Sequence, D: Optional[int] = None):
        coeffs = [to_scalar(c) for c in coeffs]
        if D is None:
            D = len(coeffs) - 1
        if D < 0:
            raise ValueError("truncation must be non-negative")
        coeffs = coeffs[: D + 1] + [Fraction(0)] * (D + 1 - len(coeffs))
        self.D = D
        self.coeffs = coeffs

    @classmethod
    def constant(cls, c, D: int) -> "QSeries":
        return cls([c], D)

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.D:
            raise IndexError(f"q^{n} outside the window q^0..q^{self.D}")
        return self.coeffs[n]

    def _common(self, other: "QSeries") -> int:
        return min(self.D, other.D)

    def __add__(self, other: "QSeries") -> "QSeries":
        D = self._common(other)
        return QSeries([a + b for a, b in zip(self.coeffs[: D + 1], other.coeffs[: D + 1])], D)

    def __neg__(self) -> "QSeries":
        return QSeries([-a for a in self.coeffs], self.D)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = to_scalar(other)
            return QSeries([a * c for a in self.coeffs], self.D)
        D = self._common(other)
        out = [Fraction(0)] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return QSeries(out, D)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSeries":
        out = QSeries.constant(1, self.D)
        for _ in range(k):
            out = out * self
        return out

    def q_derivative(self) -> "QSeries":
        """q d/dq."""
        return QSeries([n * a for n, a in enumerate(self.coeffs)], self.D)

    def truncate(self, D: int) -> "QSeries":
        if D > self.D:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[: D + 1], D)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.D == other.D and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.D, tuple(self.coeffs)))

    def to_json(self) -> dict:
        return {"truncation": self.D, "coeffs": [scalar_to_str(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "QSeries":
        return cls([Fraction(c) for c in obj["coeffs"]], int(obj["truncation"]))

    def __repr__(self):
        shown = ", ".join(str(a) for a in self.coeffs[:6])
        return f"QSeries(D={self.D}, [{shown}{', ...' if self.D > 5 else ''}])"


# -- Bernoulli numbers ---------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple:
    """B_0..B_k (B_1 = -1/2) from sum_{j<=n} C(n+1, j) B_j = 0."""
    B = [Fraction(1)]
    for n in range(1, k + 1):
        if n > 1 and n % 2:
            B.append(Fraction(0))
            continue
        s = sum(comb(n + 1, j) * B[j] for j in range(n) if B[j])
        B.append(-s / (n + 1))
    return tuple(B)


_bern_cache: dict = {}


def bernoulli(k: int) -> Fraction:
    if k < 2 or k % 2:
        raise ValueError(f"bernoulli needs an even k >= 2, got {k}")
    if k > BERNOULLI_CAP:
        raise ValueError(f"k = {k} above the desk-scale cap {BERNOULLI_CAP}")
    if k not in _bern_cache:
        top = max(k, max(_bern_cache, default=0))
        table = _bernoulli_table(top)
        for j in range(2, top + 1, 2):
            _bern_cache[j] = table[j]
    return _bern_cache[k]


# -- divisor sums and Eisenstein series -----------------------------------------

def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in divisors(n))


def sigma_star(k: int, n: int, p: int) -> int:
    """sum of d^k over divisors d of n prime to p."""
    check_prime(p)
    if n < 1:
        raise ValueError("n must be positive")
    return sum(d**k for d in divisors(n) if d % p)


def eisenstein(k: int, D: int) -> QSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n (normalized, constant term 1)."""
    factor = -Fraction(2 * k) / bernoulli(k)
    return QSeries([Fraction(1)] + [factor * sigma(k - 1, n) for n in range(1, D + 1)], D)


def P(D: int) -> QSeries:
    return eisenstein(2, D)


def Q(D: int) -> QSeries:
    return eisenstein(4, D)


def R(D: int) -> QSeries:
    return eisenstein(6, D)


def sup_norm(f: QSeries, p: int) -> NormValue:
    """Max coefficient norm over the stored window; a lower bound for the full sup."""
    n = max_norm((padic_norm(a, p) for a in f.coeffs), p)
    return NormValue(p, n.exponent, bound="lower")


# -- Kummer chains ----------------------------------------------------------------

@dataclass(frozen=True)
class KummerChain:
    p: int
    weights: tuple

    def __post_init__(self):
        p = check_prime(self.p)
        ks = tuple(int(k) for k in self.weights)
        object.__setattr__(self, "weights", ks)
        if not ks:
            raise ValueError("empty chain")
        for i, k in enumerate(ks):
            if k < 2 or k % 2:
                raise ValueError(f"weight {k} is not an even integer >= 2")
            if p > 2 and k % (p - 1) == 0:
                raise ValueError(f"weight {k} is divisible by p - 1 = {p - 1}")
            if i and not k > ks[i - 1]:
                raise ValueError("weights must increase")
            if i and (k - ks[i - 1]) % ((p - 1) * p ** (i - 1)):
                raise ValueError(f"k_{i} = {k} not congruent to k_{i-1} mod (p-1)p^{i - 1}")

    @classmethod
    def build(cls, p: int, start: int, steps: int) -> "KummerChain":
        """start, then k_{i+1} = k_i + (p-1) p^{i+1}: gaps shrink one power of p per step."""
        ks = [start]
        for i in range(steps):
            ks.append(ks[-1] + (p - 1) * p ** (i + 1))
        return cls(p, tuple(ks))

    def limit(self):
        return weight_limit(self.weights, self.p)


def kummer_diff(chain: KummerChain, i: int, D: int) -> NormValue:
    """sup-norm of E_{k_{i+1}} - E_{k_i} over q^1..q^D (constant terms agree)."""
    if not 0 <= i < len(chain.weights) - 1:
        raise IndexError(f"chain has no step {i}")
    a, b = chain.weights[i], chain.weights[i + 1]
    if a == b:
        return NormValue.zero(chain.p)
    diff = eisenstein(b, D) - eisenstein(a, D)
    return sup_norm(diff, chain.p)


def kummer_prediction(p: int, k: int, k2: int) -> NormValue:
    """Bound on |E_k2 - E_k| from the Kummer congruences, for even k < k2.

    With v = v_p(k2 - k) the Bernoulli quotients agree mod p^(v+1), but the
    Euler factor 1 - p^(k-1) and the p-divisible divisors cap this at p^(k-1).
    For p = 2 only mod 2^v is claimed.
    """
    v = padic_valuation(k2 - k, p)
    e = v + 1 if p > 2 else v
    return NormValue(p, min(e, k - 1))


class InsufficientChain(ValueError):
    """The chain is too short to certify a coefficient at the requested precision."""


@dataclass(frozen=True)
class PadicApprox:
    """A p-adic number known mod p^precision; ``value`` is an exact representative."""

    p: int
    value: Fraction
    precision: int
    residue: Optional[int] = None  # value mod p^precision when value is p-integral
    stable_from: int = 0

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "value": scalar_to_str(self.value),
            "precision": self.precision,
            "residue": self.residue,
            "stable_from": self.stable_from,
        }


def _residue(x: Fraction, p: int, m: int) -> Optional[int]:
    if x != 0 and padic_valuation(x, p) < 0:
        return None
    mod = p**m
    return x.numerator * pow(x.denominator, -1, mod) % mod


def eisenstein_star(chain: KummerChain, n: int, m: int) -> PadicApprox:
    """q^n coefficient of the p-adic limit E_k^*, certified mod p^m."""
    p = chain.p
    if n == 0:
        return PadicApprox(p, Fraction(1), m, 1 % p**m, 0)
    vals = [-Fraction(2 * k) / bernoulli(k) * sigma(k - 1, n) for k in chain.weights]
    stable = None
    for i in range(len(vals) - 1, 0, -1):
        if padic_valuation(vals[i] - vals[i - 1], p) >= m:
            stable = i - 1
        else:
            break
    if stable is None:
        raise InsufficientChain(f"q^{n} coefficient not stable mod {p}^{m} along {chain.weights}")
    return PadicApprox(p, vals[-1], m, _residue(vals[-1], p, m), stable)


# -- quasimodular fitting ---------------------------------------------------------

FIT_MARGIN = 5


class UnderdeterminedWindow(ValueError):
    """Too few q-coefficients to decide membership."""


def monomials(weight: int) -> list[tuple[int, int, int]]:
    """Exponents (a, b, c) with 2a + 4b + 6c = weight, E_2 power descending."""
    out = []
    if weight < 0 or weight % 2:
        return out
    for a in range(weight // 2, -1, -1):
        for b in range((weight - 2 * a) // 4, -1, -1):
            rest = weight - 2 * a - 4 * b
            if rest % 6 == 0:
                out.append((a, b, rest // 6))
    return out


def monomial_series(exps: tuple[int, int, int], D: int) -> QSeries:
    a, b, c = exps
    return (P(D) ** a) * (Q(D) ** b) * (R(D) ** c)


@dataclass
class FitResult:
    weight: int
    monomials: list
    coeffs: Optional[list]
    residual: QSeries
    window: int = field(default=0)

    @property
    def ok(self) -> bool:
        return self.coeffs is not None and self.residual.is_zero()

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "monomials": [f"E2^{a} E4^{b} E6^{c}" for a, b, c in self.monomials],
            "coeffs": None if self.coeffs is None else [scalar_to_str(x) for x in self.coeffs],
            "residual_zero": self.residual.is_zero(),
            "residual": self.residual.to_json(),
            "window": self.window,
        }


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square system exactly."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][-1] for i in range(n)]


def _independent_rows(series: list[QSeries], D: int) -> list[int]:
    """Greedy choice of q-indices whose rows of the monomial matrix are independent."""
    dim = len(series)
    reduced: list[tuple[int, list[Fraction]]] = []  # (pivot column, echelon row)
    chosen = []
    for i in range(D + 1):
        row = [s.coeffs[i] for s in series]
        for col, ech in reduced:
            if row[col]:
                f = row[col]
                row = [x - f * y for x, y in zip(row, ech)]
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            continue
        inv = 1 / row[col]
        reduced.append((col, [x * inv for x in row]))
        chosen.append(i)
        if len(chosen) == dim:
            break
    return chosen


def quasimodular_fit(f: QSeries, weight: int, D: Optional[int] = None) -> FitResult:
    """Express f in the E_2^a E_4^b E_6^c basis of the given weight, exactly.

    The coefficients are pinned by the first independent q-rows; the residual
    over the rest of the window decides membership.
    """
    D = f.D if D is None else D
    f = f.truncate(D)
    mons = monomials(weight)
    if D + 1 < len(mons) + FIT_MARGIN:
        raise UnderdeterminedWindow(f"window q^0..q^{D} too small for weight {weight} (dim {len(mons)})")
    if not mons:
        return FitResult(weight, mons, [] if f.is_zero() else None, f, D)
    series = [monomial_series(e, D) for e in mons]
    rows = _independent_rows(series, D)
    if len(rows) < len(mons):
        raise UnderdeterminedWindow(f"monomials of weight {weight} are dependent on q^0..q^{D}")
    sol = _solve_square([[s.coeffs[i] for s in series] for i in rows], [f.coeffs[i] for i in rows])
    fitted = QSeries.constant(0, D)
    for c, s in zip(sol, series):
        fitted = fitted + s * c
    residual = f - fitted
    return FitResult(weight, mons, sol if residual.is_zero() else None, residual, D)
