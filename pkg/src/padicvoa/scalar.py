"""Exact rationals with p-adic valuations, ultrametric norms and Serre's weight space.

Scalars are plain :class:`fractions.Fraction` values; this module adds the
p-adic layer on top of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Optional, Sequence, Union

INF = math.inf

Exponent = Union[Fraction, float]  # float only for INF
Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"not a prime: {p!r}")
    return p


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def scalar_to_str(x: Number) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x: Number, p: int) -> Union[int, float]:
    """Return r with x = p^r * (p-adic unit), or INF for x = 0."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def _exp_to_str(e: Exponent) -> str:
    if e == INF:
        return "inf"
    return scalar_to_str(e)


@total_ordering
@dataclass(frozen=True, eq=False)
class NormValue:
    """An ultrametric norm p^(-exponent), kept exact.

    ``bound`` is informational: ``"upper"`` when the true norm may be smaller
    (precision-limited), ``"lower"`` when it may be larger (finite window).
    """

    base: int
    exponent: Exponent
    bound: Optional[str] = field(default=None)

    def __post_init__(self):
        if self.exponent != INF:
            object.__setattr__(self, "exponent", Fraction(self.exponent))

    @classmethod
    def zero(cls, p: int) -> "NormValue":
        return cls(p, INF)

    @property
    def is_zero(self) -> bool:
        return self.exponent == INF

    def _check(self, other: "NormValue") -> None:
        if not isinstance(other, NormValue):
            raise TypeError("can only compare NormValue with NormValue")
        if other.base != self.base:
            raise ValueError(f"norms over different primes {self.base} and {other.base}")

    def __eq__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        return self.base == other.base and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.base, self.exponent))

    def __lt__(self, other: "NormValue") -> bool:
        self._check(other)
        return self.exponent > other.exponent

    def __mul__(self, other: "NormValue") -> "NormValue":
        self._check(other)
        return NormValue(self.base, self.exponent + other.exponent)

    def __truediv__(self, other: "NormValue") -> "NormValue":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero norm")
        return NormValue(self.base, self.exponent - other.exponent)

    def as_float(self) -> float:
        if self.is_zero:
            return 0.0
        return float(self.base) ** float(-self.exponent)

    def to_json(self) -> dict:
        out = {"base": self.base, "neg_exponent": _exp_to_str(self.exponent)}
        if self.bound is not None:
            out["bound"] = self.bound
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "NormValue":
        e = obj["neg_exponent"]
        return cls(int(obj["base"]), INF if e == "inf" else Fraction(e), obj.get("bound"))

    def __repr__(self):
        if self.is_zero:
            return f"NormValue({self.base}^-inf)"
        return f"NormValue({self.base}^{-self.exponent})"


def padic_norm(x: Number, p: int) -> NormValue:
    return NormValue(p, padic_valuation(x, p))


def max_norm(norms: Iterable[NormValue], p: int) -> NormValue:
    best = NormValue.zero(p)
    for n in norms:
        if n > best:
            best = n
    return best


# -- series in an ultrametric ring ------------------------------------------

def partial_sums(terms: Sequence[Number]) -> list[Fraction]:
    out, s = [], Fraction(0)
    for a in terms:
        s += a
        out.append(s)
    return out


def tail_bound(terms: Sequence[Number], p: int, n: int) -> NormValue:
    """Bound for |S_N - S_n| over the list: the largest norm among terms n+1..N."""
    return max_norm((padic_norm(a, p) for a in terms[n + 1:]), p)


# -- weight space -------------------------------------------------------------

class NotCauchy(ValueError):
    """A sequence failed its Cauchy test; ``index`` is the first bad step."""

    def __init__(self, index: int, reason: str = ""):
        self.index = index
        self.reason = reason
        super().__init__(f"not Cauchy at index {index}" + (f": {reason}" if reason else ""))


def _digits(n: int, p: int, m: int) -> tuple[int, ...]:
    n %= p**m
    out = []
    for _ in range(m):
        n, r = divmod(n, p)
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class WeightX:
    """A point of X = Z/(p-1) x Z_p (just Z_2 when p = 2).

    ``digits`` holds the Z_p component little-endian, known mod p^len(digits).
    ``exact`` is set for rational-integer weights.
    """

    p: int
    residue: Optional[int]
    digits: tuple[int, ...]
    exact: Optional[int] = None

    def __post_init__(self):
        check_prime(self.p)
        if self.p == 2:
            if self.residue is not None:
                raise ValueError("p = 2 weights carry no residue class")
        elif self.residue is None or not 0 <= self.residue < self.p - 1:
            raise ValueError(f"residue must lie in [0, {self.p - 1})")
        if any(not 0 <= d < self.p for d in self.digits):
            raise ValueError("digits out of range")

    @classmethod
    def from_int(cls, k: int, p: int, precision: int = 20) -> "WeightX":
        residue = None if p == 2 else k % (p - 1)
        return cls(p, residue, _digits(k, p, precision), exact=k)

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def body(self) -> int:
        """The Z_p component as an integer in [0, p^precision)."""
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    @property
    def is_even(self) -> bool:
        if self.p == 2:
            if self.exact is not None:
                return self.exact % 2 == 0
            if not self.digits:
                raise ValueError("parity unknown at precision 0")
            return self.digits[0] == 0
        return self.residue % 2 == 0

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "residue": self.residue,
            "body": self.body,
            "precision": self.precision,
            "exact": self.exact,
        }


def weight_distance(k: WeightX, k2: WeightX) -> NormValue:
    if k.p != k2.p:
        raise ValueError(f"weights over different primes {k.p} and {k2.p}")
    p = k.p
    if k.residue != k2.residue:
        return NormValue(p, 0)
    if k.exact is not None and k2.exact is not None:
        return padic_norm(k.exact - k2.exact, p)
    m = min(k.precision, k2.precision)
    diff = (k.body - k2.body) % p**m
    if diff == 0:
        return NormValue(p, m, bound="upper")
    return padic_norm(diff, p)


def weight_limit(ks: Sequence[int], p: int) -> WeightX:
    """p-adic limit of integer weights obeying k_{i+1} = k_i mod (p-1)p^i.

    The limit is certified mod p^(len(ks) - 1); a constant sequence gives its
    integer value exactly. Raises :class:`NotCauchy` at the first step that
    breaks the pace.
    """
    check_prime(p)
    if not ks:
        raise ValueError("empty weight sequence")
    for i in range(len(ks) - 1):
        step = ks[i + 1] - ks[i]
        if step % (p - 1) != 0:
            raise NotCauchy(i, "residue classes differ")
        if step != 0 and _int_valuation(step, p) < i:
            raise NotCauchy(i, f"step {step} not divisible by {p}^{i}")
    last = ks[-1]
    if all(k == last for k in ks):
        return WeightX.from_int(last, p)
    residue = None if p == 2 else last % (p - 1)
    return WeightX(p, residue, _digits(last, p, len(ks) - 1))
