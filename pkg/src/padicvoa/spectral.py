"""Spectral experiments for L(0) and L[0] on finite windows of the completions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .brackets import apply_L0_bracket, bracket_vacuum_state
from .fock import FockState, RExponent, basis, basis_index, r_norm
from .modes import apply_L
from .scalar import (
    INF,
    NormValue,
    NotCauchy,
    check_prime,
    max_norm,
    padic_valuation,
    scalar_to_str,
    to_scalar,
)

CAUCHY = "CAUCHY_AT_RATE"
NOT_CAUCHY = "NOT_CAUCHY"
PRECISION_SHORT = "PRECISION_SHORT"


class PrecisionShort(ValueError):
    """A digit-given target is not known precisely enough for the request."""


@dataclass(frozen=True)
class PadicTarget:
    """An eigenvalue candidate: an exact rational, or p-adic digits known mod p^m."""

    p: int
    value: Optional[Fraction] = None
    digits: Optional[tuple] = None  # little-endian

    def __post_init__(self):
        check_prime(self.p)
        if (self.value is None) == (self.digits is None):
            raise ValueError("give exactly one of value and digits")
        if self.value is not None:
            object.__setattr__(self, "value", to_scalar(self.value))
        elif any(not 0 <= d < self.p for d in self.digits):
            raise ValueError("digits out of range")

    @classmethod
    def parse(cls, text: str, p: int) -> "PadicTarget":
        """"-1/3" is a rational; "...1011" lists digits most significant first."""
        text = text.strip()
        if text.startswith("..."):
            body = text[3:]
            if not body:
                raise ValueError("empty digit string")
            return cls(p, digits=tuple(int(ch, 36) for ch in reversed(body)))
        return cls(p, value=Fraction(text))

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def precision(self) -> float:
        return INF if self.exact else len(self.digits)

    @property
    def representative(self) -> Fraction:
        if self.exact:
            return self.value
        return Fraction(sum(d * self.p**i for i, d in enumerate(self.digits)))

    def digit(self, i: int) -> int:
        if self.exact:
            v = self.value
            if padic_valuation(v, self.p) < 0:
                raise ValueError("target is not a p-adic integer")
            mod = self.p ** (i + 1)
            r = v.numerator * pow(v.denominator, -1, mod) % mod
            return r // self.p**i
        if i >= len(self.digits):
            raise PrecisionShort(f"digit {i} unknown (precision {len(self.digits)})")
        return self.digits[i]

    def residue(self, i: int) -> int:
        """The target mod p^i as an integer in [0, p^i)."""
        return sum(self.digit(j) * self.p**j for j in range(i))

    def to_json(self):
        if self.exact:
            return {"p": self.p, "value": scalar_to_str(self.value)}
        return {"p": self.p, "digits": list(self.digits)}


def _target(lam, p: Optional[int] = None) -> PadicTarget:
    if isinstance(lam, PadicTarget):
        return lam
    if p is None:
        p = 2
    return PadicTarget(p, value=to_scalar(lam))


def _is_point_spectrum(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


# -- L(0) and its resolvent ------------------------------------------------------

def apply_L0(a: FockState) -> FockState:
    return apply_L(0, a)


def resolvent_apply(lam, a: FockState) -> FockState:
    """(L(0) - lam)^{-1} a: the degree-m part is scaled by 1/(m - lam)."""
    t = _target(lam)
    if not t.exact:
        raise ValueError("the resolvent acts exactly only for rational lambda")
    x = t.value
    if _is_point_spectrum(x):
        raise ValueError(f"lambda = {x} lies in the point spectrum Z>=0 of L(0)")
    out = FockState.zero()
    for m, part in a.components().items():
        out = out + part * (1 / (m - x))
    return out


def l0_kernel_dimensions(lam, max_degree: int) -> list[int]:
    """dim ker(L(0) - lam) on each slice of degree 0..max_degree."""
    x = to_scalar(lam)
    dims = []
    for d in range(max_degree + 1):
        slice_ = basis(d)
        index = basis_index(d)
        rows = [[Fraction(0)] * len(slice_) for _ in slice_]
        for col, lam_ in enumerate(slice_):
            img = apply_L0(FockState._raw({lam_: 1}))
            for mu, c in img._terms.items():
                rows[index[mu]][col] += c
            rows[col][col] -= x
        dims.append(len(slice_) - _rank(rows))
    return dims


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class NormProfile:
    p: int
    entries: list  # (m, NormValue) with NormValue = 1/|m - lambda|
    shortfalls: list = field(default_factory=list)
    bounded_for_all_m: bool = False

    @property
    def max_norm(self) -> NormValue:
        return max_norm((n for _, n in self.entries), self.p)

    @property
    def constant(self) -> bool:
        return len({n.exponent for _, n in self.entries}) <= 1

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "profile": [{"m": m, "norm": n.to_json()} for m, n in self.entries],
            "max": self.max_norm.to_json(),
            "constant": self.constant,
            "shortfalls": self.shortfalls,
            "bounded_for_all_m": self.bounded_for_all_m,
        }


def resolvent_norm_profile(lam, mmax: int, p: int) -> NormProfile:
    """Mode-wise resolvent norms 1/|m - lam| for m = 0..mmax.

    A digit-given lam that agrees with some m to full precision yields only a
    lower bound for that entry, listed in ``shortfalls``.
    """
    t = _target(lam, p)
    if t.p != p:
        raise ValueError("target over a different prime")
    if t.exact and _is_point_spectrum(t.value):
        raise ValueError(f"lambda = {t.value} lies in the point spectrum Z>=0 of L(0)")
    entries, short = [], []
    for m in range(mmax + 1):
        if t.exact:
            entries.append((m, NormValue(p, -padic_valuation(m - t.value, p))))
            continue
        mod = p ** len(t.digits)
        diff = (m - int(t.representative)) % mod
        if diff == 0:
            entries.append((m, NormValue(p, -len(t.digits), bound="lower")))
            short.append(m)
        else:
            entries.append((m, NormValue(p, -padic_valuation(diff, p))))
    # 1/|m - lam| stays bounded for all m only when lam lies outside Z_p
    bounded = t.exact and padic_valuation(t.value, p) < 0
    return NormProfile(p, entries, short, bounded)


# -- Cauchy sequences in S_R ----------------------------------------------------------

@dataclass
class CauchyReport:
    p: int
    rho: Fraction
    gaps: list  # gaps[i-1] = |a_i - a_{i-1}|_rho
    verdict: str
    rate: Union[Fraction, float, None] = None
    witness: Optional[int] = None

    def raise_if_not_cauchy(self) -> None:
        if self.verdict != CAUCHY:
            raise NotCauchy(self.witness, "gap does not shrink")

    def to_json(self) -> dict:
        rate = None
        if self.rate is not None:
            rate = "inf" if self.rate == INF else scalar_to_str(self.rate)
        return {
            "p": self.p,
            "rho": scalar_to_str(self.rho),
            "gaps": [g.to_json() for g in self.gaps],
            "verdict": self.verdict,
            "rate": rate,
            "witness": self.witness,
        }


def cauchy_verify(states: Sequence[FockState], p: int, rho=0) -> CauchyReport:
    """Consecutive R-norm gaps and the best rate r with gap_i <= p^(-i r)."""
    if not states:
        raise ValueError("empty sequence")
    rho_v = rho.rho if isinstance(rho, RExponent) else to_scalar(rho)
    gaps = [r_norm(states[i] - states[i - 1], p, rho_v) for i in range(1, len(states))]
    rate: Union[Fraction, float] = INF
    for i, g in enumerate(gaps, start=1):
        if g.exponent <= 0:
            return CauchyReport(p, rho_v, gaps, NOT_CAUCHY, None, i)
        if g.exponent != INF:
            rate = min(rate, g.exponent / i)
    return CauchyReport(p, rho_v, gaps, CAUCHY, rate, None)


# -- L[0] eigen-residuals ---------------------------------------------------------------

def eigen_residual(a: FockState, lam, rho=0, require_spectral: bool = False) -> NormValue:
    """|L[0]a - lam a|_rho, exact for rational lam.

    For digit targets the answer is exact when it exceeds the truncation error
    p^-m |a|_rho; otherwise that error is returned flagged as an upper bound.
    """
    t = _target(lam)
    p = t.p
    rexp = rho if isinstance(rho, RExponent) else RExponent(to_scalar(rho))
    if require_spectral and not rexp.in_spectral_window(p):
        raise ValueError(f"rho = {rexp.rho} outside the window 1/{p} < rho < 1/{p - 1}")
    res = apply_L0_bracket(a) - a * t.representative
    norm = r_norm(res, p, rexp)
    if t.exact:
        return norm
    err = t.precision + r_norm(a, p, rexp).exponent
    if norm.exponent < err:
        return norm
    return NormValue(p, err, bound="upper")


@dataclass
class FamilyMember:
    weight: int
    state: FockState

    def to_json(self) -> dict:
        return {"weight": self.weight, "state": self.state.to_json()}


def approximate_eigen_family(target: PadicTarget, steps: int, rho=0) -> list[FamilyMember]:
    """Bracket eigenstates whose weights approach the target one digit per step.

    k_i agrees with the target mod p^i but not mod p^(i+1), so |k_i - lam| = p^-i;
    a_i is h[-k_i]1 scaled by a power of p to R-norm in (1/p, 1].
    """
    p = target.p
    rexp = rho if isinstance(rho, RExponent) else RExponent(to_scalar(rho))
    out = []
    for i in range(1, steps + 1):
        k = target.residue(i) + p**i * ((target.digit(i) + 1) % p)
        state = bracket_vacuum_state(k) if k > 0 else FockState.vacuum()
        e = r_norm(state, p, rexp).exponent
        shift = -math.floor(e)
        out.append(FamilyMember(k, state * Fraction(p) ** shift))
    return out


@dataclass
class EigenReport:
    p: int
    rho: Fraction
    target: PadicTarget
    weights: list
    weight_distances: list
    residuals: list
    verdict: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rho": scalar_to_str(self.rho),
            "spectral_window": RExponent(self.rho).in_spectral_window(self.p),
            "target": self.target.to_json(),
            "weights": self.weights,
            "weight_distances": [d.to_json() for d in self.weight_distances],
            "residuals": [r.to_json() for r in self.residuals],
            "verdict": self.verdict,
        }


def verify_family(members: Sequence[FamilyMember], target: PadicTarget, rho=0) -> EigenReport:
    """Residuals of a family against the target; PASS when they shrink at every step."""
    p = target.p
    rexp = rho if isinstance(rho, RExponent) else RExponent(to_scalar(rho))
    dists, residuals = [], []
    for mem in members:
        diff = mem.weight - target.representative
        if target.exact:
            dists.append(NormValue(p, padic_valuation(diff, p)))
        else:
            mod = p ** len(target.digits)
            dd = int(diff) % mod
            dists.append(NormValue(p, padic_valuation(dd, p)) if dd else NormValue(p, len(target.digits), "upper"))
        residuals.append(eigen_residual(mem.state, target, rexp))
    if any(r.bound == "upper" for r in residuals):
        verdict = PRECISION_SHORT
    elif all(residuals[i + 1] < residuals[i] for i in range(len(residuals) - 1)):
        verdict = "PASS"
    else:
        verdict = "FAIL"
    return EigenReport(p, rexp.rho, target, [m.weight for m in members], dists, residuals, verdict)
