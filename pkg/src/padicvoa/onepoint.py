"""One-point functions: F(a) = Tr o(a) q^{L(0) - 1/24} and Z(a) = eta(q) F(a).

The q^{-1/24} prefactors cancel between eta and F, so every series here is a
plain power series in q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import kernels
from .brackets import bracket_lift
from .fock import FockState, basis
from .modforms import FitResult, QSeries, quasimodular_fit
from .scalar import NormValue, padic_valuation


def eta_inverse(D: int) -> QSeries:
    """prod_{n>=1} (1 - q^n)^{-1} = sum p(n) q^n, expanded as a product."""
    coeffs = [1] + [0] * D
    for n in range(1, D + 1):
        # multiply by 1/(1 - q^n)
        for i in range(n, D + 1):
            coeffs[i] += coeffs[i - n]
    return QSeries(coeffs, D)


def eta(D: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) without the q^{1/24}."""
    coeffs = [1] + [0] * D
    for n in range(1, D + 1):
        for i in range(D, n - 1, -1):
            coeffs[i] -= coeffs[i - n]
    return QSeries(coeffs, D)


@lru_cache(maxsize=None)
def slice_trace(J: tuple, d: int) -> int:
    """Tr_{V_d} o(h^J), from the columns of the zero-mode matrix."""
    return kernels.slice_trace(J, d)


def trace_series(a: FockState, D: int) -> QSeries:
    """sum_d Tr_{V_d} o(a) q^d, extended linearly over homogeneous components."""
    coeffs = [Fraction(0)] * (D + 1)
    for J, c in a._terms.items():
        for d in range(D + 1):
            tr = slice_trace(J, d)
            if tr:
                coeffs[d] += c * tr
    return QSeries(coeffs, D)


def one_point(a: FockState, D: int) -> QSeries:
    """F(a) with the q^{-1/24} stripped."""
    return trace_series(a, D)


def z_function(a: FockState, D: int) -> QSeries:
    return eta(D) * trace_series(a, D)


@dataclass
class TraceReport:
    state: str
    D: int
    series: QSeries
    fit: Optional[FitResult] = None

    def to_json(self) -> dict:
        out = {"state": self.state, "D": self.D, "series": self.series.to_json()}
        if self.fit is not None:
            out["fit"] = self.fit.to_json()
            out["residual_zero"] = self.fit.residual.is_zero()
        return out


def graded_check(v: FockState, D: int) -> TraceReport:
    """Z of the L[0]-eigenstate lifted from v, fitted at weight deg v."""
    if not v.is_homogeneous() or not v:
        raise ValueError("graded_check needs a nonzero homogeneous state")
    weight = int(v.degree)
    a = bracket_lift(v)
    series = z_function(a, D)
    return TraceReport(str(v), D, series, quasimodular_fit(series, weight, D))


# -- limits of Z along Cauchy sequences ---------------------------------------------

@dataclass
class ZLimit:
    series: QSeries
    errors: list  # per-coefficient NormValue bounds on |Z(lim) - series|
    gaps: list    # per-coefficient norms of Z(a_last) - Z(a_prev)

    def to_json(self) -> dict:
        return {
            "series": self.series.to_json(),
            "errors": [e.to_json() for e in self.errors],
            "gaps": [g.to_json() for g in self.gaps],
        }


def z_limit(states: Sequence[FockState], D: int, p: int) -> ZLimit:
    """Z along a sup-norm Cauchy sequence.

    Z has integer structure constants, so |Z(x)_n| <= |x| coefficientwise and
    each coefficient error is bounded by the last state gap.
    """
    from .spectral import cauchy_verify

    report = cauchy_verify(states, p, 0)
    report.raise_if_not_cauchy()
    zs = [z_function(a, D) for a in states]
    last = zs[-1]
    bound = report.gaps[-1] if report.gaps else NormValue.zero(p)
    errors, gaps = [], []
    for n in range(D + 1):
        if len(zs) > 1:
            diff = last[n] - zs[-2][n]
            gaps.append(NormValue(p, padic_valuation(diff, p)))
        else:
            gaps.append(NormValue.zero(p))
        errors.append(NormValue(p, bound.exponent, bound="upper") if not bound.is_zero else bound)
    return ZLimit(last, errors, gaps)


def diagonal_trace(J: tuple, d: int) -> int:
    """Tr_{V_d} o(h^J) from diagonal entries only, via the normal-ordered expansion.

    o(h^J) = sum over m with sum(m) = 0 of prod_j C(-m_j-1, n_j-1) :h(m_1)...h(m_k):.
    A normal-ordered monomial has nonzero diagonal entries only when its
    creation and annihilation mode multisets coincide; on h^lam the entry is
    prod_j j^{c_j} (mu_j)_{c_j}. Independent of the kernel recursion.
    """
    from itertools import permutations, product

    k = len(J)
    if k == 0:
        return len(basis(d))
    if k % 2:
        return 0
    binom = kernels.binom
    half = k // 2
    total = 0
    for lam in basis(d):
        mult: dict = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        parts = sorted(mult)
        entry_sum = 0
        # choose which factors annihilate; values assigned from parts of lam
        for ann in _subsets(k, half):
            cre = [j for j in range(k) if j not in ann]
            for vals in product(parts, repeat=half):
                cnt: dict = {}
                for v in vals:
                    cnt[v] = cnt.get(v, 0) + 1
                if any(cnt[v] > mult[v] for v in cnt):
                    continue
                diag = 1
                for v, c in cnt.items():
                    f = 1
                    for i in range(c):
                        f *= mult[v] - i
                    diag *= v**c * f
                ann_w = 1
                for j, v in zip(ann, vals):
                    ann_w *= binom(-v - 1, J[j] - 1)
                if not ann_w:
                    continue
                for perm in set(permutations(vals)):
                    cre_w = 1
                    for j, v in zip(cre, perm):
                        cre_w *= binom(v - 1, J[j] - 1)
                        if not cre_w:
                            break
                    entry_sum += ann_w * cre_w * diag
        total += entry_sum
    return total


def _subsets(k: int, r: int):
    from itertools import combinations

    return combinations(range(k), r)
