"""The rank-one Heisenberg Fock space over Q.

A basis vector h(-n1)...h(-nk)1 is indexed by the partition (n1, ..., nk),
stored as a non-increasing tuple; the empty tuple is the vacuum.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

from .scalar import (
    INF,
    NormValue,
    check_prime,
    padic_valuation,
    scalar_to_str,
    to_scalar,
)

Partition = tuple  # tuple[int, ...], non-increasing, positive parts

VACUUM: Partition = ()


def as_partition(parts: Iterable[int]) -> Partition:
    parts = tuple(sorted((int(n) for n in parts), reverse=True))
    if parts and parts[-1] <= 0:
        raise ValueError(f"partition parts must be positive: {parts}")
    return parts


def _gen_partitions(d: int, largest: int) -> Iterator[Partition]:
    if d == 0:
        yield ()
        return
    for first in range(min(d, largest), 0, -1):
        for rest in _gen_partitions(d - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def basis(d: int) -> tuple[Partition, ...]:
    """All partitions of d in reverse-lexicographic order."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return tuple(_gen_partitions(d, d))


@lru_cache(maxsize=None)
def basis_index(d: int) -> dict:
    return {lam: i for i, lam in enumerate(basis(d))}


def _sort_key(item):
    lam = item[0]
    return (-sum(lam), tuple(-n for n in lam))


class FockState:
    """A finite linear combination of basis monomials with exact coefficients.

    Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping, Iterable, None] = None):
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for parts, c in items:
                lam = as_partition(parts)
                c = to_scalar(c)
                clean[lam] = clean.get(lam, 0) + c
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, terms: dict) -> "FockState":
        # terms must already be canonical partitions with nonzero Fraction/int values
        obj = cls.__new__(cls)
        obj._terms = {k: Fraction(v) for k, v in terms.items() if v}
        return obj

    @classmethod
    def vacuum(cls) -> "FockState":
        return cls._raw({(): 1})

    @classmethod
    def monomial(cls, parts: Iterable[int], coeff=1) -> "FockState":
        return cls({as_partition(parts): coeff})

    @classmethod
    def zero(cls) -> "FockState":
        return cls._raw({})

    # -- mapping-ish access
    def items(self):
        return sorted(self._terms.items(), key=_sort_key)

    def coeff(self, parts) -> Fraction:
        return self._terms.get(as_partition(parts), Fraction(0))

    def __iter__(self):
        return iter(lam for lam, _ in self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    # -- arithmetic
    def __add__(self, other: "FockState") -> "FockState":
        if not isinstance(other, FockState):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return FockState._raw(out)

    def __neg__(self) -> "FockState":
        return FockState._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "FockState") -> "FockState":
        if not isinstance(other, FockState):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "FockState":
        if isinstance(c, FockState):
            return NotImplemented
        c = to_scalar(c)
        if c == 0:
            return FockState.zero()
        return FockState._raw({k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockState):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- grading
    @property
    def degree(self) -> Union[int, float]:
        if not self._terms:
            return -INF
        return max(sum(lam) for lam in self._terms)

    def components(self) -> dict[int, "FockState"]:
        out: dict = {}
        for lam, c in self._terms.items():
            out.setdefault(sum(lam), {})[lam] = c
        return {d: FockState._raw(t) for d, t in sorted(out.items())}

    def is_homogeneous(self) -> bool:
        return len({sum(lam) for lam in self._terms}) <= 1

    def select(self, pred) -> "FockState":
        return FockState._raw({k: v for k, v in self._terms.items() if pred(k)})

    # -- serialization
    def to_json(self) -> list:
        return [{"partition": list(lam), "coeff": scalar_to_str(c)} for lam, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "FockState":
        if isinstance(data, str):
            data = json.loads(data)
        return cls((tuple(t["partition"]), Fraction(t["coeff"])) for t in data)

    def __repr__(self):
        from .expr import format_state

        return f"FockState({format_state(self)!r})"

    def __str__(self):
        from .expr import format_state

        return format_state(self)


# -- norms --------------------------------------------------------------------

@dataclass(frozen=True)
class RExponent:
    """R = p^rho; rho = 0 gives the sup-norm.

    ``prime`` is set only for spectral-grade exponents built with
    :meth:`spectral`, which enforce 1/p < rho < 1/(p-1).
    """

    rho: Fraction
    prime: Union[int, None] = None

    def __post_init__(self):
        object.__setattr__(self, "rho", to_scalar(self.rho))
        if self.rho < 0:
            raise ValueError("rho must be non-negative")

    @classmethod
    def spectral(cls, rho, p: int) -> "RExponent":
        check_prime(p)
        rho = to_scalar(rho)
        if not Fraction(1, p) < rho < Fraction(1, p - 1):
            raise ValueError(f"rho = {rho} outside the window 1/{p} < rho < 1/{p - 1}")
        return cls(rho, p)

    def in_spectral_window(self, p: int) -> bool:
        return Fraction(1, p) < self.rho < Fraction(1, p - 1)


def _as_rexp(rho) -> RExponent:
    return rho if isinstance(rho, RExponent) else RExponent(to_scalar(rho))


def r_norm(a: FockState, p: int, rho=0) -> NormValue:
    """sup_I |a_I| p^(rho |I|), as an exact NormValue."""
    check_prime(p)
    rho = _as_rexp(rho).rho
    e = INF
    for lam, c in a._terms.items():
        e = min(e, padic_valuation(c, p) - sum(lam) * rho)
    return NormValue(p, e)


def sup_norm(a: FockState, p: int) -> NormValue:
    return r_norm(a, p, 0)


@dataclass(frozen=True)
class TruncatedState:
    """Finite window of an element of a completion: ``body`` plus a certified
    bound on the R-norm of everything above ``degree_cap``."""

    body: FockState
    degree_cap: int
    tail_bound: NormValue


def truncate(a: FockState, D: int, p: int, rho=0) -> TruncatedState:
    if D < 0:
        raise ValueError("degree cap must be non-negative")
    body = a.select(lambda lam: sum(lam) <= D)
    tail = a.select(lambda lam: sum(lam) > D)
    return TruncatedState(body, D, r_norm(tail, p, rho))
