"""Closed-form bounds: query lower bounds, counting tail, STL insecurity and unreliability."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb


@dataclass
class BoundParams:
    """Parameter bundle shared by bound calculators and reports.

    ``t, d, q, lam`` describe adversary resources and are carried as report
    metadata only.
    """

    S: int | None = None
    H: int | None = None
    w: int = 1
    l: int = 1
    k: int | None = None
    N: int | None = None
    rho: float = 0.0
    eps: float = 0.0
    kappa: int = 128
    n: int = 128
    resources: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.S is not None and self.H is not None:
            if not 0 < self.H <= self.S:
                raise ValueError("need 0 < H <= S")

    @property
    def h(self) -> float:
        return math.log2(self.H)

    @property
    def R(self) -> float:
        if self.H >= self.S:
            raise ValueError("R = S / (S - H) needs H < S")
        return self.S / (self.S - self.H)


def support_ratio(S: int, H: int) -> float:
    if H >= S:
        raise ValueError("R = S / (S - H) needs H < S")
    return S / (S - H)


def lower_bound_queries(w: int, rho: float, eps: float, R: float) -> float:
    """Expected queries per symbol are at least ``(2**w / e) * (1/2 - rho - eps * R)``."""
    return max(0.0, 2.0 ** w / math.e * (0.5 - rho - eps * R))


def lower_bound_queries_bounded(w: int, rho: float, eps: float, R: float, prf_terms: float = 0.0) -> float:
    """Computationally bounded version; ``prf_terms`` is the caller-supplied PRF slack."""
    if prf_terms < 0:
        raise ValueError("prf_terms must be nonnegative")
    return max(0.0, 2.0 ** w / math.e * (0.5 - rho - R * eps - (R + 1) * prf_terms))


@dataclass(frozen=True)
class TailBound:
    exact: Fraction
    upper: float

    @property
    def exact_float(self) -> float:
        return float(self.exact)


def lemma_tail_bound(N: int, l: int, w: int) -> TailBound:
    """``C(N, l) / 2**(l w)`` and the weaker ``(N e / (l 2**w))**l``.

    The fraction of ``lw``-bit messages with an encoding of weight at most
    ``N`` is at most the first value.
    """
    if l < 1 or N < l:
        raise ValueError("need 1 <= l <= N")
    exact = Fraction(comb(N, l), 2 ** (l * w))
    upper = (N * math.e / (l * 2 ** w)) ** l
    if not exact < upper:
        raise ArithmeticError(f"tail bound ordering violated at N={N}, l={l}, w={w}")
    return TailBound(exact, upper)


def stl_insecurity_bound(h: float, w: int, l: int, k: int) -> float:
    """``2**-h (l(l+1) 4**w - l(l+3) 2**w + 2l) + 2l (1 - 2**-w)**k``."""
    R = 2 ** w
    return 2.0 ** -h * (l * (l + 1) * R * R - l * (l + 3) * R + 2 * l) + 2 * l * (1 - 1 / R) ** k


def se2_fail_bound(h: float, w: int, l: int, k: int) -> float:
    """Upper bound on the probability that the aborting hybrid outputs Fail."""
    R = 2 ** w
    p = 2.0 ** -h
    return p * (R * R / 2 * (l + 1) * l - R / 2 * (l + 3) * l + l) + l * ((R - 1) / R) ** k


def stl_unreliability_bound(h: float, w: int, l: int, k: int) -> float:
    """``l (2**w exp(-2**(h-2w-1)) + exp(-k 2**(-w-1)))``."""
    return l * (2 ** w * math.exp(-(2.0 ** (h - 2 * w - 1))) + math.exp(-(2.0 ** (-w - 1)) * k))


def stf_unreliability_bound(h: float, w: int, l: int = 1) -> float:
    """Union bound ``l * 2**(w - h)`` on message failure for the stateful system."""
    return l * 2.0 ** (w - h)


def stf_stateless_unreliability_bound(h: float, w: int, l: int) -> float:
    return l * l * 2.0 ** (w - h)
