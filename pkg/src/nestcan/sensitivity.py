"""Exact influences, average sensitivity and the WNC sensitivity bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .canalization import recognize_wnc
from .funcspace import MvFunction, ProductDomain

__all__ = [
    "SensitivityReport",
    "influence_exact",
    "influences",
    "average_sensitivity",
    "kappa",
    "wnc_bound",
    "generic_bound",
    "check_theorem",
    "boundary_edge_fraction",
]


def influence_exact(f: MvFunction, i: int) -> Fraction:
    """``E_x[Var_{y_i} f]`` under uniform measures, in exact arithmetic.

    With ``f = w / d`` and fibres of size k along coordinate i, each fibre has
    variance ``(k * sum w^2 - (sum w)^2) / (k d)^2``; the influence is the mean
    of that over fibres.
    """
    if not 1 <= i <= f.domain.arity:
        raise ValueError(f"coordinate {i} out of range 1..{f.domain.arity}")
    ax = i - 1
    k = f.domain.shape[ax]
    if k == 1:
        return Fraction(0)
    w, d = f.scaled
    s1 = w.sum(axis=ax)
    s2 = (w * w).sum(axis=ax)
    num = int((k * s2 - s1 * s1).sum())
    fibres = f.domain.size // k
    return Fraction(num, fibres * k * k * d * d)


def influences(f: MvFunction) -> list[Fraction]:
    return [influence_exact(f, i) for i in range(1, f.domain.arity + 1)]


def average_sensitivity(f: MvFunction) -> Fraction:
    return sum(influences(f), Fraction(0))


def kappa(domain: ProductDomain) -> Fraction:
    """``max_i (k_i - 1)/k_i`` over the active cardinalities (0 for arity 0)."""
    return max((Fraction(k - 1, k) for k in domain.shape), default=Fraction(0))


def wnc_bound(M, kappa_value) -> Fraction:
    M, kappa_value = Fraction(M), Fraction(kappa_value)
    if M < 0 or not 0 <= kappa_value < 1:
        raise ValueError("need M >= 0 and 0 <= kappa < 1")
    return M * M / (4 * (1 - kappa_value))


def generic_bound(n: int, M) -> Fraction:
    M = Fraction(M)
    return n * M * M / 4


@dataclass(frozen=True)
class SensitivityReport:
    """Bound fields are ``None`` when not applicable (negative values, or not WNC for ``bound_holds``)."""

    influences: tuple[Fraction, ...]
    average_sensitivity: Fraction
    M: Fraction
    m: Fraction
    kappa: Fraction
    wnc_bound: Optional[Fraction]
    generic_bound: Optional[Fraction]
    is_wnc: bool
    bound_holds: Optional[bool]

    @property
    def ratio(self) -> Optional[Fraction]:
        """``AS / bound``, exposed for empirical exploration only."""
        if self.wnc_bound is None or self.wnc_bound == 0:
            return None
        return self.average_sensitivity / self.wnc_bound

    @property
    def falsified(self) -> bool:
        return self.is_wnc and self.bound_holds is False

    def to_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "influences": [str(x) for x in self.influences],
            "average_sensitivity": str(self.average_sensitivity),
            "M": str(self.M),
            "m": str(self.m),
            "kappa": str(self.kappa),
            "wnc_bound": s(self.wnc_bound),
            "generic_bound": s(self.generic_bound),
            "is_wnc": self.is_wnc,
            "bound_holds": self.bound_holds,
            "ratio": s(self.ratio),
        }


def check_theorem(f: MvFunction, mode: str = "greedy") -> SensitivityReport:
    infl = tuple(influences(f))
    total = sum(infl, Fraction(0))
    M, m = f.max, f.min
    kap = kappa(f.domain)
    is_wnc = recognize_wnc(f, mode) is not None
    if m < 0:
        wb = gb = None
        holds = None
    else:
        wb = wnc_bound(M, kap)
        gb = generic_bound(f.domain.arity, M)
        holds = (total <= wb) if is_wnc else None
    return SensitivityReport(infl, total, M, m, kap, wb, gb, is_wnc, holds)


def boundary_edge_fraction(f: MvFunction, i: int) -> Fraction:
    """Fraction of direction-i edges of the Boolean cube whose endpoints get different values."""
    if any(k != 2 for k in f.domain.shape):
        raise ValueError("boundary edges need every coordinate to have exactly 2 values")
    if len(set(f.values)) > 2:
        raise ValueError("boundary edges need a two-valued function")
    if not 1 <= i <= f.domain.arity:
        raise ValueError(f"coordinate {i} out of range 1..{f.domain.arity}")
    codes, _ = f.codes
    lo, hi = np.take(codes, 0, axis=i - 1), np.take(codes, 1, axis=i - 1)
    return Fraction(int(np.count_nonzero(lo != hi)), lo.size)
