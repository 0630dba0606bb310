"""Cohomology-table bookkeeping, four-term complex synthesis, and duality.

A cohomology table holds the six numbers h^0/h^1 of F(-1), F and
F (x) Omega^1(1) for a sheaf class (r, chi).  The three Euler differences

    h0m1 - h1m1 = chi - r
    h0   - h1   = chi
    h0om - h1om = 2*chi - r

pin each pair once one member is known; the third difference follows from
the restricted Euler sequence 0 -> Omega^1(1) -> 3O -> O(1) -> 0, which gives
chi(F (x) Omega^1(1)) = 3*chi(F) - chi(F(1)) = 2*chi - r.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .bundles import BundleSum, MorphismType
from .hilbert import HilbertPolynomial, LinearClass, hilbert_of_twist

__all__ = [
    "CohomologyTable",
    "complete_table",
    "beilinson_terms",
    "euler_consistency",
    "serre_dual_table",
    "dual_stratum",
    "dual_type",
]

FIELDS = ("h0m1", "h1m1", "h0", "h1", "h0om", "h1om")


@dataclass(frozen=True)
class CohomologyTable:
    """h^0/h^1 of F(-1), F, F(x)Omega^1(1) for a class (r, chi)."""

    klass: LinearClass
    h0m1: int
    h1m1: int
    h0: int
    h1: int
    h0om: int
    h1om: int

    def __post_init__(self) -> None:
        r, chi = self.klass.r, self.klass.chi
        for name in FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.h0m1 - self.h1m1 != chi - r:
            raise ValueError("h0m1 - h1m1 must equal chi - r")
        if self.h0 - self.h1 != chi:
            raise ValueError("h0 - h1 must equal chi")
        if self.h0om - self.h1om != 2 * chi - r:
            raise ValueError("h0om - h1om must equal 2*chi - r")

    def rows(self) -> list[tuple[str, int, int]]:
        return [
            ("F(-1)", self.h0m1, self.h1m1),
            ("F", self.h0, self.h1),
            ("F.Omega1(1)", self.h0om, self.h1om),
        ]


_PAIRS = (("h0m1", "h1m1"), ("h0", "h1"), ("h0om", "h1om"))


def _pair_difference(klass: LinearClass, pair: tuple[str, str]) -> int:
    r, chi = klass.r, klass.chi
    return {"h0m1": chi - r, "h0": chi, "h0om": 2 * chi - r}[pair[0]]


def complete_table(klass: LinearClass, known: Mapping[str, int]) -> CohomologyTable:
    """Fill a partial table using the three difference identities.

    Each h^0/h^1 pair needs one known member; inconsistent or underdetermined
    input is rejected with the offending pair named.
    """
    for name in known:
        if name not in FIELDS:
            raise ValueError(f"unknown table entry {name!r}")
    values: dict[str, int] = {}
    for hi, lo in _PAIRS:
        diff = _pair_difference(klass, (hi, lo))
        if hi in known and lo in known:
            if known[hi] - known[lo] != diff:
                raise ValueError(f"pair ({hi},{lo}) is inconsistent with (r,chi)")
            values[hi], values[lo] = known[hi], known[lo]
        elif hi in known:
            values[hi] = known[hi]
            values[lo] = known[hi] - diff
        elif lo in known:
            values[lo] = known[lo]
            values[hi] = known[lo] + diff
        else:
            raise ValueError(f"pair ({hi},{lo}) is underdetermined")
        if values[hi] < 0 or values[lo] < 0:
            raise ValueError(f"pair ({hi},{lo}) would go negative")
    return CohomologyTable(klass, **values)


def beilinson_terms(
    t: CohomologyTable,
) -> tuple[BundleSum | None, BundleSum | None, BundleSum | None, BundleSum | None]:
    """Terms (C^-2, C^-1, C^0, C^1) of the four-term complex built from the
    table; zero terms come back as None."""

    def build(parts: list[tuple[int, int]]) -> BundleSum | None:
        parts = [(d, m) for d, m in parts if m > 0]
        return BundleSum(sorted(parts)) if parts else None

    c_m2 = build([(-2, t.h0m1)])
    c_m1 = build([(-1, t.h0om), (-2, t.h1m1)])
    c_0 = build([(0, t.h0), (-1, t.h1om)])
    c_1 = build([(0, t.h1)])
    return (c_m2, c_m1, c_0, c_1)


def euler_consistency(
    terms: tuple[BundleSum | None, ...], klass: LinearClass
) -> bool:
    """P(C^0) - P(C^-1) + P(C^-2) - P(C^1) = r*t + chi, exactly."""

    def poly(b: BundleSum | None) -> HilbertPolynomial:
        acc = HilbertPolynomial.zero()
        if b is not None:
            for d, m in b.summands:
                acc = acc + hilbert_of_twist(d).scale(m)
        return acc

    c_m2, c_m1, c_0, c_1 = terms
    total = poly(c_0) - poly(c_m1) + poly(c_m2) - poly(c_1)
    return total == klass.polynomial()


def serre_dual_table(t: CohomologyTable) -> CohomologyTable:
    """Table of the dual sheaf class (r, r - chi): h^0(F^D(-1)) = h^1(F),
    h^1(F^D(-1)) = h^0(F), h^0(F^D) = h^1(F(-1)), h^1(F^D) = h^0(F(-1)),
    and the Omega pair swaps."""
    return CohomologyTable(
        t.klass.dual(),
        h0m1=t.h1,
        h1m1=t.h0,
        h0=t.h1m1,
        h1=t.h0m1,
        h0om=t.h1om,
        h1om=t.h0om,
    )


def dual_stratum(conds: tuple[int, int, int]) -> tuple[str, tuple[int, int, int]]:
    """Map conditions (h0(F(-1)), h0(F), h0(F.Om1(1))) = (a, b, c) on one
    moduli space to the dual conditions (h1(F), h1(F(-1)), h1(F.Om1(1))) =
    (a, b, c) on the dual space.  Involution by construction."""
    a, b, c = conds
    return ("h1(F)=%d, h1(F(-1))=%d, h1(F.Omega1(1))=%d" % (a, b, c), (a, b, c))


def dual_type(t: MorphismType) -> MorphismType:
    """Swap source and target, map each twist d -> -d-2, transport zeroed blocks."""
    return t.dual()
