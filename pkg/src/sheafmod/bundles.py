"""Direct sums of line bundles, morphism types, and dimension combinatorics.

A morphism type is the ambient space of matrices between two decomposable
bundles, together with the blocks that are forced to vanish identically.
The dimension formulas here (Hom spaces, automorphism groups, stabilizers)
feed the stratum-codimension calculus over the case registry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


__all__ = [
    "BundleSum",
    "MorphismType",
    "StabilizerRule",
    "hom_dim",
    "hom_space_dim",
    "aut_group_dim",
    "stabilizer_dim",
    "quotient_dim_crosscheck",
    "parse_resolution_spec",
    "format_resolution_spec",
]


@dataclass(frozen=True)
class BundleSum:
    """Ordered direct sum of line-bundle twists with multiplicities.

    Twists are strictly increasing so that there are no nonzero maps from a
    later summand type to an earlier one.
    """

    summands: tuple[tuple[int, int], ...]

    def __init__(self, summands: Iterable[tuple[int, int]]) -> None:
        ss = tuple((int(d), int(m)) for d, m in summands)
        if not ss:
            raise ValueError("empty bundle sum")
        for _, m in ss:
            if m < 1:
                raise ValueError("multiplicities must be >= 1")
        twists = [d for d, _ in ss]
        if twists != sorted(set(twists)):
            raise ValueError("twists must be strictly increasing")
        object.__setattr__(self, "summands", ss)

    @property
    def ntypes(self) -> int:
        return len(self.summands)

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.summands)

    def twists(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.summands)

    def mults(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.summands)

    def dual(self) -> "BundleSum":
        """Apply d -> -d-2 to every twist (reverses the order)."""
        return BundleSum(sorted(((-d - 2, m) for d, m in self.summands)))

    def __str__(self) -> str:
        return "+".join(f"{m}O({d})" for d, m in self.summands)


@dataclass(frozen=True)
class MorphismType:
    """Source and target bundle sums plus blocks forced identically zero.

    ``zeroed`` holds 0-based pairs (source type index, target type index).
    Scalar blocks (equal twists) are the ones zeroed in every registry case.
    """

    source: BundleSum
    target: BundleSum
    zeroed: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for i, l in self.zeroed:
            if not (0 <= i < self.source.ntypes and 0 <= l < self.target.ntypes):
                raise ValueError(f"zeroed block ({i},{l}) out of range")
            if self.target.summands[l][0] < self.source.summands[i][0]:
                raise ValueError(
                    f"block ({i},{l}) is already impossible (negative degree)"
                )

    @classmethod
    def make(
        cls,
        source: Sequence[tuple[int, int]],
        target: Sequence[tuple[int, int]],
        zeroed: Iterable[tuple[int, int]] = (),
    ) -> "MorphismType":
        return cls(BundleSum(source), BundleSum(target), frozenset(zeroed))

    @classmethod
    def with_scalar_blocks_zeroed(
        cls, source: Sequence[tuple[int, int]], target: Sequence[tuple[int, int]]
    ) -> "MorphismType":
        """Zero every block whose source and target twists agree."""
        src, tgt = BundleSum(source), BundleSum(target)
        zeroed = frozenset(
            (i, l)
            for i, (d, _) in enumerate(src.summands)
            for l, (e, _) in enumerate(tgt.summands)
            if d == e
        )
        return cls(src, tgt, zeroed)

    def is_zeroed(self, i: int, l: int) -> bool:
        return (i, l) in self.zeroed

    def dual(self) -> "MorphismType":
        """Swap source and target with twists mapped by d -> -d-2."""
        nsrc = self.source.ntypes
        ntgt = self.target.ntypes
        # position j from the end maps to position j from the start
        zeroed = frozenset(
            (ntgt - 1 - l, nsrc - 1 - i) for i, l in self.zeroed
        )
        return MorphismType(self.target.dual(), self.source.dual(), zeroed)

    def __str__(self) -> str:
        s = f"{self.source} -> {self.target}"
        if self.zeroed:
            s += " [zero blocks: " + ",".join(
                f"({i + 1},{l + 1})" for i, l in sorted(self.zeroed)
            ) + "]"
        return s


class StabilizerRule(Enum):
    """Dimension of the isotropy group of a generic point, as a rule in n."""

    TRIVIAL = "trivial"
    N_MINUS_1 = "n-1"
    N_MINUS_2 = "n-2"
    TWO_N_MINUS_2 = "2n-2"
    FOUR_N_MINUS_11 = "4n-11"


def hom_dim(a: int, b: int) -> int:
    """Dimension (b-a+1)(b-a+2)/2 of Hom(O(a), O(b)) on the plane; 0 if b < a."""
    if b < a:
        return 0
    d = b - a
    return (d + 1) * (d + 2) // 2


def hom_space_dim(t: MorphismType) -> int:
    """Ambient dimension of the morphism space, zeroed blocks excluded."""
    total = 0
    for i, (d, mi) in enumerate(t.source.summands):
        for l, (e, nl) in enumerate(t.target.summands):
            if t.is_zeroed(i, l):
                continue
            total += mi * nl * hom_dim(d, e)
    return total


def _aut_dim(b: BundleSum) -> int:
    """dim Aut of a decomposable bundle: GL blocks plus lower-triangular maps."""
    total = sum(m * m for _, m in b.summands)
    for i, (di, mi) in enumerate(b.summands):
        for j, (dj, mj) in enumerate(b.summands):
            if i < j:
                total += mi * mj * hom_dim(di, dj)
    return total


def aut_group_dim(t: MorphismType) -> int:
    """dim Aut(source) + dim Aut(target) - 1 (homotheties act trivially)."""
    return _aut_dim(t.source) + _aut_dim(t.target) - 1


def stabilizer_dim(rule: StabilizerRule, n: int) -> int:
    values = {
        StabilizerRule.TRIVIAL: 0,
        StabilizerRule.N_MINUS_1: n - 1,
        StabilizerRule.N_MINUS_2: n - 2,
        StabilizerRule.TWO_N_MINUS_2: 2 * n - 2,
        StabilizerRule.FOUR_N_MINUS_11: 4 * n - 11,
    }
    v = values[rule]
    if v < 0:
        raise ValueError(f"stabilizer rule {rule.value} is negative at n={n}")
    return v


def quotient_dim_crosscheck(family: str, n: int) -> bool:
    """Fiber-bundle dimension identity for the two quotient constructions.

    ``family`` is "linear" (source O(-2)+(n-1)O(-1) -> nO, fiber P^(3n+2),
    base of dimension n^2-n) or "cubic" (source O(-3)+nO(-1) -> (n+1)O,
    fiber P^(4n+9), base of dimension n^2+n).
    """
    if family == "linear":
        if n < 1:
            raise ValueError("n must be >= 1")
        src = [(-2, 1)] + ([(-1, n - 1)] if n > 1 else [])
        t = MorphismType.make(src, [(0, n)])
        fiber, base = 3 * n + 2, n * n - n
    elif family == "cubic":
        if not 1 <= n <= 3:
            raise ValueError("n must be in 1..3")
        t = MorphismType.make([(-3, 1), (-1, n)], [(0, n + 1)])
        fiber, base = 4 * n + 9, n * n + n
    else:
        raise ValueError(f"unknown family {family!r}")
    return fiber + base == hom_space_dim(t) - aut_group_dim(t)


_SUMMAND_RE = re.compile(r"\((-?\d+)\)x(\d+)")


def _parse_sum(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        m = _SUMMAND_RE.fullmatch(part.strip())
        if m is None:
            raise ValueError(f"bad summand {part!r}; expected e.g. (-2)x3")
        twist, mult = int(m.group(1)), int(m.group(2))
        if mult > 0:  # zero multiplicities drop out of the sum
            out.append((twist, mult))
    return out


def parse_resolution_spec(text: str) -> tuple[MorphismType, int | None]:
    """Parse ``src=(-2)x1,(-1)x2 tgt=(0)x3 [ker=(-2)] [zero=(i,l),...]``.

    Returns the morphism type and the optional kernel twist.  Blocks are only
    zeroed when an explicit zero= list is given (the registry always spells
    out its scalar blocks).
    """
    src = tgt = None
    kernel = None
    zeroed: list[tuple[int, int]] | None = None
    for token in text.split():
        if token.startswith("src="):
            src = _parse_sum(token[4:])
        elif token.startswith("tgt="):
            tgt = _parse_sum(token[4:])
        elif token.startswith("ker="):
            m = re.fullmatch(r"\((-?\d+)\)", token[4:])
            if m is None:
                raise ValueError(f"bad kernel spec {token!r}")
            kernel = int(m.group(1))
        elif token.startswith("zero="):
            zeroed = []
            for m in re.finditer(r"\((\d+),(\d+)\)", token[5:]):
                zeroed.append((int(m.group(1)) - 1, int(m.group(2)) - 1))
        else:
            raise ValueError(f"unknown token {token!r} in resolution spec")
    if src is None or tgt is None:
        raise ValueError("resolution spec needs both src= and tgt=")
    t = MorphismType.make(src, tgt, zeroed or ())
    return t, kernel


def format_resolution_spec(t: MorphismType, kernel: int | None = None) -> str:
    src = ",".join(f"({d})x{m}" for d, m in t.source.summands)
    tgt = ",".join(f"({d})x{m}" for d, m in t.target.summands)
    out = f"src={src} tgt={tgt}"
    if kernel is not None:
        out += f" ker=({kernel})"
    if t.zeroed:
        out += " zero=" + ",".join(
            f"({i + 1},{l + 1})" for i, l in sorted(t.zeroed)
        )
    return out
