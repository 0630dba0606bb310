"""Case registry: one entry per block of the summary table.

Each case binds a moduli class (r, chi as functions of n), the cohomology
conditions cutting out the stratum, a resolution type, a shape catalog for
the polarization-region solver, a stabilizer rule and constraint count for
the codimension formula, and presentation metadata.  The block records live
in ``data/registry.txt``; the shape catalogs are registered here by name.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Mapping

from .bundles import (
    MorphismType,
    StabilizerRule,
    aut_group_dim,
    hom_space_dim,
    parse_resolution_spec,
    stabilizer_dim,
)
from .cohomology import CohomologyTable, beilinson_terms, complete_table
from .hilbert import LinearClass
from .regions import Polarization, Region, Shape, admissible_region, _AffineSpace

__all__ = [
    "CaseSpec",
    "RegionSystem",
    "load_registry",
    "stratum_codim",
    "REGISTRY_ENV_VAR",
]

REGISTRY_ENV_VAR = "SHEAFMOD_REGISTRY"


@dataclass(frozen=True)
class RegionSystem:
    """Shape catalog plus solver options for one polarization region."""

    forbidden: tuple[Shape, ...]
    allowed: tuple[Shape, ...]
    extra_facets: tuple[tuple[tuple[int, ...], int, bool], ...] = ()
    clip_positivity: bool = True
    plot: tuple[tuple[str, Mapping[str, Fraction], Fraction], ...] | None = None


def _ev(expr: str, n: int) -> int:
    value = eval(expr, {"__builtins__": {}}, {"n": n})  # registry-controlled input
    return int(value)


@dataclass(frozen=True)
class CaseSpec:
    """Registry entry for one table block."""

    id: str
    r_expr: str
    chi_expr: str
    n_range: tuple[int, int]
    n_codim_range: tuple[int, int]
    conditions: str
    table_known: Mapping[str, str]
    resolution_spec: str
    kernel_twist: int | None
    stabilizer: StabilizerRule
    extra_constraints: int
    region_ref: str
    codim_expr: str
    quotient: tuple[tuple[str, str], ...]
    checks: tuple[str, ...]
    note: str

    def admits(self, n: int) -> bool:
        return self.n_range[0] <= n <= self.n_range[1]

    def ns(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)

    def moduli(self, n: int) -> LinearClass:
        return LinearClass(_ev(self.r_expr, n), _ev(self.chi_expr, n))

    def resolution(self, n: int) -> MorphismType:
        t, _ = parse_resolution_spec(_instantiate(self.resolution_spec, n))
        return t

    def cohomology_table(self, n: int) -> CohomologyTable:
        known = {k: _ev(v, n) for k, v in self.table_known.items()}
        return complete_table(self.moduli(n), known)

    def beilinson_type(self, n: int) -> tuple:
        """The four complex terms determined by the case's cohomology table."""
        return beilinson_terms(self.cohomology_table(n))

    def region_system(self, n: int) -> RegionSystem:
        return REGION_SYSTEMS[self.region_ref](n)

    def region(self, n: int) -> Region:
        sys = self.region_system(n)
        return admissible_region(
            self.resolution(n),
            sys.forbidden,
            sys.allowed,
            extra_facets=sys.extra_facets,
            clip_positivity=sys.clip_positivity,
            plot=sys.plot,
        )

    def codim(self, n: int) -> int:
        return stratum_codim(self, n)

    def quotient_kind(self, n: int) -> str:
        for kind, cond in self.quotient:
            if cond == "" or eval(cond, {"__builtins__": {}}, {"n": n}):
                return kind
        raise ValueError(f"no quotient entry applies at n={n}")

    def sample_polarization(self, n: int) -> Polarization:
        """An interior admissible polarization with all weights positive."""
        t = self.resolution(n)
        sys = self.region_system(n)
        clipped = admissible_region(
            t, sys.forbidden, sys.allowed,
            extra_facets=sys.extra_facets, clip_positivity=True,
        )
        if clipped.empty:
            raise ValueError(f"case {self.id} has no positive admissible weights")
        pt = clipped.interior_point()
        return _AffineSpace(t).polarization_at(pt)


def _instantiate(spec: str, n: int) -> str:
    """Replace [expr] placeholders by their integer values."""
    out = []
    i = 0
    while i < len(spec):
        if spec[i] == "[":
            j = spec.index("]", i)
            out.append(str(_ev(spec[i + 1 : j], n)))
            i = j + 1
        else:
            out.append(spec[i])
            i += 1
    return "".join(out)


def stratum_codim(case: CaseSpec, n: int) -> int:
    """Codimension of the stratum inside its moduli space.

    dim(stratum) = dim W_o - dim G + dim Stab with dim W_o the zeroed-block
    ambient dimension minus the case's extra coefficient constraints, and the
    moduli space has dimension r^2 + 1.
    """
    if not (case.n_codim_range[0] <= n <= case.n_codim_range[1]):
        raise ValueError(f"case {case.id} does not admit n={n}")
    t = case.resolution(n)
    dim_w = hom_space_dim(t) - case.extra_constraints
    dim_x = dim_w - aut_group_dim(t) + stabilizer_dim(case.stabilizer, n)
    codim = case.moduli(n).moduli_dim() - dim_x
    if codim < 0:
        raise ValueError(f"negative codimension for {case.id} at n={n}")
    return codim


# ---------------------------------------------------------------------------
# Shape catalogs per region reference
# ---------------------------------------------------------------------------


def _iv_linear(n: int) -> RegionSystem:
    # source O(-2) + (n-1)O(-1) -> nO; open interval (0, 1/n)
    forb = [Shape((m,), (1, n - 1 - m)) for m in range(1, n)]
    allo = [Shape((m,), (0, n - m)) for m in range(1, n)]
    return RegionSystem(tuple(forb), tuple(allo))


def _iv_two(n: int) -> RegionSystem:
    # 2O(-2) + (n-2)O(-1) -> nO; half-open [1/(2n), 1/n)
    forb = [Shape((m,), (2, n - 2 - m)) for m in range(1, n - 1)]
    forb += [Shape((m,), (1, n - m - 1)) for m in range(n // 2 + 1, n)]
    allo = [Shape((m,), (2, n - m - 1)) for m in range(n // 2 + 1, n)]
    allo += [Shape((m,), (1, n - m - 1)) for m in range(1, n // 2 + 1)]
    allo += [Shape((m,), (0, n - m)) for m in range(2, n)]
    return RegionSystem(tuple(forb), tuple(allo))


def _iv_three(n: int) -> RegionSystem:
    # 3O(-2) + (n-3)O(-1) -> nO; half-open [2/(3n), 1/n)
    forb = [Shape((m,), (3, n - 3 - m)) for m in range(1, n - 2)]
    forb += [Shape((m,), (2, n - m - 2)) for m in range(n // 3 + 1, n - 1)]
    forb += [Shape((m,), (1, n - m - 1)) for m in range(2 * n // 3 + 1, n)]
    allo = [Shape((m,), (3, n - m - 2)) for m in range(1, n - 1)]
    allo += [Shape((m,), (2, n - m - 2)) for m in range(1, n // 3 + 1)]
    allo += [Shape((m,), (1, n - m - 1)) for m in range(2, 2 * n // 3 + 1)]
    allo += [Shape((m,), (0, n - m)) for m in range(3, n)]
    return RegionSystem(tuple(forb), tuple(allo))


def _tri_two(n: int) -> RegionSystem:
    # 2O(-2) + (n-1)O(-1) -> O(-1) + nO; open triangle in (l1, m1)
    forb = [Shape((1, 0), (0, n - 1))]
    forb += [Shape((0, m), (2, n - 1 - m)) for m in range(1, n)]
    forb += [Shape((0, n), (1, 0))]
    forb += [Shape((1, m), (1, n - 1 - m)) for m in range(1, n)]
    allo = [Shape((0, m), (2, n - m)) for m in range(1, n + 1)]
    allo += [Shape((1, m), (0, n - m)) for m in range(1, n)]
    return RegionSystem(tuple(forb), tuple(allo))


def _pt_half(n: int) -> RegionSystem:
    # 2O(-2) -> 2O: the normalization pins l1 = 1/2
    return RegionSystem((), (), plot=(("l1", {}, Fraction(1, 2)),))


def _pt_third(n: int) -> RegionSystem:
    # 3O(-2) -> 3O: the normalization pins l1 = 1/3
    return RegionSystem((), (), plot=(("l1", {}, Fraction(1, 3)),))


def _quad_fourtwo(n: int) -> RegionSystem:
    # 2O(-2) + O(-1) -> O(-1) + 2O; open quadrilateral
    return RegionSystem(
        (Shape((0, 2), (1, 0)), Shape((0, 1), (2, 0))), ()
    )


def _seg_or_tri_omega1(n: int) -> RegionSystem:
    # 3O(-2) + (n-2)O(-1) -> O(-1) + nO; per-n region data
    if n == 3:
        return RegionSystem(
            (Shape((0, 3), (1, 0)), Shape((1, 0), (1, 1))),
            (Shape((1, 0), (3, 0)), Shape((0, 3), (0, 1))),
        )
    if n == 4:
        return RegionSystem(
            (Shape((0, 4), (1, 0)), Shape((1, 1), (3, 0)), Shape((1, 1), (0, 2))),
            (),
        )
    if n == 5:
        return RegionSystem(
            (Shape((0, 5), (1, 0)), Shape((1, 1), (2, 2)), Shape((1, 1), (0, 3))),
            (),
        )
    if n == 6:
        return RegionSystem(
            (Shape((0, 6), (1, 0)), Shape((1, 1), (0, 4)), Shape((0, 5), (1, 1))),
            (Shape((1, 2), (2, 2)), Shape((0, 4), (1, 2))),
        )
    raise ValueError(f"no region data for n={n}")


def _quad_74(n: int) -> RegionSystem:
    # 3O(-2) + 3O(-1) -> 2O(-1) + 4O; published quadrilateral extends beyond
    # the positive weight simplex, so positivity clipping is disabled and the
    # closing facet is the total-weight bound mu1 < 1
    return RegionSystem(
        (Shape((1, 4), (1, 0)), Shape((2, 0), (0, 3)), Shape((2, 1), (0, 2))),
        (),
        extra_facets=(((1, 0), 1, True),),
        clip_positivity=False,
    )


def _tri_63(n: int) -> RegionSystem:
    # 3O(-2) + 2O(-1) -> 2O(-1) + 3O; open triangle
    return RegionSystem(
        (Shape((0, 3), (2, 0)), Shape((0, 1), (3, 1)), Shape((2, 0), (0, 2))),
        (),
    )


def _iv_cubic(n: int) -> RegionSystem:
    # O(-3) + nO(-1) -> (n+1)O; open interval (0, 1/(n+1))
    forb = [Shape((m,), (1, n - m)) for m in range(1, n + 1)]
    allo = [Shape((m,), (0, n - m + 1)) for m in range(1, n + 1)]
    return RegionSystem(tuple(forb), tuple(allo))


def _iv_dual63(n: int) -> RegionSystem:
    # 4O(-2) -> 3O(-1) + O(1); open interval (0, 1/4) plotted in m2
    forb = [Shape((3 - m, 1), (m,)) for m in (1, 2, 3)]
    allo = [Shape((4 - m, 0), (m,)) for m in (1, 2, 3)]
    return RegionSystem(
        tuple(forb),
        tuple(allo),
        plot=(("m2", {"m1": Fraction(-3)}, Fraction(1)),),
    )


def _tri_n3(n: int) -> RegionSystem:
    # (n-2)O(-2) + 3O(-1) -> (n-3)O(-1) + 3O; open triangle
    return RegionSystem(
        (
            Shape((max(n - 4, 0), 3), (1, 0)),
            Shape((n - 3, 0), (0, 3)),
            Shape((0, 2), (n - 2, 0)),
        ),
        (),
    )


REGION_SYSTEMS: dict[str, Callable[[int], RegionSystem]] = {
    "iv_linear": _iv_linear,
    "iv_two": _iv_two,
    "iv_three": _iv_three,
    "tri_two": _tri_two,
    "pt_half": _pt_half,
    "pt_third": _pt_third,
    "quad_fourtwo": _quad_fourtwo,
    "seg_or_tri_omega1": _seg_or_tri_omega1,
    "quad_74": _quad_74,
    "tri_63": _tri_63,
    "iv_cubic": _iv_cubic,
    "iv_dual63": _iv_dual63,
    "tri_n3": _tri_n3,
}


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def _parse_range(text: str) -> tuple[int, int]:
    lo, hi = text.split("..")
    return int(lo), int(hi)


def _parse_case(block: list[str]) -> CaseSpec:
    fields: dict[str, str] = {}
    header = block[0]
    assert header.startswith("[case ") and header.endswith("]")
    case_id = header[len("[case "):-1]
    for line in block[1:]:
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    n_range = _parse_range(fields["n"])
    n_codim = _parse_range(fields.get("n_codim", fields["n"]))
    table_known = {}
    for part in fields["table"].split(","):
        k, _, v = part.partition("=")
        table_known[k.strip()] = v.strip()
    quotient = []
    for part in fields["quotient"].split(";"):
        part = part.strip()
        if ":" in part:
            kind, _, cond = part.partition(":")
            quotient.append((kind.strip(), cond.strip()))
        else:
            quotient.append((part, ""))
    kernel = fields.get("kernel", "").strip()
    return CaseSpec(
        id=case_id,
        r_expr=fields["r"],
        chi_expr=fields["chi"],
        n_range=n_range,
        n_codim_range=n_codim,
        conditions=fields["conditions"],
        table_known=table_known,
        resolution_spec=fields["resolution"],
        kernel_twist=int(kernel) if kernel else None,
        stabilizer=StabilizerRule(fields["stabilizer"]),
        extra_constraints=int(fields["extra_constraints"]),
        region_ref=fields["region"],
        codim_expr=fields["codim"],
        quotient=tuple(quotient),
        checks=tuple(
            c.strip() for c in fields.get("checks", "").split(",") if c.strip()
        ),
        note=fields.get("note", ""),
    )


@lru_cache(maxsize=None)
def load_registry(path: str | None = None) -> tuple[CaseSpec, ...]:
    """Load the case registry; honours the SHEAFMOD_REGISTRY override."""
    if path is None:
        path = os.environ.get(REGISTRY_ENV_VAR)
    if path is None:
        text = (
            resources.files("sheafmod").joinpath("data/registry.txt").read_text()
        )
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    cases: list[CaseSpec] = []
    block: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.startswith("[case "):
            if block:
                cases.append(_parse_case(block))
            block = [line.strip()]
        else:
            block.append(line.strip())
    if block:
        cases.append(_parse_case(block))
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate case ids in the registry")
    for c in cases:
        if c.region_ref not in REGION_SYSTEMS:
            raise ValueError(f"unknown region reference {c.region_ref!r}")
    return tuple(cases)


def case_by_id(case_id: str, path: str | None = None) -> CaseSpec:
    for c in load_registry(path):
        if c.id == case_id:
            return c
    raise KeyError(f"no case {case_id!r} in the registry")
