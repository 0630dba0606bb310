"""Polarizations, zero-submatrix shapes, and admissible polarization regions.

A polarization assigns a positive rational weight to every summand type of a
morphism type, normalized so the weighted multiplicities sum to 1 on both
sides.  A shape records how many rows and columns of each type a zero
submatrix occupies; each shape yields one linear inequality between row
weights and complementary column weights.  Forbidden shapes contribute strict
inequalities, allowed shapes weak ones, and the admissible region is the
exact rational polytope cut out by the resulting half-planes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .bundles import MorphismType

__all__ = [
    "Polarization",
    "Shape",
    "Constraint",
    "Facet",
    "Region",
    "enumerate_shapes",
    "shape_inequality",
    "classify_shapes",
    "admissible_region",
    "dual_polarization",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Polarization:
    """Positive weights (one per source summand type, one per target type).

    Normalization: sum(m_i * lambda_i) = 1 = sum(n_l * mu_l).
    """

    lambdas: tuple[Fraction, ...]
    mus: tuple[Fraction, ...]

    def __init__(self, lambdas: Iterable, mus: Iterable) -> None:
        object.__setattr__(self, "lambdas", tuple(_frac(x) for x in lambdas))
        object.__setattr__(self, "mus", tuple(_frac(x) for x in mus))

    def validate_for(self, t: MorphismType) -> None:
        if len(self.lambdas) != t.source.ntypes or len(self.mus) != t.target.ntypes:
            raise ValueError("polarization arity does not match the morphism type")
        if any(x <= 0 for x in self.lambdas) or any(x <= 0 for x in self.mus):
            raise ValueError("polarization weights must be strictly positive")
        if sum(m * l for (_, m), l in zip(t.source.summands, self.lambdas)) != 1:
            raise ValueError("source weights are not normalized")
        if sum(n * m_ for (_, n), m_ in zip(t.target.summands, self.mus)) != 1:
            raise ValueError("target weights are not normalized")

    def __str__(self) -> str:
        ls = ",".join(str(x) for x in self.lambdas)
        ms = ",".join(str(x) for x in self.mus)
        return f"({ls};{ms})"


@dataclass(frozen=True)
class Shape:
    """Row counts (per target type) and column counts (per source type) of a
    potential zero submatrix."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __init__(self, rows: Iterable[int], cols: Iterable[int]) -> None:
        object.__setattr__(self, "rows", tuple(int(b) for b in rows))
        object.__setattr__(self, "cols", tuple(int(a) for a in cols))
        if not any(self.rows) or not any(self.cols):
            raise ValueError("a shape needs at least one row and one column")
        if any(b < 0 for b in self.rows) or any(a < 0 for a in self.cols):
            raise ValueError("shape counts must be nonnegative")

    def validate_for(self, t: MorphismType) -> None:
        if len(self.rows) != t.target.ntypes or len(self.cols) != t.source.ntypes:
            raise ValueError("shape arity does not match the morphism type")
        for b, (_, n) in zip(self.rows, t.target.summands):
            if b > n:
                raise ValueError("shape row count exceeds multiplicity")
        for a, (_, m) in zip(self.cols, t.source.summands):
            if a > m:
                raise ValueError("shape column count exceeds multiplicity")

    def complement(self, t: MorphismType) -> "Shape":
        rows = tuple(n - b for b, (_, n) in zip(self.rows, t.target.summands))
        cols = tuple(m - a for a, (_, m) in zip(self.cols, t.source.summands))
        return Shape(rows, cols)

    def __str__(self) -> str:
        return f"rows{self.rows}xcols{self.cols}"


def enumerate_shapes(t: MorphismType) -> list[Shape]:
    """All shapes with nonempty row and column sets, in lexicographic order."""
    row_ranges = [range(n + 1) for _, n in t.target.summands]
    col_ranges = [range(m + 1) for _, m in t.source.summands]
    out = []
    for rows in itertools.product(*row_ranges):
        if not any(rows):
            continue
        for cols in itertools.product(*col_ranges):
            if not any(cols):
                continue
            out.append(Shape(rows, cols))
    return out


@dataclass(frozen=True)
class Constraint:
    """Linear constraint sum(b_l mu_l) REL sum((m_i - a_i) lambda_i).

    ``strict`` selects < over <=.  The left side collects the shape's row
    weights, the right side the weights of the columns outside the shape.
    """

    mu_coeffs: tuple[int, ...]
    lambda_coeffs: tuple[int, ...]
    strict: bool

    def holds(self, p: Polarization) -> bool:
        lhs = sum(b * m for b, m in zip(self.mu_coeffs, p.mus))
        rhs = sum(c * l for c, l in zip(self.lambda_coeffs, p.lambdas))
        return lhs < rhs if self.strict else lhs <= rhs

    def margin(self, p: Polarization) -> Fraction:
        """rhs - lhs; positive when the weak inequality holds with room."""
        lhs = sum(b * m for b, m in zip(self.mu_coeffs, p.mus))
        rhs = sum(c * l for c, l in zip(self.lambda_coeffs, p.lambdas))
        return rhs - lhs

    def __str__(self) -> str:
        lhs = " + ".join(
            f"{b}*m{l + 1}" for l, b in enumerate(self.mu_coeffs) if b
        ) or "0"
        rhs = " + ".join(
            f"{c}*l{i + 1}" for i, c in enumerate(self.lambda_coeffs) if c
        ) or "0"
        op = "<" if self.strict else "<="
        return f"{lhs} {op} {rhs}"


def shape_inequality(s: Shape, t: MorphismType, strict: bool) -> Constraint:
    """The weight inequality attached to a zero submatrix of shape ``s``.

    The shape destabilizes under a polarization exactly when the returned
    (weak) constraint fails.
    """
    s.validate_for(t)
    return Constraint(
        mu_coeffs=s.rows,
        lambda_coeffs=tuple(
            m - a for a, (_, m) in zip(s.cols, t.source.summands)
        ),
        strict=strict,
    )


def classify_shapes(t: MorphismType, p: Polarization) -> dict[Shape, bool]:
    """Label every shape: True when it destabilizes under ``p``.

    A shape destabilizes when its weak weight inequality fails, i.e. the
    row weights strictly exceed the complementary column weights.
    """
    p.validate_for(t)
    out: dict[Shape, bool] = {}
    for s in enumerate_shapes(t):
        out[s] = not shape_inequality(s, t, strict=False).holds(p)
    return out


def dual_polarization(p: Polarization, t: MorphismType) -> Polarization:
    """Weights of the transposed morphism type: reversed mus become lambdas
    and reversed lambdas become mus."""
    p.validate_for(t)
    return Polarization(tuple(reversed(p.mus)), tuple(reversed(p.lambdas)))


# ---------------------------------------------------------------------------
# Exact half-plane intersection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Facet:
    """Affine inequality sum(coeffs * x) + const >= 0 (or > 0 when strict)."""

    coeffs: tuple[Fraction, ...]
    const: Fraction
    strict: bool

    def normalized(self) -> "Facet":
        nums = [c.numerator for c in self.coeffs] + [self.const.numerator]
        dens = [c.denominator for c in self.coeffs] + [self.const.denominator]
        scale = Fraction(_lcm_list(dens), gcd(*(abs(x) for x in nums)) or 1)
        return Facet(
            tuple(c * scale for c in self.coeffs), self.const * scale, self.strict
        )

    def value(self, pt: Sequence[Fraction]) -> Fraction:
        return sum(c * x for c, x in zip(self.coeffs, pt)) + self.const

    def admits(self, pt: Sequence[Fraction]) -> bool:
        v = self.value(pt)
        return v > 0 if self.strict else v >= 0

    def admits_weakly(self, pt: Sequence[Fraction]) -> bool:
        return self.value(pt) >= 0

    def expr(self, names: Sequence[str]) -> str:
        parts = [f"{c}*{n}" for c, n in zip(self.coeffs, names)]
        parts.append(str(self.const))
        return " + ".join(parts)


def _lcm_list(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


@dataclass
class Region:
    """Exact polytope (possibly half-open) in the plot coordinates.

    ``vertices`` lists the vertices of the closure, sorted lexicographically;
    ``affine_dim`` is the dimension of the affine hull (-1 when empty).
    """

    free_vars: tuple[str, ...]
    facets: tuple[Facet, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    affine_dim: int
    empty: bool = False

    def interior_point(self) -> tuple[Fraction, ...]:
        """Barycenter of the closure vertices; satisfies every strict facet
        strictly whenever the region is nonempty."""
        if self.empty or not self.vertices:
            raise ValueError("region has no interior point")
        k = len(self.vertices)
        return tuple(
            sum(v[j] for v in self.vertices) / k
            for j in range(len(self.free_vars))
        )

    def to_json_dict(self) -> dict:
        return {
            "free_vars": list(self.free_vars),
            "facets": [
                {"expr": f.expr(self.free_vars), "strict": f.strict}
                for f in self.facets
            ],
            "vertices": [[str(c) for c in v] for v in self.vertices],
            "affine_dim": self.affine_dim,
        }


def _dedupe_facets(facets: list[Facet]) -> list[Facet]:
    seen: dict[tuple, Facet] = {}
    for f in facets:
        f = f.normalized()
        key = (f.coeffs, f.const)
        if key in seen:
            if f.strict and not seen[key].strict:
                seen[key] = f
        else:
            seen[key] = f
    return list(seen.values())


def _solve_interval(names, facets) -> Region:
    lo: tuple[Fraction, bool] | None = None
    hi: tuple[Fraction, bool] | None = None
    for f in facets:
        (a,), c = f.coeffs, f.const
        if a == 0:
            if (c > 0) or (c == 0 and not f.strict):
                continue
            return Region(names, tuple(facets), (), -1, empty=True)
        bound = -c / a
        if a > 0:  # x >= bound
            if lo is None or bound > lo[0] or (bound == lo[0] and f.strict):
                lo = (bound, f.strict)
        else:  # x <= bound
            if hi is None or bound < hi[0] or (bound == hi[0] and f.strict):
                hi = (bound, f.strict)
    if lo is None or hi is None:
        raise ValueError("unbounded region; the constraint system is incomplete")
    if lo[0] > hi[0] or (lo[0] == hi[0] and (lo[1] or hi[1])):
        return Region(names, tuple(facets), (), -1, empty=True)
    if lo[0] == hi[0]:
        return Region(names, tuple(facets), ((lo[0],),), 0)
    verts = tuple(sorted([(lo[0],), (hi[0],)]))
    return Region(names, tuple(facets), verts, 1)


def _line_intersection(f1: Facet, f2: Facet) -> tuple[Fraction, Fraction] | None:
    a1, b1 = f1.coeffs
    a2, b2 = f2.coeffs
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    x = (-f1.const * b2 + f2.const * b1) / det
    y = (-a1 * f2.const + a2 * f1.const) / det
    return (x, y)


def _recession_direction(facets) -> tuple[Fraction, Fraction] | None:
    """A nonzero direction along which every half-plane is unbounded, if any."""
    candidates = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
                  (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))]
    for f in facets:
        a, b = f.coeffs
        candidates.extend([(b, -a), (-b, a)])
    for d in candidates:
        if d == (0, 0):
            continue
        if all(f.coeffs[0] * d[0] + f.coeffs[1] * d[1] >= 0 for f in facets):
            return d
    return None


def _solve_polygon(names, facets) -> Region:
    candidates: set[tuple[Fraction, Fraction]] = set()
    for f1, f2 in itertools.combinations(facets, 2):
        pt = _line_intersection(f1, f2)
        if pt is not None and all(f.admits_weakly(pt) for f in facets):
            candidates.add(pt)
    verts = sorted(candidates)
    if verts and _recession_direction(facets) is not None:
        raise ValueError("unbounded region; the constraint system is incomplete")
    if not verts:
        return Region(names, tuple(facets), (), -1, empty=True)
    if len(verts) == 1:
        dim = 0
    else:
        v0 = verts[0]
        dirs = [(v[0] - v0[0], v[1] - v0[1]) for v in verts[1:]]
        d0 = dirs[0]
        collinear = all(d[0] * d0[1] - d[1] * d0[0] == 0 for d in dirs)
        dim = 1 if collinear else 2
    if dim == 1:
        # keep only the two extreme points along the common line
        verts = [verts[0], verts[-1]]
    region = Region(names, tuple(facets), tuple(verts), dim)
    # homogeneous strictness check: the barycenter must satisfy all strict facets
    center = region.interior_point()
    for f in facets:
        if f.strict and not f.admits(center):
            return Region(names, tuple(facets), (), -1, empty=True)
    return region


def _active_facets(facets: list[Facet], verts) -> list[Facet]:
    """Drop half-planes whose boundary line misses the closure."""
    out = []
    for f in facets:
        if any(f.value(v) == 0 for v in verts):
            out.append(f)
    return out


def solve_halfplanes(names: Sequence[str], facets: Iterable[Facet]) -> Region:
    """Intersect half-planes/half-lines exactly; dimensions 0, 1 and 2."""
    names = tuple(names)
    fs = _dedupe_facets(list(facets))
    if len(names) == 0:
        return Region(names, (), ((),), 0)
    if len(names) == 1:
        region = _solve_interval(names, fs)
    elif len(names) == 2:
        region = _solve_polygon(names, fs)
    else:
        raise ValueError("only 0, 1 or 2 free variables are supported")
    if region.empty:
        return region
    active = _active_facets(list(region.facets), region.vertices)
    return Region(
        names,
        tuple(sorted(active, key=lambda f: (f.coeffs, f.const, f.strict))),
        region.vertices,
        region.affine_dim,
    )


# ---------------------------------------------------------------------------
# From shape catalogs to regions
# ---------------------------------------------------------------------------


class _AffineSpace:
    """Affine coordinates for the normalized weights of a morphism type.

    The last source-type lambda and the last target-type mu are solved out of
    the normalization; the remaining weights are the free variables.
    """

    def __init__(self, t: MorphismType):
        self.t = t
        sm = t.source.mults()
        tm = t.target.mults()
        self.var_names = tuple(
            [f"l{i + 1}" for i in range(len(sm) - 1)]
            + [f"m{l + 1}" for l in range(len(tm) - 1)]
        )
        self.dim = len(self.var_names)
        nsrc = len(sm) - 1
        # each weight as (coeff vector over free vars, constant)
        self.lambda_forms: list[tuple[tuple[Fraction, ...], Fraction]] = []
        self.mu_forms: list[tuple[tuple[Fraction, ...], Fraction]] = []
        for i in range(len(sm)):
            if i < nsrc:
                vec = tuple(
                    Fraction(1) if j == i else Fraction(0) for j in range(self.dim)
                )
                self.lambda_forms.append((vec, Fraction(0)))
            else:
                vec = tuple(
                    Fraction(-sm[j], sm[-1]) if j < nsrc else Fraction(0)
                    for j in range(self.dim)
                )
                self.lambda_forms.append((vec, Fraction(1, sm[-1])))
        for l in range(len(tm)):
            if l < len(tm) - 1:
                vec = tuple(
                    Fraction(1) if j == nsrc + l else Fraction(0)
                    for j in range(self.dim)
                )
                self.mu_forms.append((vec, Fraction(0)))
            else:
                vec = tuple(
                    Fraction(-tm[j - nsrc], tm[-1]) if j >= nsrc else Fraction(0)
                    for j in range(self.dim)
                )
                self.mu_forms.append((vec, Fraction(1, tm[-1])))

    def constraint_facet(self, c: Constraint) -> Facet:
        """rhs - lhs >= 0 (or > 0) as a facet over the free variables."""
        vec = [Fraction(0)] * self.dim
        const = Fraction(0)
        for coeff, (fvec, fconst) in zip(c.lambda_coeffs, self.lambda_forms):
            for j in range(self.dim):
                vec[j] += coeff * fvec[j]
            const += coeff * fconst
        for coeff, (fvec, fconst) in zip(c.mu_coeffs, self.mu_forms):
            for j in range(self.dim):
                vec[j] -= coeff * fvec[j]
            const -= coeff * fconst
        return Facet(tuple(vec), const, c.strict)

    def positivity_facets(self) -> list[Facet]:
        out = []
        for fvec, fconst in self.lambda_forms + self.mu_forms:
            out.append(Facet(fvec, fconst, strict=True))
        return out

    def polarization_at(self, pt: Sequence[Fraction]) -> Polarization:
        lam = [sum(c * x for c, x in zip(vec, pt)) + k for vec, k in self.lambda_forms]
        mu = [sum(c * x for c, x in zip(vec, pt)) + k for vec, k in self.mu_forms]
        return Polarization(lam, mu)


def _invert_affine(
    forms: Sequence[tuple[tuple[Fraction, ...], Fraction]]
) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Invert y = A x + b for square A of size <= 2: returns (A^-1, -A^-1 b)."""
    k = len(forms)
    if k == 0:
        return [], []
    if k == 1:
        ((a,), b) = forms[0]
        if a == 0:
            raise ValueError("plot transform is not invertible")
        return [[1 / a]], [-b / a]
    ((a11, a12), b1), ((a21, a22), b2) = forms
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise ValueError("plot transform is not invertible")
    inv = [[a22 / det, -a12 / det], [-a21 / det, a11 / det]]
    shift = [-(inv[0][0] * b1 + inv[0][1] * b2), -(inv[1][0] * b1 + inv[1][1] * b2)]
    return inv, shift


def admissible_region(
    t: MorphismType,
    forbidden: Iterable[Shape],
    allowed: Iterable[Shape],
    *,
    extra_facets: Iterable[tuple[tuple[int, ...], int, bool]] = (),
    clip_positivity: bool = True,
    plot: Sequence[tuple[str, Mapping[str, Fraction], Fraction]] | None = None,
) -> Region:
    """Polytope of polarizations separating forbidden from allowed shapes.

    Each forbidden shape contributes the strict inequality
    ``sum_M mu < sum_{J^c} lambda``; each allowed shape the weak one
    ``sum_M mu >= sum_{J^c} lambda``.  Positivity of all weights is added
    unless ``clip_positivity`` is off.  ``extra_facets`` are raw total-weight
    bounds ((mu row counts), bound numerator over 1, strict) of the form
    ``sum_M mu < bound``; ``plot`` re-expresses the answer in published
    coordinates via an invertible affine change of the free variables.
    """
    space = _AffineSpace(t)
    facets: list[Facet] = []
    for s in forbidden:
        c = shape_inequality(s, t, strict=True)
        facets.append(space.constraint_facet(c))
    for s in allowed:
        c = shape_inequality(s, t, strict=False)
        f = space.constraint_facet(c)
        facets.append(Facet(tuple(-x for x in f.coeffs), -f.const, strict=False))
    for rows, bound, strict in extra_facets:
        # bound - sum(rows * mu) REL 0
        vec = [Fraction(0)] * space.dim
        const = Fraction(bound)
        for coeff, (fvec, fconst) in zip(rows, space.mu_forms):
            for j in range(space.dim):
                vec[j] -= coeff * fvec[j]
            const -= coeff * fconst
        facets.append(Facet(tuple(vec), const, strict))
    if clip_positivity:
        facets.extend(space.positivity_facets())

    names = space.var_names
    if plot is not None and space.dim == 0:
        # nothing to invert: the plot forms are constants pinned by the
        # normalization, and the region is that single point
        plot_names = tuple(name for name, _, _ in plot)
        point = tuple(_frac(const) for _, _, const in plot)
        return Region(plot_names, (), (point,), 0)
    if plot is not None:
        plot_names = tuple(name for name, _, _ in plot)
        forms = []
        for _, coeffs, const in plot:
            vec = tuple(_frac(coeffs.get(v, 0)) for v in names)
            forms.append((vec, _frac(const)))
        inv, shift = _invert_affine(forms)
        # substitute free = inv * plot + shift into each facet
        new_facets = []
        for f in facets:
            vec = [Fraction(0)] * len(plot_names)
            const = f.const
            for j, c in enumerate(f.coeffs):
                for k in range(len(plot_names)):
                    vec[k] += c * inv[j][k]
                const += c * shift[j]
            new_facets.append(Facet(tuple(vec), const, f.strict))
        facets = new_facets
        names = plot_names
    return solve_halfplanes(names, facets)
