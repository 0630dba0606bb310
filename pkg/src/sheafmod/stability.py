"""Semistability verdicts for concrete matrices of forms.

The destabilizer search combines three exact passes (literal zero blocks,
row-subset times column-kernel sweeps, and pencil decisions for width-one
blocks over a two-column type) with a seeded randomized pass that samples
constant row subspaces, takes exact column kernels against them, and
verifies any hit exactly.  Verdicts are three-valued: a verified witness
gives Destabilized, a complete exact decision of every destabilizing shape
gives CertifiedSemistable, anything else stays Undetermined.
"""

from __future__ import annotations

import itertools
import random
from math import gcd as _int_gcd
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .bundles import MorphismType
from .polymatrix import (
    HomogeneousPoly,
    PolyMatrix,
    determinant,
    linearly_independent,
    maximal_minors,
    poly_gcd_list,
    _rank,
)
from .regions import Polarization, Shape, classify_shapes, enumerate_shapes
from .registry import CaseSpec

__all__ = [
    "VerdictKind",
    "Witness",
    "Verdict",
    "KoszulClass",
    "zero_block_exists_col1",
    "zero_block_exists_row1",
    "search_destabilizer",
    "check_case",
    "CaseReport",
    "koszul_test",
]

_SUBSET_CAP = 4096


class VerdictKind(Enum):
    DESTABILIZED = "destabilized"
    CERTIFIED_SEMISTABLE = "certified-semistable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Witness:
    """Zero block exhibited after constant row/column combinations.

    ``rows`` are literal row indices (after applying ``row_combos`` when
    present); ``col_combos`` lists rational column-combination vectors per
    block column, each supported on a single source type.
    """

    shape: Shape
    rows: tuple[int, ...]
    col_combos: tuple[tuple[Fraction, ...], ...]
    row_combos: tuple[tuple[Fraction, ...], ...] | None = None


@dataclass
class Verdict:
    kind: VerdictKind
    witness: Witness | None
    budget_used: int
    undecided: tuple[Shape, ...] = ()
    note: str = ""

    def __str__(self) -> str:
        out = self.kind.value
        if self.witness is not None:
            out += f" via zero block {self.witness.shape}"
        if self.note:
            out += f" ({self.note})"
        return out


def _positions(b) -> list[list[int]]:
    out, k = [], 0
    for _, m in b.summands:
        out.append(list(range(k, k + m)))
        k += m
    return out


def _stack_for_cols(
    m: PolyMatrix, rows: Sequence[int], cols: Sequence[int]
) -> list[list[Fraction]]:
    """Linear system rows for 'sum_c k_c m[r][c] = 0 for r in rows'."""
    monos_per_row = {}
    for r in rows:
        monos = set()
        for c in cols:
            monos.update(m.entries[r][c].as_dict())
        monos_per_row[r] = sorted(monos)
    out = []
    for r in rows:
        for mono in monos_per_row[r]:
            out.append(
                [m.entries[r][c].as_dict().get(mono, Fraction(0)) for c in cols]
            )
    return out


def _right_kernel(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the given matrix (width columns).

    Rows are scaled to integers and reduced with gcd control, which keeps
    the elimination fast at desk scale while staying exact.
    """
    _gcd = _int_gcd
    big = 1 << 256  # reduce rows by their gcd only once entries get large
    mat: list[list[int]] = []
    for r in rows:
        if any(isinstance(x, Fraction) and x.denominator != 1 for x in r):
            dens = 1
            for x in r:
                d = x.denominator
                dens = dens * d // _gcd(dens, d)
            iv = [int(x * dens) for x in r]
        else:
            iv = [int(x) for x in r]
        if any(iv):
            mat.append(iv)
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                new = [pv * a - f * b for a, b in zip(mat[r], mat[rank])]
                if any(abs(x) > big for x in new):
                    g = 0
                    for x in new:
                        g = _gcd(g, x)
                    if g > 1:
                        new = [x // g for x in new]
                mat[r] = new
        pivots.append(col)
        rank += 1
    basis = []
    free = [c for c in range(width) if c not in pivots]
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = Fraction(-mat[i][fc], mat[i][pc])
        basis.append(vec)
    return basis


def zero_block_exists_col1(
    m: PolyMatrix, p: int, src_type: int | None = None
) -> Witness | None:
    """Exact decision for a zero block of p rows by one column combination.

    Quantifies over every p-subset of literal rows and every constant column
    combination within one source type; the combination space is the right
    kernel of the stacked coefficient slices, so the decision is a rank
    computation over the rationals.
    """
    col_groups = _positions(m.type.source)
    types = [src_type] if src_type is not None else range(len(col_groups))
    row_groups = _positions(m.type.target)
    for i in types:
        cols = col_groups[i]
        for rows in itertools.combinations(range(m.nrows), p):
            stack = _stack_for_cols(m, rows, cols)
            kernel = _right_kernel(stack, len(cols))
            kernel = [k for k in kernel if any(x != 0 for x in k)]
            if kernel:
                combo = [Fraction(0)] * m.ncols
                for c, v in zip(cols, kernel[0]):
                    combo[c] = v
                shape = _shape_of(m.type, rows, {i: 1}, row_groups)
                return Witness(shape, tuple(rows), (tuple(combo),))
    return None


def zero_block_exists_row1(
    m: PolyMatrix, q: int, tgt_type: int | None = None
) -> Witness | None:
    """Exact decision for a zero block of one row combination by q columns.

    Dual of :func:`zero_block_exists_col1`: the row-combination space is the
    left kernel of the coefficient stack restricted to each q-subset of
    columns.
    """
    row_groups = _positions(m.type.target)
    col_groups = _positions(m.type.source)
    types = [tgt_type] if tgt_type is not None else range(len(row_groups))
    for l in types:
        rows = row_groups[l]
        for cols in itertools.combinations(range(m.ncols), q):
            # left kernel: transpose the role of rows and columns
            monos = sorted(
                {mono for r in rows for c in cols for mono in m.entries[r][c].as_dict()}
            )
            stack = []
            for c in cols:
                for mono in monos:
                    stack.append(
                        [m.entries[r][c].as_dict().get(mono, Fraction(0)) for r in rows]
                    )
            kernel = _right_kernel(stack, len(rows))
            kernel = [k for k in kernel if any(x != 0 for x in k)]
            if kernel:
                col_shape: dict[int, int] = {}
                for c in cols:
                    ci = next(i for i, g in enumerate(col_groups) if c in g)
                    col_shape[ci] = col_shape.get(ci, 0) + 1
                rows_count = [0] * len(row_groups)
                rows_count[l] = 1
                cols_count = [col_shape.get(i, 0) for i in range(len(col_groups))]
                shape = Shape(tuple(rows_count), tuple(cols_count))
                combos = []
                for c in cols:
                    vec = [Fraction(0)] * m.ncols
                    vec[c] = Fraction(1)
                    combos.append(tuple(vec))
                rc = [Fraction(0)] * m.nrows
                for r, v in zip(rows, kernel[0]):
                    rc[r] = v
                return Witness(shape, (), tuple(combos), row_combos=(tuple(rc),))
    return None


def _shape_of(t, rows, col_counts: dict[int, int], row_groups) -> Shape:
    rows_count = [0] * len(row_groups)
    for r in rows:
        for l, g in enumerate(row_groups):
            if r in g:
                rows_count[l] += 1
    cols_count = [col_counts.get(i, 0) for i in range(t.source.ntypes)]
    return Shape(tuple(rows_count), tuple(cols_count))


# ---------------------------------------------------------------------------
# Destabilizer search
# ---------------------------------------------------------------------------


def _literal_witness(m: PolyMatrix, shape: Shape) -> Witness | None:
    """Zero block made of literal rows and columns, if one exists."""
    col_groups = _positions(m.type.source)
    row_groups = _positions(m.type.target)
    col_subset_iters = []
    for i, a in enumerate(shape.cols):
        col_subset_iters.append(list(itertools.combinations(col_groups[i], a)))
    total = 1
    for it in col_subset_iters:
        total *= len(it)
    if total > _SUBSET_CAP:
        return None
    zero_mask = [
        {c for c in range(m.ncols) if m.entries[r][c].is_zero}
        for r in range(m.nrows)
    ]
    for chosen in itertools.product(*col_subset_iters):
        cols = [c for group in chosen for c in group]
        ok_rows = []
        counts = [0] * len(row_groups)
        for l, g in enumerate(row_groups):
            for r in g:
                if all(c in zero_mask[r] for c in cols):
                    counts[l] += 1
                    ok_rows.append((l, r))
        if all(cnt >= b for cnt, b in zip(counts, shape.rows)):
            rows = []
            need = list(shape.rows)
            for l, r in ok_rows:
                if need[l] > 0:
                    rows.append(r)
                    need[l] -= 1
            combos = []
            for c in cols:
                vec = [Fraction(0)] * m.ncols
                vec[c] = Fraction(1)
                combos.append(tuple(vec))
            return Witness(shape, tuple(sorted(rows)), tuple(combos))
    return None


def _kernel_witness_for_rows(
    m: PolyMatrix, shape: Shape, rows: Sequence[int]
) -> Witness | None:
    """Column-kernel check against a fixed set of literal rows."""
    col_groups = _positions(m.type.source)
    combos: list[tuple[Fraction, ...]] = []
    for i, a in enumerate(shape.cols):
        if a == 0:
            continue
        stack = _stack_for_cols(m, rows, col_groups[i])
        kernel = _right_kernel(stack, len(col_groups[i]))
        if len(kernel) < a:
            return None
        for k in kernel[:a]:
            vec = [Fraction(0)] * m.ncols
            for c, v in zip(col_groups[i], k):
                vec[c] = v
            combos.append(tuple(vec))
    return Witness(shape, tuple(rows), tuple(combos))


def _row_subset_sweep(m: PolyMatrix, shape: Shape) -> tuple[Witness | None, bool]:
    """Search literal row subsets with exact column kernels.

    Returns (witness, decided): the search is a complete decision when every
    row count is all-or-nothing for its type, since taking all rows of a type
    is invariant under row combinations within the type.
    """
    row_groups = _positions(m.type.target)
    decided = all(
        b == 0 or b == len(g) for b, g in zip(shape.rows, row_groups)
    )
    subset_iters = [
        list(itertools.combinations(g, b)) for b, g in zip(shape.rows, row_groups)
    ]
    total = 1
    for it in subset_iters:
        total *= len(it)
    if total > _SUBSET_CAP:
        return None, False
    for chosen in itertools.product(*subset_iters):
        rows = [r for group in chosen for r in group]
        w = _kernel_witness_for_rows(m, shape, rows)
        if w is not None:
            return w, decided
    return None, decided


def _pencil_decides(m: PolyMatrix, shape: Shape) -> tuple[Witness | None, bool, str]:
    """Exact decision for one-column blocks over a source type of width <= 2.

    Width one is a pure rank computation.  Width two gives a matrix pencil in
    the combination (k1 : k2): the row-rank drops demanded by the shape are
    minor conditions, binary forms in (k1, k2), and a common zero exists
    exactly when their gcd is nonconstant.  Rational roots give explicit
    witnesses; a nonconstant gcd without rational roots still certifies a
    destabilizer over the algebraic closure.
    """
    if sum(shape.cols) != 1:
        return None, False, ""
    i = next(i for i, a in enumerate(shape.cols) if a == 1)
    col_groups = _positions(m.type.source)
    cols = col_groups[i]
    if len(cols) > 2:
        return None, False, ""
    if len(cols) == 1:
        vec = [Fraction(0)] * m.ncols
        vec[cols[0]] = Fraction(1)
        w = _witness_with_row_combos(m, shape, (tuple(vec),))
        return w, True, ""
    row_groups = _positions(m.type.target)
    forms: list[HomogeneousPoly] = []
    for l, b in enumerate(shape.rows):
        if b == 0:
            continue
        g = row_groups[l]
        drop = len(g) - b
        monos_all = sorted(
            {
                mono
                for r in g
                for mono in set(m.entries[r][cols[0]].as_dict())
                | set(m.entries[r][cols[1]].as_dict())
            }
        )
        # coefficient stack of m.k restricted to this row type: entries are
        # linear forms in (k1, k2), encoded as binary forms in (X, Y)
        stack = [
            [
                HomogeneousPoly(
                    {
                        (1, 0, 0): m.entries[r][cols[0]].as_dict().get(mono, Fraction(0)),
                        (0, 1, 0): m.entries[r][cols[1]].as_dict().get(mono, Fraction(0)),
                    }
                )
                for mono in monos_all
            ]
            for r in g
        ]
        size = drop + 1
        if size > len(g) or size > len(monos_all):
            continue
        for rsel in itertools.combinations(range(len(g)), size):
            for csel in itertools.combinations(range(len(monos_all)), size):
                grid = [[stack[r][c] for c in csel] for r in rsel]
                forms.append(_det_small(grid))
    nonzero = [f for f in forms if not f.is_zero]
    if not nonzero:
        vec = [Fraction(0)] * m.ncols
        vec[cols[0]] = Fraction(1)
        w = _witness_with_row_combos(m, shape, (tuple(vec),))
        return w, True, ""
    g = poly_gcd_list(nonzero)
    if g.degree == 0:
        return None, True, ""
    root = _rational_root_binary(g)
    if root is None:
        return None, True, "destabilizer exists over the closure; no rational witness"
    k1, k2 = root
    vec = [Fraction(0)] * m.ncols
    vec[cols[0]], vec[cols[1]] = k1, k2
    w = _witness_with_row_combos(m, shape, (tuple(vec),))
    if w is None:
        return None, True, ""
    return w, True, ""


def _det_small(grid) -> HomogeneousPoly:
    n = len(grid)
    if n == 1:
        return grid[0][0]
    if n == 2:
        return grid[0][0] * grid[1][1] - grid[0][1] * grid[1][0]
    acc = HomogeneousPoly.zero()
    for c in range(n):
        sub = [[grid[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        term = grid[0][c] * _det_small(sub)
        acc = acc + term if c % 2 == 0 else acc - term
    return acc


def _rational_root_binary(g: HomogeneousPoly) -> tuple[Fraction, Fraction] | None:
    """A rational projective zero (k1 : k2) of a binary form in X, Y."""
    coeffs: dict[int, Fraction] = {}
    deg = g.degree or 0
    for (a, b, c), v in g.terms:
        if c != 0:
            raise ValueError("not a binary form")
        coeffs[a] = v
    if all(e < deg for e in coeffs):  # Y divides g -> root (1 : 0)
        return (Fraction(1), Fraction(0))
    if 0 not in coeffs:  # X divides g -> root (0 : 1)
        return (Fraction(0), Fraction(1))
    # rational roots of the dehomogenization g(t, 1)
    lead = coeffs[deg]
    const = coeffs[0]
    for p in _divisors(const.numerator * const.denominator):
        for q in _divisors(lead.numerator * lead.denominator):
            for sign in (1, -1):
                t = Fraction(sign * p, q)
                val = sum(v * t**e for e, v in coeffs.items())
                if val == 0:
                    return (t, Fraction(1))
    return None


def _divisors(x: int) -> list[int]:
    x = abs(x)
    if x == 0:
        return [1]
    out = [d for d in range(1, min(x, 2000) + 1) if x % d == 0]
    if x not in out:
        out.append(x)
    return out


def _witness_with_row_combos(
    m: PolyMatrix, shape: Shape, col_combos: tuple[tuple[Fraction, ...], ...]
) -> Witness | None:
    """Complete fixed column combinations to a witness by solving for the
    row-combination kernel per target type (exact)."""
    row_groups = _positions(m.type.target)
    virtual = []
    for combo in col_combos:
        virtual.append(
            [
                sum(
                    (m.entries[r][c].scale(v) for c, v in enumerate(combo) if v != 0),
                    HomogeneousPoly.zero(),
                )
                for r in range(m.nrows)
            ]
        )
    row_combos: list[tuple[Fraction, ...]] = []
    for l, b in enumerate(shape.rows):
        if b == 0:
            continue
        g = row_groups[l]
        monos = sorted(
            {mono for col in virtual for r in g for mono in col[r].as_dict()}
        )
        stack = []
        for col in virtual:
            for mono in monos:
                stack.append([col[r].as_dict().get(mono, Fraction(0)) for r in g])
        kernel = _right_kernel(stack, len(g))
        if len(kernel) < b:
            return None
        for k in kernel[:b]:
            rc = [Fraction(0)] * m.nrows
            for r, v in zip(g, k):
                rc[r] = v
            row_combos.append(tuple(rc))
    return Witness(shape, (), col_combos, row_combos=tuple(row_combos))


class _SearchContext:
    """Precomputed integer coefficient tensors for fast randomized trials.

    For each (target type l, source type i) the tensor holds, per row of the
    type, the integer coefficient vectors of its entries over the monomial
    basis of the block degree.  A sampled row combination then reduces to
    integer dot products.
    """

    def __init__(self, m: PolyMatrix):
        self.m = m
        self.row_groups = _positions(m.type.target)
        self.col_groups = _positions(m.type.source)
        self.tensor: dict[tuple[int, int], tuple[list, int]] = {}
        for l, g in enumerate(self.row_groups):
            for i, cols in enumerate(self.col_groups):
                monos = sorted(
                    {
                        mono
                        for r in g
                        for c in cols
                        for mono in m.entries[r][c].as_dict()
                    }
                )
                scale = 1
                for r in g:
                    for c in cols:
                        for v in m.entries[r][c].as_dict().values():
                            d = v.denominator
                            scale = scale * d // _int_gcd(scale, d)
                per_row = []
                for r in g:
                    per_row.append(
                        [
                            [
                                int(m.entries[r][c].as_dict().get(mono, Fraction(0)) * scale)
                                for mono in monos
                            ]
                            for c in cols
                        ]
                    )
                self.tensor[(l, i)] = (per_row, len(monos))


def _random_subspace_witness(
    ctx: _SearchContext, shape: Shape, rng: random.Random
) -> Witness | None:
    """One randomized trial: sample constant row combinations per type and
    take exact column kernels against the sampled virtual rows."""
    m = ctx.m
    samples: list[tuple[int, list[int]]] = []
    row_combos = []
    for l, b in enumerate(shape.rows):
        g = ctx.row_groups[l]
        for _ in range(b):
            coeffs = [rng.randint(-3, 3) for _ in g]
            if not any(coeffs):
                coeffs[rng.randrange(len(g))] = 1
            combo = [Fraction(0)] * m.nrows
            for r, v in zip(g, coeffs):
                combo[r] = Fraction(v)
            row_combos.append(tuple(combo))
            samples.append((l, coeffs))
    combos = []
    for i, a in enumerate(shape.cols):
        if a == 0:
            continue
        cols = ctx.col_groups[i]
        stack: list[list[Fraction]] = []
        for l, coeffs in samples:
            per_row, nmono = ctx.tensor[(l, i)]
            for mi in range(nmono):
                row = []
                for ci in range(len(cols)):
                    acc = 0
                    for w, rowvecs in zip(coeffs, per_row):
                        if w:
                            acc += w * rowvecs[ci][mi]
                    row.append(Fraction(acc))
                stack.append(row)
        kernel = _right_kernel(stack, len(cols))
        if len(kernel) < a:
            return None
        for k in kernel[:a]:
            vec = [Fraction(0)] * m.ncols
            for c, v in zip(cols, k):
                vec[c] = v
            combos.append(tuple(vec))
    return Witness(shape, (), tuple(combos), row_combos=tuple(row_combos))


def _combine_rows(m, rows, coeffs, c) -> HomogeneousPoly:
    acc = HomogeneousPoly.zero()
    for r, v in zip(rows, coeffs):
        if v != 0:
            acc = acc + m.entries[r][c].scale(v)
    return acc


def _complete_basis(vectors: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    """Extend the given independent vectors to an invertible dim x dim matrix."""
    rows = [list(v) for v in vectors]
    for e in range(dim):
        cand = [Fraction(int(j == e)) for j in range(dim)]
        if _rank(rows + [cand]) > _rank(rows):
            rows.append(cand)
        if len(rows) == dim:
            break
    return rows


def realize_witness(
    m: PolyMatrix, w: Witness
) -> tuple[list[list[Fraction]], list[list[Fraction]], PolyMatrix]:
    """Invertible row/column transforms exhibiting the witness block literally.

    Returns (G, H, G.m.H).  Both transforms are block matrices mixing only
    rows/columns of one summand type; within each type the witness
    combinations come first, so the zero block occupies the leading rows and
    columns of the types the shape names.
    """
    row_groups = _positions(m.type.target)
    col_groups = _positions(m.type.source)
    G = [[Fraction(int(i == j)) for j in range(m.nrows)] for i in range(m.nrows)]
    H = [[Fraction(int(i == j)) for j in range(m.ncols)] for i in range(m.ncols)]
    if w.row_combos is not None:
        per_type: dict[int, list[list[Fraction]]] = {}
        for rc in w.row_combos:
            l = next(
                l for l, g in enumerate(row_groups) if any(rc[r] != 0 for r in g)
            )
            per_type.setdefault(l, []).append([rc[r] for r in row_groups[l]])
        for l, combos in per_type.items():
            g = row_groups[l]
            block = _complete_basis(combos, len(g))
            for bi, row in enumerate(block):
                for bj, v in enumerate(row):
                    G[g[bi]][g[bj]] = v
    else:
        for l, g in enumerate(row_groups):
            chosen = [r for r in w.rows if r in g]
            rest = [r for r in g if r not in chosen]
            for bi, r in enumerate(chosen + rest):
                for bj in range(len(g)):
                    G[g[bi]][g[bj]] = Fraction(int(g[bj] == r))
    per_type_cols: dict[int, list[list[Fraction]]] = {}
    for cc in w.col_combos:
        i = next(
            i for i, g in enumerate(col_groups) if any(cc[c] != 0 for c in g)
        )
        per_type_cols.setdefault(i, []).append([cc[c] for c in col_groups[i]])
    for i, combos in per_type_cols.items():
        g = col_groups[i]
        block = _complete_basis(combos, len(g))
        # combinations become the leading columns: H restricted to the type
        # is the transpose of the completed basis
        for bj, vec in enumerate(block):
            for bi, v in enumerate(vec):
                H[g[bi]][g[bj]] = v
    transformed = apply_transforms(m, G, H)
    return G, H, transformed


def apply_transforms(
    m: PolyMatrix, G: list[list[Fraction]], H: list[list[Fraction]]
) -> PolyMatrix:
    """Exact G . m . H for constant block transforms respecting the type."""
    rows = []
    for r in range(m.nrows):
        row = []
        for c in range(m.ncols):
            acc = HomogeneousPoly.zero()
            for i in range(m.nrows):
                if G[r][i] == 0:
                    continue
                for j in range(m.ncols):
                    if H[j][c] == 0:
                        continue
                    acc = acc + m.entries[i][j].scale(G[r][i] * H[j][c])
            row.append(acc)
        rows.append(row)
    return PolyMatrix(m.type, rows)


def verify_witness(m: PolyMatrix, w: Witness) -> bool:
    """Recompute the claimed block exactly: every (row, column combination)
    pairing must vanish identically."""
    if w.row_combos is not None:
        rows = [
            [_combine_rows(m, range(m.nrows), rc, c) for c in range(m.ncols)]
            for rc in w.row_combos
        ]
    else:
        rows = [[m.entries[r][c] for c in range(m.ncols)] for r in w.rows]
    for row in rows:
        for combo in w.col_combos:
            acc = HomogeneousPoly.zero()
            for c, v in enumerate(combo):
                if v != 0:
                    acc = acc + row[c].scale(v)
            if not acc.is_zero:
                return False
    return True


def _dual_shape(t: MorphismType, shape: Shape) -> Shape:
    return Shape(tuple(reversed(shape.cols)), tuple(reversed(shape.rows)))


def _pull_back_transpose_witness(
    m: PolyMatrix, shape: Shape, wt: Witness
) -> Witness | None:
    """Translate a witness found on the transposed matrix back to ``m``.

    Row data of the transpose becomes column data and vice versa; the
    permutations are undone through the dual position orders.
    """
    from .polymatrix import _dual_order

    col_order = _dual_order(m.type.source)
    row_order = _dual_order(m.type.target)
    # column combinations of m from the transpose's row data
    col_combos: list[tuple[Fraction, ...]] = []
    if wt.row_combos is not None:
        for rc in wt.row_combos:
            vec = [Fraction(0)] * m.ncols
            for tr, v in enumerate(rc):
                vec[col_order[tr]] = v
            col_combos.append(tuple(vec))
    else:
        for tr in wt.rows:
            vec = [Fraction(0)] * m.ncols
            vec[col_order[tr]] = Fraction(1)
            col_combos.append(tuple(vec))
    row_combos: list[tuple[Fraction, ...]] = []
    for cc in wt.col_combos:
        vec = [Fraction(0)] * m.nrows
        for tc, v in enumerate(cc):
            vec[row_order[tc]] = v
        row_combos.append(tuple(vec))
    return Witness(shape, (), tuple(col_combos), row_combos=tuple(row_combos))


def search_destabilizer(
    m: PolyMatrix, p: Polarization, budget: int, seed: int = 0
) -> Verdict:
    """Search for a verified destabilizing zero block under the polarization.

    Shapes are processed in canonical order; the first verified witness wins.
    CertifiedSemistable requires every destabilizing shape to have been
    decided exactly.
    """
    from .polymatrix import transpose_dual

    p.validate_for(m.type)
    labels = classify_shapes(m.type, p)
    destab = [s for s in enumerate_shapes(m.type) if labels[s]]
    undecided: list[Shape] = []
    used = 0
    note = ""
    rng = random.Random(seed)
    mt = transpose_dual(m)
    for shape in destab:
        w = _literal_witness(m, shape)
        if w is not None and verify_witness(m, w):
            return Verdict(VerdictKind.DESTABILIZED, w, used)
        w, decided = _row_subset_sweep(m, shape)
        if w is not None and verify_witness(m, w):
            return Verdict(VerdictKind.DESTABILIZED, w, used)
        tshape = _dual_shape(m.type, shape)
        wt, tdecided = _row_subset_sweep(mt, tshape)
        if wt is not None:
            w = _pull_back_transpose_witness(m, shape, wt)
            if w is not None and verify_witness(m, w):
                return Verdict(VerdictKind.DESTABILIZED, w, used)
        if decided or tdecided:
            continue
        pdecided = False
        if sum(shape.cols) == 1:
            w, pdecided, pnote = _pencil_decides(m, shape)
            if w is not None and verify_witness(m, w):
                return Verdict(VerdictKind.DESTABILIZED, w, used)
            if pdecided and pnote:
                return Verdict(VerdictKind.DESTABILIZED, None, used, note=pnote)
        if not pdecided and sum(shape.rows) == 1:
            wt, pdecided, pnote = _pencil_decides(mt, tshape)
            if wt is not None:
                w = _pull_back_transpose_witness(m, shape, wt)
                if w is not None and verify_witness(m, w):
                    return Verdict(VerdictKind.DESTABILIZED, w, used)
            if pdecided and pnote:
                return Verdict(VerdictKind.DESTABILIZED, None, used, note=pnote)
        if pdecided:
            continue
        undecided.append(shape)
    if undecided and budget > 0:
        ctx = _SearchContext(m)
        per_shape = max(1, budget // len(undecided))
        for shape in undecided:
            for _ in range(per_shape):
                if used >= budget:
                    break
                used += 1
                w = _random_subspace_witness(ctx, shape, rng)
                if w is not None and verify_witness(m, w):
                    return Verdict(
                        VerdictKind.DESTABILIZED, w, used, tuple(undecided)
                    )
    if not undecided:
        return Verdict(VerdictKind.CERTIFIED_SEMISTABLE, None, used, note=note)
    return Verdict(
        VerdictKind.UNDETERMINED, None, used, tuple(undecided), note=note
    )


# ---------------------------------------------------------------------------
# Catalog checks per registry case
# ---------------------------------------------------------------------------


class KoszulClass(Enum):
    KOSZUL = "koszul"
    DEGENERATE = "degenerate"
    FULL_RANK_DET = "full-rank-det"
    OTHER = "other"


def koszul_test(m: PolyMatrix) -> KoszulClass:
    """Classify a 3x3 matrix of linear forms.

    Nonzero determinant is FullRankDet.  With determinant zero: an exactly
    detected zero pattern (column kernel, row kernel, or a literal thin
    block) is Degenerate; a primitive degree-one kernel vector whose entries
    span the whole space of linear forms is Koszul; everything else is Other.
    """
    if m.nrows != 3 or m.ncols != 3:
        raise ValueError("koszul_test expects a 3x3 matrix")
    for row in m.entries:
        for e in row:
            if not e.is_zero and e.degree != 1:
                raise ValueError("koszul_test expects linear entries")
    if not determinant(m).is_zero:
        return KoszulClass.FULL_RANK_DET
    # exact zero-pattern tests
    if zero_block_exists_col1(m, 3) is not None:
        return KoszulClass.DEGENERATE
    if zero_block_exists_row1(m, 3) is not None:
        return KoszulClass.DEGENERATE
    for shape in (Shape((2,), (2,)), Shape((1,), (2,)), Shape((2,), (1,))):
        w = _literal_witness(m, shape)
        if w is not None:
            return KoszulClass.DEGENERATE
    kernel = _adjugate_kernel(m)
    if kernel is None:
        return KoszulClass.OTHER
    degree = {k.degree for k in kernel if not k.is_zero}
    if degree == {1} and _span_rank(kernel) == 3:
        return KoszulClass.KOSZUL
    return KoszulClass.OTHER


def _adjugate_kernel(m: PolyMatrix) -> list[HomogeneousPoly] | None:
    """Primitive kernel vector of a singular 3x3 matrix via adjugate columns."""
    cof = [[None] * 3 for _ in range(3)]
    for r in range(3):
        for c in range(3):
            sub = [
                [m.entries[i][j] for j in range(3) if j != c]
                for i in range(3)
                if i != r
            ]
            d = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            cof[r][c] = d if (r + c) % 2 == 0 else -d
    for c in range(3):
        col = [cof[c][j] for j in range(3)]  # adj = cofactor transpose
        if any(not e.is_zero for e in col):
            g = poly_gcd_list([e for e in col if not e.is_zero])
            return [
                HomogeneousPoly.zero() if e.is_zero else e.divexact(g) for e in col
            ]
    return None


def _span_rank(forms: Sequence[HomogeneousPoly]) -> int:
    nz = [f for f in forms if not f.is_zero]
    if not nz:
        return 0
    deg = nz[0].degree
    rows = [list(f.coefficient_vector(deg)) for f in nz]
    return _rank(rows)


@dataclass
class CaseReport:
    verdict: Verdict
    flags: dict[str, bool]

    @property
    def in_wo(self) -> bool:
        return all(self.flags.values())


def _block(m: PolyMatrix, src_type: int, tgt_type: int) -> list[list[HomogeneousPoly]]:
    rows = _positions(m.type.target)[tgt_type]
    cols = _positions(m.type.source)[src_type]
    return [[m.entries[r][c] for c in cols] for r in rows]


def check_case(
    m: PolyMatrix, case: CaseSpec, n: int, budget: int = 1000, seed: int = 0
) -> CaseReport:
    """Evaluate a matrix against a registry case: membership flags for the
    open stratum plus a destabilizer search at the case's interior
    polarization."""
    expected = case.resolution(n)
    if (
        m.type.source.summands != expected.source.summands
        or m.type.target.summands != expected.target.summands
    ):
        raise ValueError("matrix type does not match the case resolution")
    flags: dict[str, bool] = {}
    for tag in case.checks:
        if tag == "scalars_zero":
            ok = True
            for (i, l) in expected.zeroed:
                for row in _block(m, i, l):
                    for e in row:
                        if not e.is_zero:
                            ok = False
            flags[tag] = ok
        elif tag == "det_nonzero":
            flags[tag] = (
                m.nrows == m.ncols and not determinant(m).is_zero
            )
        elif tag == "phi11_li":
            entries = [e for row in _block(m, 0, 0) for e in row]
            flags[tag] = linearly_independent(entries)[0]
        elif tag == "phi11_span2":
            entries = [e for row in _block(m, 0, 0) for e in row]
            _, rank = linearly_independent([e for e in entries if not e.is_zero])
            flags[tag] = rank >= 2
        elif tag == "phi11_stable2x3":
            grid = _block(m, 0, 0)
            sub = PolyMatrix(
                MorphismType.make(
                    [(-2, len(grid[0]))], [(-1, len(grid))]
                ),
                grid,
            )
            minors = maximal_minors(sub)
            flags[tag] = linearly_independent(minors)[0]
        elif tag == "phi22_li":
            entries = [e for row in _block(m, 1, 1) for e in row]
            flags[tag] = linearly_independent(entries)[0]
        elif tag == "phi21_nonzero":
            entries = [e for row in _block(m, 0, 1) for e in row]
            flags[tag] = any(not e.is_zero for e in entries)
        elif tag == "phi22_koszul":
            grid = _block(m, 1, 1)
            sub = PolyMatrix(
                MorphismType.make([(-1, 3)], [(0, 3)]), grid
            )
            flags[tag] = koszul_test(sub) is KoszulClass.KOSZUL
        else:
            raise ValueError(f"unknown check tag {tag!r}")
    verdict = search_destabilizer(m, case.sample_polarization(n), budget, seed)
    return CaseReport(verdict, flags)
