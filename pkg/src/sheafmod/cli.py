"""Command-line front end.

Subcommands: table, region, codim, check, kernel, dual, section, classify,
hilbert.  Exit codes: 0 success, 1 domain error, 2 usage error.  All output
is canonical: rationals in lowest terms, vertices sorted lexicographically,
so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bundles import format_resolution_spec, parse_resolution_spec
from .cohomology import CohomologyTable, serre_dual_table
from .goldens import expected_codim, expected_region_vertices
from .hilbert import LinearClass, hilbert_of_resolution
from .polymatrix import (
    adapt_to_point,
    adapt_to_span,
    cubic_section,
    determinant,
    format_matrix_file,
    kernel_line,
    parse_matrix_file,
    parse_poly,
    quartic_reconstruct,
    quartic_section,
    transpose_dual,
)
from .regions import Polarization, Region, classify_shapes, dual_polarization, enumerate_shapes
from .registry import case_by_id, load_registry
from .stability import check_case


def _fmt_pt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def region_text(region: Region) -> str:
    """One-line canonical rendering of a region."""
    if region.empty:
        return "empty"
    if region.affine_dim == 0:
        name = region.free_vars[0] if region.free_vars else "point"
        if region.free_vars:
            return f"{name} = {region.vertices[0][0]}"
        return "point"
    if len(region.free_vars) == 1:
        (lo,), (hi,) = region.vertices
        name = region.free_vars[0]
        lo_op = "<" if _endpoint_strict(region, (lo,)) else "<="
        hi_op = "<" if _endpoint_strict(region, (hi,)) else "<="
        return f"{lo} {lo_op} {name} {hi_op} {hi}"
    kinds = {1: "open segment with endpoints", 2: "open polygon with vertices"}
    label = kinds[region.affine_dim]
    return label + " " + ", ".join(_fmt_pt(v) for v in region.vertices)


def _endpoint_strict(region: Region, v) -> bool:
    return any(f.strict and f.value(v) == 0 for f in region.facets)


def cmd_table(args) -> int:
    cases = load_registry()
    if args.case:
        cases = tuple(c for c in cases if c.id == args.case)
        if not cases:
            raise KeyError(f"no case {args.case!r}")
    if args.n is not None and not args.case:
        cases = tuple(c for c in cases if c.admits(args.n))
    out_rows = []
    mismatches = []
    for case in cases:
        ns = [args.n] if args.n is not None else list(case.ns())
        rows = []
        for n in ns:
            if not case.admits(n):
                raise ValueError(f"case {case.id} does not admit n={n}")
            codim = case.codim(n)
            region = case.region(n)
            verts = tuple(tuple(v) for v in region.vertices)
            if codim != expected_codim(case.id, n):
                mismatches.append(f"{case.id} n={n}: codim {codim} != published")
            if verts != expected_region_vertices(case.id, n):
                mismatches.append(f"{case.id} n={n}: region != published")
            rows.append((n, codim, region, case.quotient_kind(n)))
        out_rows.append((case, rows))
    if args.json:
        doc = []
        for case, rows in out_rows:
            doc.append(
                {
                    "id": case.id,
                    "r": case.r_expr,
                    "chi": case.chi_expr,
                    "conditions": case.conditions,
                    "resolution": case.resolution_spec,
                    "rows": [
                        {
                            "n": n,
                            "codim": codim,
                            "quotient": quot,
                            "region": region.to_json_dict(),
                        }
                        for n, codim, region, quot in rows
                    ],
                }
            )
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for case, rows in out_rows:
            print(f"== {case.id}  [r = {case.r_expr}, chi = {case.chi_expr}]")
            print(f"   conditions: {case.conditions}")
            print(f"   resolution: {case.resolution_spec}")
            for n, codim, region, quot in rows:
                print(
                    f"   n={n:<3d} codim {codim:<3d} quotient {quot:<10s} "
                    f"region {region_text(region)}"
                )
        print(f"{len(out_rows)} blocks rendered.")
    if mismatches:
        for m in mismatches:
            print("MISMATCH: " + m, file=sys.stderr)
        return 1
    if not args.json:
        print("All codimensions and regions match the published table.")
    return 0


def cmd_region(args) -> int:
    case = case_by_id(args.case)
    region = case.region(args.n)
    if args.json:
        print(json.dumps(region.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(f"region for {case.id} at n={args.n}: {region_text(region)}")
    return 0


def cmd_codim(args) -> int:
    case = case_by_id(args.case)
    print(case.codim(args.n))
    return 0


def cmd_check(args) -> int:
    case = case_by_id(args.case)
    n = args.n if args.n is not None else case.n_range[0]
    with open(args.matrix, "r", encoding="utf-8") as fh:
        m = parse_matrix_file(fh.read())
    report = check_case(m, case, n, budget=args.budget, seed=args.seed)
    for name, ok in sorted(report.flags.items()):
        print(f"{name}: {'ok' if ok else 'FAIL'}")
    print(f"verdict: {report.verdict}")
    w = report.verdict.witness
    if w is not None and args.witness_out:
        from .stability import realize_witness

        g, h, transformed = realize_witness(m, w)
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(format_matrix_file(transformed))
            fh.write(f"# witness shape: {w.shape}\n")
            fh.write("# zero block: leading rows/columns of the named types\n")
            fh.write("# row transform:\n")
            for row in g:
                fh.write("# " + " ".join(str(x) for x in row) + "\n")
            fh.write("# column transform:\n")
            for row in h:
                fh.write("# " + " ".join(str(x) for x in row) + "\n")
    return 0


def cmd_kernel(args) -> int:
    with open(args.matrix, "r", encoding="utf-8") as fh:
        m = parse_matrix_file(fh.read())
    result = kernel_line(m)
    if result is None:
        print("no kernel line: every maximal minor vanishes")
        return 0
    beta, d = result
    print("(" + " | ".join(str(b) for b in beta) + f"), d={d}")
    return 0


def cmd_dual(args) -> int:
    did = 0
    if args.type:
        t, _ = parse_resolution_spec(args.type)
        print(format_resolution_spec(t.dual()))
        did += 1
    if args.polarization:
        if not args.type:
            raise ValueError("--polarization needs --type for the arity")
        t, _ = parse_resolution_spec(args.type)
        lam, mu = args.polarization.split(";")
        p = Polarization(
            [Fraction(x) for x in lam.split(",")],
            [Fraction(x) for x in mu.split(",")],
        )
        q = dual_polarization(p, t)
        print(
            ",".join(str(x) for x in q.lambdas)
            + ";"
            + ",".join(str(x) for x in q.mus)
        )
        did += 1
    if args.matrix:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            m = parse_matrix_file(fh.read())
        sys.stdout.write(format_matrix_file(transpose_dual(m)))
        did += 1
    if args.table:
        vals = args.table.split(",")
        r, chi = int(vals[0]), int(vals[1])
        hs = [int(x) for x in vals[2:]]
        t = CohomologyTable(LinearClass(r, chi), *hs)
        d = serre_dual_table(t)
        print(f"class: r={d.klass.r}, chi={d.klass.chi}")
        for label, h0, h1 in d.rows():
            print(f"{label:<14s} h0={h0:<3d} h1={h1}")
        did += 1
    if not did:
        raise ValueError("dual needs one of --type/--polarization/--matrix/--table")
    return 0


def cmd_section(args) -> int:
    f = parse_poly(args.f)
    if args.cubic:
        point = [Fraction(x) for x in args.point.split(",")]
        m = cubic_section(point, f)
    else:
        s1, s2 = args.span.split(";")
        m = quartic_section((parse_poly(s1), parse_poly(s2)), f)
    sys.stdout.write(format_matrix_file(m))
    if args.cubic:
        adapted = adapt_to_point(point, f)
        det = determinant(m)
        ok = det.terms == adapted.terms
        print(f"# det check: {det} == f (adapted frame): {'ok' if ok else 'FAIL'}")
    else:
        adapted = adapt_to_span((parse_poly(s1), parse_poly(s2)), f)
        rec = quartic_reconstruct(m)
        ok = rec.terms == adapted.terms
        print(
            f"# reconstruction check: {rec} == f (adapted frame): "
            f"{'ok' if ok else 'FAIL'}"
        )
    return 0


def cmd_classify(args) -> int:
    case = case_by_id(args.case)
    n = args.n
    t = case.resolution(n)
    if args.polarization:
        lam, mu = args.polarization.split(";")
        p = Polarization(
            [Fraction(x) for x in lam.split(",")],
            [Fraction(x) for x in mu.split(",")],
        )
    else:
        p = case.sample_polarization(n)
    labels = classify_shapes(t, p)
    destab = sum(1 for v in labels.values() if v)
    print(f"polarization: {p}")
    print(f"{len(labels)} shapes, {destab} destabilizing")
    for s in enumerate_shapes(t):
        print(f"{'D' if labels[s] else '.'} {s}")
    return 0


def cmd_hilbert(args) -> int:
    t, kernel = parse_resolution_spec(args.resolution)
    print(hilbert_of_resolution(t, kernel))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sheafmod",
        description="Exact semistability toolkit for sheaf morphisms on the plane",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="render the summary table and diff against the published data")
    p.add_argument("--case", help="restrict to one case id")
    p.add_argument("--n", type=int, help="restrict to one n")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("region", help="admissible polarization region of a case")
    p.add_argument("--case", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_region)

    p = sub.add_parser("codim", help="stratum codimension of a case")
    p.add_argument("--case", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_codim)

    p = sub.add_parser("check", help="check a matrix file against a case")
    p.add_argument("--case", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--witness-out")
    p.add_argument("matrix")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("kernel", help="kernel line of a k x (k+1) matrix file")
    p.add_argument("matrix")
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("dual", help="duality transforms")
    p.add_argument("--type")
    p.add_argument("--polarization", help="lambdas;mus e.g. 1/6,5/12;1/3")
    p.add_argument("--matrix")
    p.add_argument("--table", help="r,chi,h0m1,h1m1,h0,h1,h0om,h1om")
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("section", help="cubic/quartic section matrices")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cubic", action="store_true")
    g.add_argument("--quartic", action="store_true")
    p.add_argument("--point", help="projective point a,b,c (cubic)")
    p.add_argument("--span", help="two linear forms separated by ';' (quartic)")
    p.add_argument("--f", required=True, help="the form to split")
    p.set_defaults(fn=cmd_section)

    p = sub.add_parser("classify", help="destabilizing/allowed shape partition")
    p.add_argument("--case", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--polarization")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("hilbert", help="Hilbert polynomial of a resolution spec")
    p.add_argument("resolution")
    p.set_defaults(fn=cmd_hilbert)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, TypeError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
