#!/usr/bin/env python3
"""Regenerate the summary table and report timing and golden-data agreement.

Writes the human-readable table to stdout and, with --json FILE, the
machine-readable variant next to it.  Exits nonzero when any codimension or
region deviates from the published values.
"""

import argparse
import json
import sys
import time

from sheafmod.cli import region_text
from sheafmod.goldens import expected_codim, expected_region_vertices
from sheafmod.registry import load_registry


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--json", help="also write the JSON variant to this path")
    args = ap.parse_args()
    t0 = time.time()
    doc = []
    bad = 0
    for case in load_registry():
        print(f"== {case.id}  [r = {case.r_expr}, chi = {case.chi_expr}]")
        print(f"   conditions: {case.conditions}")
        rows = []
        for n in case.ns():
            codim = case.codim(n)
            region = case.region(n)
            verts = tuple(tuple(v) for v in region.vertices)
            ok = codim == expected_codim(case.id, n) and verts == expected_region_vertices(case.id, n)
            bad += 0 if ok else 1
            mark = "" if ok else "  << differs from published data"
            print(
                f"   n={n:<3d} codim {codim:<3d} quotient {case.quotient_kind(n):<10s}"
                f" region {region_text(region)}{mark}"
            )
            rows.append({"n": n, "codim": codim, "region": region.to_json_dict()})
        doc.append({"id": case.id, "rows": rows})
    elapsed = time.time() - t0
    print(f"\n{len(doc)} blocks in {elapsed:.2f}s; mismatches: {bad}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
