#!/usr/bin/env python3
"""Region study of the nodal cubic x^3 + x^2*z - y^2*z (homogenized).

Reproduces, end to end:

1. the exact invariants — Aronhold S, the Hessian determinant polynomial,
   and the degree-6 bound certificates P_upper / P_lower;
2. a rational-grid affine slice (coordinate 0 pinned to 1): sign of F,
   sign of det Hess, index-cone membership (with the odd-degree antipodal
   lift), and the signs of both bound certificates, written as CSV;
3. connected-component counts of the two in-cone families in the window
   (F > 0 with x < 0; F < 0 pre-lift with x > 0 — the latter splits in two);
4. an exact cross-check at every in-cone grid point: the closed-form
   curvature R is <= 0 exactly when P_upper <= 0 (rational arithmetic,
   no floats);
5. witness searches for a point with R in [-3, 0] on the nodal and
   elliptic cubics, and the expected empty-cone report for three
   concurrent lines (F = 6xyz).

Usage:
    python3 scripts/nodal_region_study.py [--res N] [--half-width W]
        [--out region.csv] [--budget B] [--seed S]
"""

from __future__ import annotations

import argparse
import csv
import io
from collections import deque
from fractions import Fraction

from kcurv import aronhold, cli, fixtures


def component_count(cells: set[tuple[int, int]]) -> int:
    """Connected components of a set of grid cells, 4-neighbour adjacency."""
    seen: set[tuple[int, int]] = set()
    comps = 0
    for start in cells:
        if start in seen:
            continue
        comps += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            ix, iy = queue.popleft()
            for nb in ((ix + 1, iy), (ix - 1, iy), (ix, iy + 1), (ix, iy - 1)):
                if nb in cells and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return comps


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--res", type=int, default=200, help="grid resolution per axis")
    ap.add_argument("--half-width", type=Fraction, default=Fraction(3, 2),
                    help="window is [-W, W]^2 (rational, default 3/2)")
    ap.add_argument("--out", default="nodal_region.csv", help="CSV output path")
    ap.add_argument("--budget", type=int, default=10_000, help="witness budget")
    ap.add_argument("--seed", type=int, default=0, help="witness seed")
    args = ap.parse_args()

    F = fixtures.nodal_cubic()

    # -- 1. exact invariants ------------------------------------------------
    S = aronhold.aronhold_S(F)
    H = F.hessian_det_poly()
    bounds = aronhold.bound_polynomials(F)
    print(f"F        = {cli.format_form(F)}")
    print(f"S        = {S}")
    print(f"det Hess = {cli.format_form(H)}")
    for name in ("P_upper", "P_lower"):
        P = bounds[name]
        n_pos = sum(1 for c in P.terms.values() if c > 0)
        n_neg = sum(1 for c in P.terms.values() if c < 0)
        print(f"{name:8s} = {len(P.terms)} monomials ({n_pos} positive, {n_neg} negative)")

    # -- 2. region grid -----------------------------------------------------
    w = args.half_width
    text = cli.region_grid(F, 0, (-w, w, -w, w), args.res)
    with open(args.out, "w") as fh:
        fh.write(text)
    rows = list(csv.DictReader(io.StringIO(text)))
    print(f"\nwrote {args.out}: {len(rows)} grid points "
          f"({args.res}x{args.res}, window [{-w}, {w}]^2, coordinate 0 pinned to 1;"
          f" CSV x,y are the two free coordinates)")

    # -- 3. component counts ------------------------------------------------
    xs = sorted({Fraction(r["x"]) for r in rows})
    ys = sorted({Fraction(r["y"]) for r in rows})
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}

    fam_pos: set[tuple[int, int]] = set()   # F > 0, x < 0, in cone
    fam_neg: set[tuple[int, int]] = set()   # F < 0 pre-lift, x > 0, in cone
    in_cone_rows = []
    for r in rows:
        if r["in_index_cone"] != "1":
            continue
        in_cone_rows.append(r)
        x = Fraction(r["x"])
        cell = (xi[x], yi[Fraction(r["y"])])
        if r["signF"] == "1" and x < 0:
            fam_pos.add(cell)
        elif r["signF"] == "-1" and x > 0:
            fam_neg.add(cell)

    print(f"in-cone grid points: {len(in_cone_rows)}")
    print(f"  F > 0, x < 0: {len(fam_pos):5d} points, "
          f"{component_count(fam_pos)} connected component(s)")
    print(f"  F < 0, x > 0: {len(fam_neg):5d} points, "
          f"{component_count(fam_neg)} connected component(s) "
          f"(antipodal lift applies)")

    # -- 4. exact sign equivalence -------------------------------------------
    mismatches = 0
    for r in in_cone_rows:
        x = (Fraction(1), Fraction(r["x"]), Fraction(r["y"]))
        f, h = F.eval_exact(x), H.eval_exact(x)
        R = Fraction(-9, 4) + Fraction(6**6) * S * f * f / (4 * h * h)
        if (R <= 0) != (int(r["signPupper"]) <= 0):
            mismatches += 1
    print(f"exact (R <= 0) <=> (P_upper <= 0) at every in-cone point: "
          f"{mismatches} mismatches out of {len(in_cone_rows)}")

    # -- 5. witness searches ---------------------------------------------------
    print()
    for label, G in [("nodal cubic", F),
                     ("elliptic cubic", fixtures.elliptic_cubic()),
                     ("concurrent lines 6xyz", fixtures.concurrent_lines())]:
        rep = cli.witness(G, args.budget, args.seed)
        if rep["status"] == "found":
            print(f"witness {label:22s} found after {rep['examined']} points, "
                  f"R = {rep['R']:.6f}")
        else:
            print(f"witness {label:22s} not found ({rep['reason']}, "
                  f"{rep['examined']} examined)")

    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
