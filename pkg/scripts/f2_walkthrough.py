#!/usr/bin/env python3
"""Worked example on the second Hirzebruch surface.

Prints every stage of the pipeline: fan data, hypergeometric series, mirror
map, correction terms, potential, Jacobi matrix and the two lift routes,
ending with the full verification report.
"""

import argparse

from toriclg import (builtin, correction_terms, g0_series, jacobi_matrix, mirror_map,
                     potential, run_verification, seidel_lifts_closed,
                     seidel_lifts_jacobi)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--order", type=int, default=8)
    args = parser.parse_args()
    order = args.order

    tv = builtin("f2")
    print("== fan ==")
    print("rays:", tv.fan.rays)
    print("max cones (0-based):", tv.fan.max_cones)
    print("divisor matrix:", tv.basis.matrix)
    print("wall curve classes:", tv.wall_classes)
    print("Mori generators:", tv.cones.mori_generators,
          " nef generators:", tv.cones.nef_generators)
    print("fan polytope vertices (1-based):", sorted(i + 1 for i in tv.vertex_rays))

    print("\n== hypergeometric series ==")
    for j in range(tv.m):
        print(f"g0^({j + 1}) =", g0_series(tv, j, order))

    print("\n== mirror map ==")
    mm = mirror_map(tv, order)
    for a in range(tv.r):
        print(f"g_{a + 1}(y) =", mm.forward[a])
    for a in range(tv.r):
        print(f"y_{a + 1} = q_{a + 1} * ({mm.inverse_units[a]})")

    print("\n== correction terms and potential ==")
    corr = correction_terms(tv, order)
    for j, f in enumerate(corr.series):
        print(f"f_{j + 1} =", f)
    pot = potential(tv, order)
    print("W =", " + ".join(f"({f})*z{j + 1}" for j, f in enumerate(corr.series)))
    print("as a disc-ring series:", pot.total)

    print("\n== Jacobi matrix (rows k, columns i; z_i dw_k/dz_i = A_ki z_k) ==")
    print(jacobi_matrix(tv, order))

    print("\n== lifted Seidel elements ==")
    for label, lifts in (("inverse Jacobi", seidel_lifts_jacobi(tv, order)),
                         ("closed formula", seidel_lifts_closed(tv, order))):
        print(f"via {label}:")
        for j, lift in enumerate(lifts):
            terms = " , ".join(f"({s})*D{i + 1}" for i, s in enumerate(lift)
                               if not s.is_zero())
            print(f"  Shat_{j + 1} = {terms}")

    print("\n== verification ==")
    rep = run_verification(tv, order)
    for check in rep.checks:
        print(f"  {'PASS' if check.passed else 'FAIL'}  {check.name}")
    print("all checks passed" if rep.passed else "FAILURES FOUND")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
