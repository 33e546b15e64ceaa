"""Exact solutions, their branch solvers and the point-symmetry flows.

    python3 demos/exact_families.py
"""
from westervelt.exact import (
    fd_residual_orders, group_transform, make_deg3, make_deg4, make_similarity, psi0,
)

if __name__ == "__main__":
    print("psi0 on the nonsingular branch")
    for z in (0.0, 0.5, 1.0, 10.0, 1e3, 1e6):
        print(f"  z={z:<8g} psi0={psi0(z):.12g}")
    print(f"  z=1e-4 singular branch: z^2 psi0 = {1e-8 * psi0(1e-4, 'singular'):.12f}")

    hs = (2e-2, 1e-2, 5e-3)
    cases = [("deg3", make_deg3(1.0), [(0.2, 0.1), (0.4, 0.5)]),
             ("deg4a", make_deg4("a2zero", 1.0), [(0.2, 0.1), (0.1, -0.1)]),
             ("similarity", make_similarity(), [(1.0, 0.3), (1.2, 0.8)])]
    print("finite-difference residual orders of transformed solutions (eps = 0.1)")
    for name, sol, pts in cases:
        for gen in ("X1", "X2", "X3", "X4"):
            res, orders = fd_residual_orders(group_transform(sol, gen, 0.1), pts, hs)
            print(f"  {gen} {name:<11} residuals " + " ".join(f"{r:.2e}" for r in res)
                  + "  orders " + " ".join(f"{o:.3f}" for o in orders))
