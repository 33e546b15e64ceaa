"""Manufactured-solution convergence against three exact families.

    python3 demos/mms_study.py
"""
from westervelt.exact import make_deg2, make_deg3, make_similarity
from westervelt.pde import mms_convergence, observed_orders

STUDIES = [
    ("deg2 (static, exact in space)", make_deg2(a1=0.3, a3=2.0, beta=0.2),
     dict(nx0=17, x0=-1.0, x1=1.0, t_end=0.25)),
    ("deg3 (uniform in x)", make_deg3(1.0, beta=1.0),
     dict(nx0=16, x0=0.0, x1=1.0, t_end=0.5, bc="periodic")),
    ("similarity, singular branch", make_similarity("singular", beta=1.0),
     dict(nx0=33, x0=0.5, x1=2.5, t0=1.0, t_end=1.2)),
]

if __name__ == "__main__":
    for name, sol, kw in STUDIES:
        errs = mms_convergence(sol, 4, **kw)
        orders = observed_orders(errs)
        print(name)
        for (h, e), o in zip(errs, [float("nan")] + orders):
            print(f"  h={h:.5f}  error={e:.3e}  order={o:.3f}")
