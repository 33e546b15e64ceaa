"""Two facts about the energy-like integrals, measured along a run.

The K integrand equals -Tv3/5 at every sample.  Under grid refinement the
variation of E shrinks like h^2, while that of the H integrand settles
at a nonzero value, so H is not a conserved quantity.

    python3 demos/k_h_ratio.py
"""
import numpy as np

from westervelt.observables import MonitorRecorder
from westervelt.pde import InitProfile, SolverConfig, run

if __name__ == "__main__":
    print("   nx   max|K + Tv3/5|   spread of E   spread of H")
    for nx in (256, 512, 1024):
        cfg = SolverConfig(beta=0.1, x0=-10.0, x1=10.0, nx=nx, t_end=2.0, output_every=20,
                           init=InitProfile("gaussian", 1.0))
        rec = MonitorRecorder(cfg, ["K", "Tv3", "E", "H"])
        run(cfg, callback=rec)
        s = {k: v.values for k, v in rec.series.items()}
        gap = np.max(np.abs(s["K"] + s["Tv3"] / 5))
        print(f"{nx:5d}   {gap:14.2e}   {np.ptp(s['E']):11.3e}   {np.ptp(s['H']):11.3e}")
