"""Drift of the conserved integrals for a Gaussian pulse under grid refinement.

    python3 demos/conservation_run.py
"""
from westervelt.observables import MonitorRecorder
from westervelt.pde import InitProfile, SolverConfig, run

IDS = ["C1", "C2", "C3", "C4", "E", "M", "Tv3", "Tv4"]


def drifts(nx):
    cfg = SolverConfig(beta=0.1, x0=-10.0, x1=10.0, nx=nx, t_end=1.0, output_every=1,
                       init=InitProfile("gaussian", 1.0))
    rec = MonitorRecorder(cfg, IDS)
    run(cfg, callback=rec)
    return {k: rel for k, (_, rel) in rec.drift().items()}


if __name__ == "__main__":
    rows = {nx: drifts(nx) for nx in (256, 512, 1024)}
    print("monitor " + "".join(f"{'nx=' + str(n):>12}" for n in rows) + "   ratios")
    for mid in IDS:
        vals = [rows[n][mid] for n in rows]
        ratios = [a / b for a, b in zip(vals, vals[1:])]
        print(f"{mid:<8}" + "".join(f"{v:12.2e}" for v in vals)
              + "   " + " ".join(f"{r:6.2f}" for r in ratios))
