"""Survival amplitude of the zeroth-order resonance state.

A(t) splits into the semigroup part exp(-i mu t) and a background R(t)
whose size is capped by the pole's bound.  The script prints both along a
time grid spanning five lifetimes and optionally writes the curve to CSV.

    python3 demos/02_survival.py [out.csv]
"""
import sys

import numpy as np

from barrier_resonances import BarrierParams, lowest_poles, survival_amplitude
from barrier_resonances.evolution import short_time_exponent


def report(label, pole, out=None):
    c = survival_amplitude(pole)
    gamma = pole.gamma
    print(f"{label}: mu = {pole.mu:.5f}, 1/Gamma = {1 / gamma:.4g}")
    print(f"  bound {c.bound:.4f}, max|R| {np.max(np.abs(c.r_t)):.4g}")
    print(f"  max ||A|^2 - exp(-Gamma t)| = "
          f"{np.max(np.abs(c.survival - np.exp(-gamma * c.tgrid))):.3g}")
    # <E> diverges for a Lorentzian weight, so the loss starts linearly in t
    print(f"  short-time exponent of 1 - |A|^2: {short_time_exponent(c):.3f}")
    for t in np.linspace(0, c.tgrid[-1], 6):
        i = int(np.argmin(np.abs(c.tgrid - t)))
        print(f"    t={c.tgrid[i]:10.4g}  |A|^2={c.survival[i]:.6f}  "
              f"exp={np.exp(-gamma * c.tgrid[i]):.6f}  |R|={abs(c.r_t[i]):.3g}")
    if out:
        np.savetxt(out, np.column_stack([c.tgrid, c.survival, np.abs(c.r_t)]),
                   delimiter=",", header="t,abs_a_sq,abs_r", comments="")
        print(f"  wrote {out}")
    print()


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else None
    report("wide barrier, first pole", lowest_poles(BarrierParams(2.0, 3.0, 10.0), 1)[0], out)
    report("thin barrier, third pole", lowest_poles(BarrierParams(2.0, 2.1, 10.0), 3)[2])
