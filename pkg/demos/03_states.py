"""Spatial shape of the approximate resonance states and their order dependence.

Raising the order adds Blaschke factors for the other poles.  Long-lived
poles barely notice; the broad third pole of the wide barrier changes
shape markedly, and on the thin barrier successive orders settle down.

    python3 demos/03_states.py
"""
import numpy as np

from barrier_resonances import BarrierParams, approximate_state, lowest_poles, spatial_state
from barrier_resonances.resonance import default_xgrid, density_distance, l2_distance


def sample(params, poles, j, order, x):
    st = approximate_state(poles, j, order)
    return spatial_state(st.j, st.poles, x, params)


if __name__ == "__main__":
    wide = BarrierParams(2.0, 3.0, 10.0)
    poles = lowest_poles(wide, 10)
    x = default_xgrid(wide, 300)
    print("wide barrier: density L1 distance between orders 0 and 9")
    for j in range(3):
        s0, s9 = sample(wide, poles, j, 0, x), sample(wide, poles, j, 9, x)
        inside = np.sum(s0.density[x < wide.a]) / np.sum(s0.density)
        print(f"  pole {j}: {density_distance(s0, s9):.4f}   "
              f"(share of order-0 density in the well {inside:.2f})")

    thin = BarrierParams(2.0, 2.1, 10.0)
    poles = lowest_poles(thin, 10)
    x = default_xgrid(thin, 300)
    seq = [sample(thin, poles, 2, n, x) for n in range(10)]
    d = [l2_distance(a, b) for a, b in zip(seq, seq[1:])]
    print("\nthin barrier, third pole: L2 distance between successive orders")
    print("  " + "  ".join(f"{v:.3f}" for v in d))
