"""Grow a small network and look at what the model produced.

Run with ``python3 demos/01_grow_network.py``. Takes a few seconds.
"""
import numpy as np

from triadic_net import ModelParams, Simulator
from triadic_net.measures import triadic_fraction

# Reference dynamics, just a smaller population.
params = ModelParams(n_final=5000, seed=42)
sim = Simulator(params)
log, reports = sim.run()
g = sim.graph

print(f"users={g.n_users} items={g.n_items} social={g.n_social_links} cross={g.n_cross_links}")
print(f"events in log: {len(log)}, ticks: {log.t_last}")

# Every link made by a walk closes a triangle; seed links at t=0 are excluded.
print("triadic fraction, social:", triadic_fraction(log, "social", start_time=1))
print("triadic fraction, cross: ", triadic_fraction(log, "cross", start_time=1))

# Degree summaries
for kind in ("ks", "kf", "kp"):
    k = g.degrees(kind)
    print(f"{kind}: mean={k.mean():.2f} max={k.max()} median={np.median(k):.0f}")

# Activation interval by social degree; older users dominate the high bins.
interval = sim.mean_activation_interval()
ks = g.k_s()
ok = np.isfinite(interval)
for lo, hi in [(1, 5), (5, 20), (20, 100), (100, 10**9)]:
    sel = ok & (ks >= lo) & (ks < hi)
    if sel.any():
        print(f"k_s in [{lo}, {hi}): mean activation interval {interval[sel].mean():.1f} ticks")

# Per-tick bookkeeping
last = reports[-1]
print("last tick:", last)
