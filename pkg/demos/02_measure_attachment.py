"""Measure the attachment kernel from an event log.

The relative attachment probability is estimated over a set of time
windows, accumulated into kappa, and the slope of log kappa against log k
gives 1 + alpha. A linear kernel gives alpha close to 1. At this size
the social-degree kernels are noisy; the full 100,000-user run is in
the acceptance suite.
"""
from triadic_net import ModelParams, run
from triadic_net.measures import measure_pa

log, _ = run(ModelParams(n_final=8000, seed=3))

for x_kind, y_kind in [("kf", "kf"), ("ks", "kf"), ("kf", "ks"), ("ks", "ks"), ("kp", "kp")]:
    est = measure_pa(log, x_kind, y_kind)
    print(f"kappa^{y_kind[1]}({x_kind}): alpha={est.alpha:.3f} "
          f"windows={est.windows_used} fit x in {est.fit_window}")

# The curve itself: x, kappa(x)
est = measure_pa(log, "kp", "kp")
for x, k in list(zip(est.x, est.kappa))[:10]:
    print(f"  k_p={x:4d}  kappa={k:.4f}")
