"""Reference-target checks for model runs.

Each check compares one measured number against a published target and a
tolerance. The CLI ``reproduce`` command and the acceptance suite both build
on these helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TriadicNetError
from .graph import EventLog
from .measures import (
    degree_distribution,
    degree_pcc,
    fit_loglog_slope,
    growth_stats,
    measure_pa,
    nn_degree_curves,
    tick_for_size,
)
from .model import ModelParams, Simulator

TABLE3 = {  # (x kind, y kind) -> alpha
    ("kf", "kf"): 0.95,
    ("ks", "kf"): 0.84,
    ("kf", "ks"): 0.85,
    ("ks", "ks"): 0.89,
    ("kp", "kp"): 0.91,
}
TABLE3_TOL = 0.15

# kind -> (beta_sigma, tol, beta_r, tol)
TABLE2 = {
    "kf": (0.25, 0.07, 0.0, 0.05),
    "ks": (0.28, 0.07, 0.05, 0.05),
    "kp": (0.5, 0.10, 0.0, 0.05),
}
CONST_THETA = 2020.0


@dataclass
class Check:
    name: str
    value: float | None
    target: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        v = "n/a" if self.value is None else f"{self.value:.3f}"
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{tag}  {self.name:<34} {v:>8}  target {self.target}{extra}"


def _within(name, value, target, tol) -> Check:
    ok = value is not None and not math.isnan(value) and abs(value - target) <= tol
    return Check(name, value, f"{target:g} +/- {tol:g}", ok)


def _in_range(name, value, lo, hi, closed=True) -> Check:
    if value is None or math.isnan(value):
        return Check(name, value, f"[{lo:g}, {hi:g}]", False)
    ok = lo <= value <= hi if closed else lo < value < hi
    br = ("[", "]") if closed else ("(", ")")
    return Check(name, value, f"{br[0]}{lo:g}, {hi:g}{br[1]}", ok)


def simulate(params: ModelParams | None = None, constant_theta: bool = False, **overrides) -> Simulator:
    """Run the model (reference parameters unless given); returns the Simulator.

    ``constant_theta`` pins every threshold to the midpoint of the reference range.
    """
    params = ModelParams(**overrides) if params is None else params.replace(**overrides)
    if constant_theta:
        params = params.replace(theta_range=(CONST_THETA, CONST_THETA))
    sim = Simulator(params)
    sim.run()
    return sim


def growth_window(log: EventLog) -> tuple[int, int]:
    """Window from 90% of the final user count to the end of the log."""
    n_final = log.n_users
    return tick_for_size(log, int(round(0.9 * n_final))), log.t_last


def table3(log: EventLog, dt: int | None = None, t0_list=None) -> list[Check]:
    out = []
    for (xk, yk), target in TABLE3.items():
        name = f"alpha kappa^{yk[1]}({xk})"
        try:
            est = measure_pa(log, xk, yk, t0_list=t0_list, dt=dt)
        except TriadicNetError as exc:
            out.append(Check(name, None, f"{target:g} +/- {TABLE3_TOL:g}", False, str(exc)))
            continue
        c = _within(name, est.alpha, target, TABLE3_TOL)
        c.detail = f"{est.windows_used} windows"
        out.append(c)
    return out


def table2(log: EventLog, t0: int | None = None, t1: int | None = None) -> list[Check]:
    if t0 is None or t1 is None:
        t0, t1 = growth_window(log)
    out = []
    for kind, (bs, bs_tol, br, br_tol) in TABLE2.items():
        g = growth_stats(log, kind, t0, t1)
        out.append(_within(f"beta(sigma) {kind}", g.beta_sigma, bs, bs_tol))
        out.append(_within(f"beta(r) {kind}", g.beta_r, br, br_tol))
    return out


def constant_theta(log: EventLog, t0: int | None = None, t1: int | None = None) -> list[Check]:
    if t0 is None or t1 is None:
        t0, t1 = growth_window(log)
    out = []
    for kind in ("kf", "ks"):
        g = growth_stats(log, kind, t0, t1)
        out.append(_in_range(f"const-theta beta(sigma) {kind}", g.beta_sigma, 0.4, 0.6))
    return out


def fig4(log: EventLog) -> list[Check]:
    g = log.final_graph
    out = []
    for kind in ("ks", "kf"):
        d = degree_distribution(g, kind)
        c = _in_range(f"degree exponent {kind}", d.exponent, 1.0, 2.0, closed=False)
        c.detail = f"R2={d.fit.r2:.3f}, mean={d.mean_degree:.1f}"
        c.passed = c.passed and d.fit.r2 >= 0.9
        out.append(c)
    pcc = degree_pcc(g, "ks", "kf")
    out.append(Check("PCC(ks, kf)", pcc, ">= 0.8", pcc >= 0.8))
    return out


def fig5(log: EventLog) -> list[Check]:
    nn = nn_degree_curves(log.final_graph)
    out = []
    x, y, cnt = nn.kf_binned
    keep = cnt >= 10
    fit = fit_loglog_slope(x[keep], y[keep])
    c = _within("slope <kp_nn>(kf)", fit.slope, 0.0, 0.1)
    out.append(c)
    # top decade of k_p, on the exact per-degree curve
    kp, knn = nn.kp_values, nn.knn_f_by_kp
    top = kp.max()
    sel = (kp > top / 10.0) & (kp > 0)
    try:
        s = fit_loglog_slope(kp[sel], knn[sel]).slope
        out.append(Check("slope <kf_nn>(kp), top decade", s, "< 0", s < 0))
    except TriadicNetError as exc:
        out.append(Check("slope <kf_nn>(kp), top decade", None, "< 0", False, str(exc)))
    return out


def nn_shape(log: EventLog) -> dict:
    """Binned NN curves as plain lists (informational)."""
    nn = nn_degree_curves(log.final_graph)
    return {
        "kp_nn_by_kf": [list(map(float, a)) for a in nn.kf_binned],
        "kf_nn_by_kp": [list(map(float, a)) for a in nn.kp_binned],
    }


def format_checks(title: str, checks: list[Check]) -> str:
    lines = [title] + ["  " + c.line() for c in checks]
    return "\n".join(lines)


def all_passed(checks) -> bool:
    return bool(checks) and all(c.passed for c in checks)


__all__ = [
    "Check", "TABLE2", "TABLE3", "TABLE3_TOL", "CONST_THETA", "simulate", "growth_window",
    "table2", "table3", "constant_theta", "fig4", "fig5", "nn_shape", "format_checks", "all_passed",
]
