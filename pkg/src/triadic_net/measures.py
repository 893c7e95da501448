"""Statistics computed from event logs and graph snapshots.

Every function here is a pure function of its inputs, so simulated and
ingested logs go through exactly the same code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit, types
from numba.typed import Dict
from scipy import stats

from .errors import DegenerateSupport, EmptyClass, EmptyWindow, ZeroVariance
from .graph import CROSS, ITEM, SOCIAL, USER, DualGraph, EventLog, _apply_unchecked, _sized_graph_for

USER_KINDS = ("ks", "kf", "kin", "kout")
ITEM_KINDS = ("kp",)
MIN_BIN_COUNT = 10
MIN_FIT_POINTS = 5


# ---------------------------------------------------------------------------
# fitting


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    stderr: float
    r2: float
    n_points: int
    window: tuple[float, float]


def fit_loglog_slope(x, y, window=None) -> FitResult:
    """OLS fit of ln y against ln x, restricted to ``window`` (inclusive).

    Points with non-positive coordinates are dropped. Raises
    DegenerateSupport with fewer than five distinct x values left.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if window is not None:
        lo, hi = window
        keep &= (x >= lo) & (x <= hi)
    x, y = x[keep], y[keep]
    if np.unique(x).size < MIN_FIT_POINTS:
        raise DegenerateSupport(f"need >= {MIN_FIT_POINTS} distinct x values, got {np.unique(x).size}")
    lx, ly = np.log(x), np.log(y)
    res = stats.linregress(lx, ly)
    r2 = res.rvalue**2 if np.ptp(ly) > 0 else 1.0
    span = (float(x.min()), float(x.max()))
    return FitResult(float(res.slope), float(res.intercept), float(res.stderr), float(r2), int(x.size), span)


def _try_fit(x, y, window):
    try:
        return fit_loglog_slope(x, y, window), None
    except DegenerateSupport as exc:
        return None, str(exc)


def weighted_percentile(values, weights, q):
    """Smallest value whose cumulative weight share reaches q (0..100)."""
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    cum = np.cumsum(weights[order])
    if cum.size == 0 or cum[-1] <= 0:
        raise DegenerateSupport("no weight to take a percentile of")
    idx = np.searchsorted(cum, q / 100.0 * cum[-1] - 1e-12 * cum[-1])
    return float(values[order][min(idx, values.size - 1)])


# ---------------------------------------------------------------------------
# degree bookkeeping over logs


def _check_kind(log: EventLog, kind: str):
    if kind not in USER_KINDS + ITEM_KINDS:
        raise ValueError(f"unknown degree kind {kind!r}")
    if kind in ("kin", "kout") and not log.directed:
        raise ValueError(f"{kind} needs a log with directed social links")


def _increments(log: EventLog, kind: str):
    """(event position, node, triadic) for every unit increase of ``kind``.

    Arrival and item-creation links are classified against the graph before
    the event, which leaves them non-triadic.
    """
    cache = log.__dict__.setdefault("_increment_cache", {})
    if kind in cache:
        return cache[kind]
    _check_kind(log, kind)
    ann = log.annotations
    k, a, b, c = log.kind, log.a, log.b, log.c
    pos_all = np.arange(len(log), dtype=np.int64)
    parts = []  # (positions, nodes, triadic)

    def add(mask, nodes, tri):
        parts.append((pos_all[mask], nodes[mask], tri[mask] if tri is not None else np.zeros(int(mask.sum()), bool)))

    if kind == "ks":
        arrival = (k == USER) & (b >= 0)
        add(arrival, a, None)
        add(arrival, b, None)
        soc = (k == SOCIAL) & ann.new_pair
        add(soc, a, ann.triadic)
        add(soc, b, ann.triadic)
    elif kind == "kout":
        add((k == USER) & (b >= 0), a, None)
        add(k == SOCIAL, a, ann.triadic)
    elif kind == "kin":
        add((k == USER) & (b >= 0), b, None)
        add(k == SOCIAL, b, ann.triadic)
    elif kind == "kf":
        add((k == USER) & (c >= 0), a, None)
        add(k == ITEM, b, None)
        add(k == CROSS, a, ann.triadic)
    else:  # kp
        add((k == USER) & (c >= 0), c, None)
        add(k == ITEM, a, None)
        add(k == CROSS, b, ann.triadic)
    pos = np.concatenate([p[0] for p in parts])
    node = np.concatenate([p[1] for p in parts])
    tri = np.concatenate([p[2] for p in parts]).astype(bool)
    order = np.argsort(pos, kind="stable")
    out = (pos[order], node[order], tri[order])
    cache[kind] = out
    return out


def _node_count(log: EventLog, kind: str, stop: int) -> int:
    target = ITEM if kind in ITEM_KINDS else USER
    return int(np.count_nonzero(log.kind[:stop] == target))


def degrees_at(log: EventLog, kind: str, stop: int) -> np.ndarray:
    """Degree of every node of the right class after the first ``stop`` events."""
    pos, node, _ = _increments(log, kind)
    cut = np.searchsorted(pos, stop, side="left")
    n = _node_count(log, kind, stop)
    return np.bincount(node[:cut], minlength=n)[:n]


def _gains(log, kind, start, stop, n_nodes):
    pos, node, tri = _increments(log, kind)
    lo = np.searchsorted(pos, start, side="left")
    hi = np.searchsorted(pos, stop, side="left")
    nd, tr = node[lo:hi], tri[lo:hi]
    old = nd < n_nodes
    nd, tr = nd[old], tr[old]
    gain_t = np.bincount(nd[tr], minlength=n_nodes)[:n_nodes]
    gain_n = np.bincount(nd[~tr], minlength=n_nodes)[:n_nodes]
    return gain_t, gain_n


def tick_for_size(log: EventLog, n_users: int) -> int:
    """Time of the event that brought the user count to ``n_users``."""
    idx = np.flatnonzero(log.kind == USER)
    if not 1 <= n_users <= idx.size:
        raise ValueError(f"log never has {n_users} users")
    return int(log.time[idx[n_users - 1]])


# ---------------------------------------------------------------------------
# preferential attachment


@dataclass
class PaEstimate:
    """Attachment-rate histograms and their normalized/cumulative forms.

    Arrays are indexed by degree value ``x`` (``x = 0 .. x_max``); ``counts``,
    ``gain_t`` and ``gain_n`` are summed over all windows while ``pi_*`` are
    averages of the per-window normalized curves.
    """

    x_kind: str
    y_kind: str
    t0_list: list
    dt: int
    x: np.ndarray
    counts: np.ndarray
    gain_t: np.ndarray
    gain_n: np.ndarray
    pi_t: np.ndarray
    pi_n: np.ndarray
    kappa_t: np.ndarray
    kappa_n: np.ndarray
    windows_used: int
    fit_window: tuple[float, float] | None = None
    fit: FitResult | None = None
    fit_t: FitResult | None = None
    fit_n: FitResult | None = None
    fit_error: str | None = None

    @property
    def gain(self):
        return self.gain_t + self.gain_n

    @property
    def pi(self):
        return self.pi_t + self.pi_n

    @property
    def kappa(self):
        return np.cumsum(self.pi)

    @property
    def support(self):
        """Degree values observed among t0 nodes."""
        return self.x[self.counts > 0]

    @property
    def alpha(self):
        return None if self.fit is None else self.fit.slope - 1.0

    @property
    def alpha_t(self):
        return None if self.fit_t is None else self.fit_t.slope - 1.0

    @property
    def alpha_n(self):
        return None if self.fit_n is None else self.fit_n.slope - 1.0


def default_t0_list(log: EventLog, dt: int, n_windows: int = 20) -> list[int]:
    """``n_windows`` start times spread over the second half of the log."""
    lo = log.t_first + (log.t_last - log.t_first) // 2
    hi = log.t_last - dt
    if hi < lo:
        lo = log.t_first
    if hi < lo:
        raise EmptyWindow(f"dt={dt} longer than the log")
    return sorted({int(round(v)) for v in np.linspace(lo, hi, n_windows)})


def default_dt(log: EventLog) -> int:
    return 1 if log.directed else 100


def _valid_pair(x_kind, y_kind):
    if (x_kind in ITEM_KINDS) != (y_kind in ITEM_KINDS):
        raise ValueError(f"degree pair ({x_kind}, {y_kind}) mixes user and item degrees")


def measure_pa(log: EventLog, x_kind: str, y_kind: str, t0_list=None, dt: int | None = None,
               fit_quantile: float = 99.0) -> PaEstimate:
    """Relative rate at which ``y_kind`` grows as a function of ``x_kind`` at t0.

    For every t0, nodes present at t0 are grouped by their ``x_kind`` degree;
    the ``y_kind`` degree they gain during (t0, t0 + dt] is split by whether
    each link was triadic when it formed. Per-window curves are normalized
    before averaging. ``alpha = slope(ln kappa vs ln x) - 1``.
    """
    _check_kind(log, x_kind)
    _check_kind(log, y_kind)
    _valid_pair(x_kind, y_kind)
    if len(log) == 0:
        raise EmptyWindow("empty log")
    dt = default_dt(log) if dt is None else int(dt)
    if t0_list is None:
        t0_list = default_t0_list(log, dt)
    t0_list = [int(t) for t in t0_list]
    for t0 in t0_list:
        log.check_time(t0)
        log.check_time(t0 + dt)

    per_window = []
    x_max = 0
    for t0 in t0_list:
        start = log.position(t0)
        stop = log.position(t0 + dt)
        xdeg = degrees_at(log, x_kind, start)
        n = xdeg.size
        if n == 0:
            continue
        gt, gn = _gains(log, y_kind, start, stop, n)
        size = int(xdeg.max()) + 1
        cnt = np.bincount(xdeg, minlength=size)
        at = np.bincount(xdeg, weights=gt, minlength=size)
        an = np.bincount(xdeg, weights=gn, minlength=size)
        per_window.append((cnt, at, an, xdeg))
        x_max = max(x_max, size - 1)
    size = x_max + 1
    counts = np.zeros(size, dtype=np.int64)
    gain_t = np.zeros(size)
    gain_n = np.zeros(size)
    pi_t = np.zeros(size)
    pi_n = np.zeros(size)
    used = 0
    pooled_x = []
    for cnt, at, an, xdeg in per_window:
        k = cnt.size
        counts[:k] += cnt
        gain_t[:k] += at
        gain_n[:k] += an
        pooled_x.append(xdeg)
        ok = cnt > 0
        rate_t = np.zeros(k)
        rate_n = np.zeros(k)
        rate_t[ok] = at[ok] / cnt[ok]
        rate_n[ok] = an[ok] / cnt[ok]
        total = rate_t.sum() + rate_n.sum()
        if total <= 0:
            continue
        pi_t[:k] += rate_t / total
        pi_n[:k] += rate_n / total
        used += 1
    if used == 0:
        raise EmptyWindow(f"no {y_kind} gains in any window")
    pi_t /= used
    pi_n /= used
    est = PaEstimate(
        x_kind, y_kind, t0_list, dt, np.arange(size), counts, gain_t, gain_n, pi_t, pi_n,
        np.cumsum(pi_t), np.cumsum(pi_n), used,
    )
    _fit_pa(est, np.concatenate(pooled_x), fit_quantile)
    return est


def _fit_pa(est: PaEstimate, pooled_x, q):
    x = est.x.astype(np.float64)
    seen = est.counts > 0
    kappa = est.kappa
    first = np.flatnonzero(seen & (x >= 1) & (kappa > 0))
    if first.size == 0:
        est.fit_error = "kappa is zero over all positive degrees"
        return
    hi = float(np.percentile(pooled_x, q))
    window = (float(x[first[0]]), hi)
    est.fit_window = window
    sx = x[seen]
    est.fit, est.fit_error = _try_fit(sx, kappa[seen], window)
    est.fit_t, _ = _try_fit(sx, est.kappa_t[seen], window)
    est.fit_n, _ = _try_fit(sx, est.kappa_n[seen], window)


# ---------------------------------------------------------------------------
# growth rates


@dataclass
class GrowthStats:
    kind: str
    t0: int
    t1: int
    bin_index: np.ndarray  # floor(log2 k0)
    k0_mean: np.ndarray
    r_mean: np.ndarray
    r_std: np.ndarray
    counts: np.ndarray
    min_count: int
    fit_r: FitResult | None = None
    fit_sigma: FitResult | None = None
    fit_error: dict = field(default_factory=dict)

    @property
    def beta_r(self):
        return None if self.fit_r is None else -self.fit_r.slope

    @property
    def beta_sigma(self):
        return None if self.fit_sigma is None else -self.fit_sigma.slope


def log2_bins(values) -> np.ndarray:
    """Base-2 bin index of positive values: bin j holds [2**j, 2**(j+1))."""
    v = np.asarray(values, dtype=np.float64)
    return np.floor(np.log2(v)).astype(np.int64)


def growth_stats(log: EventLog, kind: str, t0: int, t1: int, min_count: int = MIN_BIN_COUNT) -> GrowthStats:
    """Mean and spread of ``r = ln(k1/k0)`` per log-binned initial degree."""
    _check_kind(log, kind)
    if t0 >= t1:
        raise ValueError("t0 must precede t1")
    log.check_time(t0)
    log.check_time(t1)
    k0 = degrees_at(log, kind, log.position(t0))
    k1 = degrees_at(log, kind, log.position(t1))[: k0.size]
    alive = k0 >= 1
    if not alive.any():
        raise DegenerateSupport(f"no node has {kind} >= 1 at t0={t0}")
    k0, k1 = k0[alive].astype(np.float64), k1[alive].astype(np.float64)
    r = np.log(k1 / k0)
    bins = log2_bins(k0)
    ids = np.unique(bins)
    cnt = np.array([np.count_nonzero(bins == j) for j in ids])
    k0m = np.array([k0[bins == j].mean() for j in ids])
    rm = np.array([r[bins == j].mean() for j in ids])
    rs = np.array([r[bins == j].std() for j in ids])
    gs = GrowthStats(kind, t0, t1, ids, k0m, rm, rs, cnt, min_count)
    big = cnt >= min_count
    gs.fit_r, err_r = _try_fit(k0m[big], rm[big], None)
    gs.fit_sigma, err_s = _try_fit(k0m[big], rs[big], None)
    if err_r:
        gs.fit_error["r"] = err_r
    if err_s:
        gs.fit_error["sigma"] = err_s
    return gs


# ---------------------------------------------------------------------------
# static-snapshot statistics


@dataclass
class DegreeDistribution:
    kind: str
    bin_left: np.ndarray
    bin_center: np.ndarray
    pdf: np.ndarray
    counts: np.ndarray
    mean_degree: float
    fit: FitResult

    @property
    def exponent(self) -> float:
        return -self.fit.slope


def binned_pdf(values):
    """Base-2 log-binned density of positive values: (left, center, pdf, counts)."""
    v = np.asarray(values, dtype=np.float64)
    v = v[v > 0]
    if v.size == 0:
        raise DegenerateSupport("no positive values")
    j = log2_bins(v)
    lo = int(j.min())
    cnt = np.bincount(j - lo)
    idx = np.arange(lo, lo + cnt.size)
    left = np.exp2(idx.astype(np.float64))
    width = left  # [2^j, 2^(j+1)) holds 2^j integers as well
    center = left * np.sqrt(2.0)
    pdf = cnt / (v.size * width)
    return left, center, pdf, cnt


def power_law_fit(values, k_min_fit: float = 1.0, quantile: float = 99.0):
    """Least-squares exponent of the log-binned density between k_min_fit and the percentile."""
    v = np.asarray(values, dtype=np.float64)
    left, center, pdf, cnt = binned_pdf(v)
    hi = float(np.percentile(v[v > 0], quantile))
    use = (cnt > 0) & (left >= k_min_fit) & (left <= hi)
    fit = fit_loglog_slope(center[use], pdf[use])
    return (left, center, pdf, cnt), fit


def degree_distribution(graph: DualGraph, kind: str, k_min_fit: float = 1.0, quantile: float = 99.0) -> DegreeDistribution:
    deg = graph.degrees(kind)
    if deg.size < 100:
        raise DegenerateSupport(f"need >= 100 nodes, have {deg.size}")
    (left, center, pdf, cnt), fit = power_law_fit(deg, k_min_fit, quantile)
    return DegreeDistribution(kind, left, center, pdf, cnt, float(deg.mean()), fit)


def pearson(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or a.size != b.size:
        raise ZeroVariance("need two equally long samples of size >= 2")
    da, db = a - a.mean(), b - b.mean()
    saa, sbb = float(da @ da), float(db @ db)
    if saa == 0 or sbb == 0:
        raise ZeroVariance("a degree sequence is constant")
    if np.array_equal(a, b):
        return 1.0
    return float(np.clip((da @ db) / np.sqrt(saa * sbb), -1.0, 1.0))


def degree_pcc(graph: DualGraph, kind_a: str, kind_b: str) -> float:
    """Pearson correlation of two user degrees over all users."""
    for k in (kind_a, kind_b):
        if k not in USER_KINDS + ("ka",):
            raise ValueError(f"{k!r} is not a user degree")
    return pearson(graph.degrees(kind_a), graph.degrees(kind_b))


@dataclass
class NnCorrelation:
    knn_p: np.ndarray  # per user, nan when k_f = 0
    knn_f: np.ndarray  # per item, nan when k_p = 0
    kf_values: np.ndarray
    knn_p_by_kf: np.ndarray
    kf_counts: np.ndarray
    kp_values: np.ndarray
    knn_f_by_kp: np.ndarray
    kp_counts: np.ndarray
    kf_binned: tuple  # (mean degree, mean knn, count) per log2 bin
    kp_binned: tuple


def _average_by(deg, val):
    ok = np.isfinite(val)
    deg, val = deg[ok], val[ok]
    keys, inv, cnt = np.unique(deg, return_inverse=True, return_counts=True)
    means = np.bincount(inv, weights=val) / cnt
    return keys, means, cnt


def _binned_average(deg, val):
    ok = np.isfinite(val) & (deg > 0)
    deg, val = deg[ok].astype(np.float64), val[ok]
    j = log2_bins(deg)
    keys, inv, cnt = np.unique(j, return_inverse=True, return_counts=True)
    return np.bincount(inv, weights=deg) / cnt, np.bincount(inv, weights=val) / cnt, cnt


def nn_degree_curves(graph: DualGraph) -> NnCorrelation:
    """Average popularity of a user's favorites and average activity of an item's fans."""
    users, items = graph.cross_links()
    if users.size == 0:
        raise DegenerateSupport("graph has no cross links")
    kf = graph.k_f()
    kp = graph.k_p()
    with np.errstate(invalid="ignore", divide="ignore"):
        knn_p = np.bincount(users, weights=kp[items], minlength=kf.size) / kf
        knn_f = np.bincount(items, weights=kf[users], minlength=kp.size) / kp
    kfv, kfm, kfc = _average_by(kf, knn_p)
    kpv, kpm, kpc = _average_by(kp, knn_f)
    return NnCorrelation(
        knn_p, knn_f, kfv, kfm, kfc, kpv, kpm, kpc, _binned_average(kf, knn_p), _binned_average(kp, knn_f)
    )


# ---------------------------------------------------------------------------
# neighborhood influence


@dataclass
class InfluenceEstimate:
    """Adoption counts A and exposure counts C indexed by level (u or z)."""

    variant: str
    level: np.ndarray
    adoptions: np.ndarray
    exposures: np.ndarray
    fit_window: tuple[float, float] | None = None
    fit: FitResult | None = None
    fit_error: str | None = None

    @property
    def probability(self) -> np.ndarray:
        out = np.zeros(self.level.size)
        ok = self.exposures > 0
        out[ok] = self.adoptions[ok] / self.exposures[ok]
        return out

    @property
    def pi(self) -> np.ndarray:
        p = self.probability
        s = p.sum()
        return p / s if s > 0 else p

    @property
    def kappa(self) -> np.ndarray:
        return np.cumsum(self.pi)

    @property
    def exponent(self):
        return None if self.fit is None else self.fit.slope - 1.0


_pair_dict_type = (types.int64, types.int64)


@njit
def _adopt_exposure(social, fans, user, item, n_items, expo, A, C):
    key = user * n_items + item
    u = 0
    if key in expo:
        u = expo[key]
        del expo[key]
    A[u] += 1
    nb = social.neighbors(user)
    for q in range(nb.shape[0]):
        j = nb[q]
        if fans.contains(item, j):
            continue
        k2 = j * n_items + item
        v = expo.get(k2, 0) + 1
        expo[k2] = v
        C[v] += 1


@njit
def _exposure_kernel(social, out_adj, in_adj, fav, fans, directed, kinds, aa, bb, cc, n_items, A, C):
    expo = Dict.empty(key_type=types.int64, value_type=types.int64)
    for e in range(kinds.shape[0]):
        kind, a, b, c = kinds[e], aa[e], bb[e], cc[e]
        _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c)
        if kind == USER and c >= 0:
            _adopt_exposure(social, fans, a, c, n_items, expo, A, C)
        elif kind == ITEM:
            _adopt_exposure(social, fans, b, a, n_items, expo, A, C)
        elif kind == CROSS:
            _adopt_exposure(social, fans, a, b, n_items, expo, A, C)


@njit
def _adopt_shared(social, fans, user, item, n_users, z, C):
    # called before ``user`` is added to the fan list of ``item``
    fl = fans.neighbors(item)
    for q in range(fl.shape[0]):
        j = fl[q]
        if j == user or social.contains(user, j):
            continue
        key = min(user, j) * n_users + max(user, j)
        v = z.get(key, 0) + 1
        z[key] = v
        C[v] += 1


@njit
def _shared_kernel(social, out_adj, in_adj, fav, fans, directed, kinds, aa, bb, cc, n_users, A, C):
    z = Dict.empty(key_type=types.int64, value_type=types.int64)
    for e in range(kinds.shape[0]):
        kind, a, b, c = kinds[e], aa[e], bb[e], cc[e]
        if kind == USER:
            # arrival social link first (a brand-new user shares nothing yet)
            _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, USER, a, b, -1)
            if c >= 0:
                _adopt_shared(social, fans, a, c, n_users, z, C)
                fav.insert(a, c)
                fans.insert(c, a)
        elif kind == ITEM:
            _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c)
        elif kind == CROSS:
            _adopt_shared(social, fans, a, b, n_users, z, C)
            _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c)
        else:
            fresh = not social.contains(a, b)
            if fresh:
                key = min(a, b) * n_users + max(a, b)
                v = 0
                if key in z:
                    v = z[key]
                    del z[key]
                A[v] += 1
            _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c)


def _max_level(log: EventLog) -> int:
    # no counter can exceed the number of cross-link formations
    return int(np.count_nonzero((log.kind == CROSS) | (log.kind == ITEM) | ((log.kind == USER) & (log.c >= 0)))) + 2


def _finish_influence(variant, A, C, q=99.0) -> InfluenceEstimate:
    top = int(np.flatnonzero((A > 0) | (C > 0)).max()) if ((A > 0) | (C > 0)).any() else 0
    top = max(top, 1)
    level = np.arange(1, top + 1)
    est = InfluenceEstimate(variant, level, A[1 : top + 1].copy(), C[1 : top + 1].copy())
    if est.exposures.sum() == 0 or est.adoptions.sum() == 0:
        est.fit_error = "no exposures or no adoptions at level >= 1"
        return est
    hi = weighted_percentile(level, est.exposures, q)
    seen = est.exposures > 0
    est.fit_window = (1.0, hi)
    est.fit, est.fit_error = _try_fit(level[seen], est.kappa[seen], est.fit_window)
    return est


def exposure_influence(log: EventLog) -> InfluenceEstimate:
    """Adoption probability against the number of friends who adopted first.

    When user j favorites item l, every friend i of j who is not yet a fan of
    l has its exposure count e(i, l) raised by one; C(u) counts pairs whose
    count ever reaches u. A(u) counts adoptions made at exposure u.
    """
    size = _max_level(log) + 1
    A = np.zeros(size, dtype=np.int64)
    C = np.zeros(size, dtype=np.int64)
    if len(log):
        g = _sized_graph_for(log, len(log))
        _exposure_kernel(g.social, g.out_links, g.in_links, g.favorites, g.fans, g.directed,
                         log.kind, log.a, log.b, log.c, max(log.n_items, 1), A, C)
    return _finish_influence("exposure", A, C)


def shared_favorites_influence(log: EventLog) -> InfluenceEstimate:
    """Social-link probability against the number of favorites a pair shares.

    Only pairs that are not yet friends are tracked, and only once they share
    at least one item. C(z) counts pairs whose shared count ever reaches z;
    A(z) counts new friendships formed between pairs sharing z items.
    """
    size = _max_level(log) + 1
    A = np.zeros(size, dtype=np.int64)
    C = np.zeros(size, dtype=np.int64)
    if len(log):
        g = _sized_graph_for(log, len(log))
        _shared_kernel(g.social, g.out_links, g.in_links, g.favorites, g.fans, g.directed,
                       log.kind, log.a, log.b, log.c, max(log.n_users, 1), A, C)
    return _finish_influence("shared_favorites", A, C)


# ---------------------------------------------------------------------------


def triadic_fraction(log: EventLog, link_class: str, start_time: int | None = None) -> float:
    """Share of social or cross link events that closed a triangle when formed.

    Arrival links (inside user events) and item-upload links are not link
    events and are left out.

    Parameters
    ----------
    log : EventLog
    link_class : {"social", "cross"}
    start_time : int, optional
        Only count links with time >= start_time. Model logs pass 1 to drop
        the seed links of the initial network.
    """
    code = {"social": SOCIAL, "cross": CROSS}.get(link_class)
    if code is None:
        raise ValueError(f"link_class must be 'social' or 'cross', got {link_class!r}")
    mask = log.kind == code
    if start_time is not None:
        mask &= log.time >= start_time
    n = int(mask.sum())
    if n == 0:
        raise EmptyClass(f"log has no {link_class} links")
    return float(np.count_nonzero(log.annotations.triadic[mask])) / n
