"""Coevolving growth model driven by preferential triadic closure.

Every user carries a willingness ``phi`` that grows by a fixed initiative
``phi0`` per tick plus ``mu`` times the total-degree change of its friends.
Users whose ``phi`` reaches their personal threshold are activated; activated
users create items and form new links by two-step random walks, so every
link between existing nodes closes a triangle. One new user arrives per tick.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .errors import InvalidParams, RunComplete, UnknownNode
from .graph import CROSS, ITEM, SOCIAL, USER, DualGraph, EventLog, WalkType

_WALK_TYPES = (WalkType.FRIEND_OF_FRIEND, WalkType.ITEM_OF_FRIEND, WalkType.FAN_OF_ITEM)


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; defaults are the reference parameter set."""

    m: int = 10
    n: int = 100
    mu: float = 0.5
    phi0: float = 1.0
    theta_range: tuple[float, float] = (40.0, 4000.0)
    n0: int = 10
    m0: int = 10
    n_final: int = 100_000
    seed: int = 0
    walk_retries: int = 10
    reset_passive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "theta_range", tuple(float(x) for x in self.theta_range))
        self.validate()

    def validate(self) -> None:
        lo, hi = self.theta_range
        problems = []
        if self.m < 0 or self.n < 0:
            problems.append("m and n must be >= 0")
        if self.mu < 0 or self.phi0 < 0:
            problems.append("mu and phi0 must be >= 0")
        if lo > hi:
            problems.append("theta_range must satisfy min <= max")
        if self.n0 < 2:
            problems.append("n0 must be >= 2")
        if self.m0 < 1:
            problems.append("m0 must be >= 1")
        if self.n_final <= self.n0:
            problems.append("n_final must exceed n0")
        if self.walk_retries < 1:
            problems.append("walk_retries must be >= 1")
        if problems:
            raise InvalidParams("; ".join(problems))

    def replace(self, **changes) -> "ModelParams":
        d = asdict(self)
        d.update(changes)
        return ModelParams(**d)


@dataclass
class UserState:
    phi: float
    theta: float
    pending_reset: bool


@dataclass(frozen=True)
class TickReport:
    tick: int
    activated: int
    new_users: int
    new_items: int
    social_links: int
    cross_links: int
    skipped_walks: int
    triadic_fraction: float

    FIELDS = ("tick", "activated", "new_users", "new_items", "social_links", "cross_links", "skipped_walks", "triadic_fraction")


# ---------------------------------------------------------------------------
# kernels


@njit
def _walk(social, fav, fans, user, rng, retries):
    """Two-step walk from ``user``; returns (node, walk type code) or (-1, -1)."""
    for _ in range(retries):
        ks = social.size[user]
        kf = fav.size[user]
        if ks + kf == 0:
            return -1, -1
        r = rng.integers(0, ks + kf)
        if r < ks:
            v = social.get(user, r)
            ks2 = social.size[v]
            kf2 = fav.size[v]
            r2 = rng.integers(0, ks2 + kf2)  # v always has user as a friend
            if r2 < ks2:
                w = social.get(v, r2)
                if w != user and not social.contains(user, w):
                    return w, 0
            else:
                item = fav.get(v, r2 - ks2)
                if not fav.contains(user, item):
                    return item, 1
        else:
            item = fav.get(user, r - ks)
            w = fans.get(item, rng.integers(0, fans.size[item]))
            if w != user and not social.contains(user, w):
                return w, 2
    return -1, -1


@njit
def _select(pool, n_pool, k, n_users, rng, is_active, chosen, out):
    """Pick ``k`` distinct users, activated ones first, complemented uniformly."""
    if k >= n_users:
        for i in range(n_users):
            out[i] = i
        for i in range(n_users - 1, 0, -1):
            j = rng.integers(0, i + 1)
            out[i], out[j] = out[j], out[i]
        return n_users
    if n_pool >= k:
        buf = pool[:n_pool].copy()
        for i in range(k):
            j = rng.integers(i, n_pool)
            buf[i], buf[j] = buf[j], buf[i]
            out[i] = buf[i]
        return k
    for i in range(n_pool):
        out[i] = pool[i]
    cnt = n_pool
    while cnt < k:
        u = rng.integers(0, n_users)
        if not is_active[u] and not chosen[u]:
            chosen[u] = True
            out[cnt] = u
            cnt += 1
    for i in range(n_pool, cnt):
        chosen[out[i]] = False
    return cnt


@njit
def _bump(j, d, delta, touched, n_touched):
    if delta[j] == 0:
        touched[n_touched] = j
        n_touched += 1
    delta[j] += d
    return n_touched


@njit
def _emit(ev, n_ev, t, kind, a, b, c):
    ev[n_ev, 0] = t
    ev[n_ev, 1] = kind
    ev[n_ev, 2] = a
    ev[n_ev, 3] = b
    ev[n_ev, 4] = c
    return n_ev + 1


@njit
def _run_ticks(
    social, fav, fans, phi, theta, pending, is_active, chosen, delta, touched, initiator, passive,
    act_count, act_first, act_last, ev, n_ev, reports, tick, n_ticks, rng,
    m, n, mu, phi0, theta_lo, theta_hi, retries, reset_passive, n_final,
):
    """Advance up to ``n_ticks`` ticks; returns (ticks done, events written)."""
    n_users_cap = phi.shape[0]
    pool = np.empty(n_users_cap, dtype=np.int64)
    picked = np.empty(n_users_cap, dtype=np.int64)
    done = 0
    while done < n_ticks and social.n_nodes < n_final:
        t = tick + done + 1
        N = social.n_nodes
        # (a) resets flagged last tick, (b) activation
        n_act = 0
        for i in range(N):
            if pending[i]:
                phi[i] = 0.0
                pending[i] = False
            if phi[i] >= theta[i]:
                is_active[i] = True
                pool[n_act] = i
                n_act += 1
                if act_count[i] == 0:
                    act_first[i] = t
                act_count[i] += 1
                act_last[i] = t
        n_touched = 0
        n_ini = 0
        n_pas = 0
        n_items_new = 0
        n_soc = 0
        n_cross = 0
        skipped = 0
        # (c) arrival
        f = rng.integers(0, N)
        kf = fav.size[f]
        item = fav.get(f, rng.integers(0, kf)) if kf > 0 else -1
        u = social.add_node()
        fav.add_node()
        theta[u] = rng.uniform(theta_lo, theta_hi)
        phi[u] = 0.0
        social.insert(u, f)
        social.insert(f, u)
        n_touched = _bump(u, 1, delta, touched, n_touched)
        n_touched = _bump(f, 1, delta, touched, n_touched)
        passive[n_pas] = f
        n_pas += 1
        if item >= 0:
            fav.insert(u, item)
            fans.insert(item, u)
            n_touched = _bump(u, 1, delta, touched, n_touched)
        n_ev = _emit(ev, n_ev, t, USER, u, f, item)
        # (d) item creation
        k = _select(pool, n_act, m, N, rng, is_active, chosen, picked)
        for s in range(k):
            c = picked[s]
            new_item = fans.add_node()
            fav.insert(c, new_item)
            fans.insert(new_item, c)
            n_touched = _bump(c, 1, delta, touched, n_touched)
            initiator[n_ini] = c
            n_ini += 1
            n_items_new += 1
            n_ev = _emit(ev, n_ev, t, ITEM, new_item, c, -1)
        # (e) triadic closure by two-step walks
        k = _select(pool, n_act, n, N, rng, is_active, chosen, picked)
        for s in range(k):
            w = picked[s]
            target, wtype = _walk(social, fav, fans, w, rng, retries)
            if target < 0:
                skipped += 1
                continue
            initiator[n_ini] = w
            n_ini += 1
            if wtype == 1:
                fav.insert(w, target)
                fans.insert(target, w)
                n_touched = _bump(w, 1, delta, touched, n_touched)
                n_cross += 1
                n_ev = _emit(ev, n_ev, t, CROSS, w, target, -1)
            else:
                social.insert(w, target)
                social.insert(target, w)
                n_touched = _bump(w, 1, delta, touched, n_touched)
                n_touched = _bump(target, 1, delta, touched, n_touched)
                passive[n_pas] = target
                n_pas += 1
                n_soc += 1
                n_ev = _emit(ev, n_ev, t, SOCIAL, w, target, -1)
        # (f) state update: neighbor stimulus, then initiative
        if mu != 0.0:
            for q in range(n_touched):
                j = touched[q]
                stim = mu * delta[j]
                s0 = social.start[j]
                for p in range(social.size[j]):
                    phi[social.pool[s0 + p]] += stim
        for q in range(n_touched):
            delta[touched[q]] = 0
        n_users = social.n_nodes
        for i in range(n_users):
            phi[i] += phi0
        # (g) reset flags
        for q in range(n_act):
            pending[pool[q]] = True
            is_active[pool[q]] = False
        for q in range(n_ini):
            pending[initiator[q]] = True
        if reset_passive:
            for q in range(n_pas):
                pending[passive[q]] = True
        r = reports[tick + done]
        r[0] = t
        r[1] = n_act
        r[2] = 1
        r[3] = n_items_new
        r[4] = n_soc
        r[5] = n_cross
        r[6] = skipped
        r[7] = n_soc + n_cross  # walk links, triadic by construction
        done += 1
    return done, n_ev


# ---------------------------------------------------------------------------
# simulator


class Simulator:
    """Holds the full model state; ``init`` happens in the constructor."""

    def __init__(self, params: ModelParams):
        params.validate()
        self.params = params
        self.rng = np.random.default_rng(params.seed)
        p = params
        n_ticks = p.n_final - p.n0
        users_cap = p.n_final
        items_cap = p.m0 + p.m * n_ticks
        events_cap = 2 * p.n0 + p.m0 + (1 + p.m + p.n) * n_ticks
        links_cap = p.n0 + p.m0 + 2 * n_ticks + p.m * n_ticks + p.n * n_ticks
        self.graph = DualGraph(False, user_capacity=users_cap + 1, item_capacity=items_cap + 1,
                               link_capacity=max(64, min(links_cap, 4_000_000)))
        self.phi = np.zeros(users_cap, dtype=np.float64)
        self.theta = np.zeros(users_cap, dtype=np.float64)
        self.pending = np.zeros(users_cap, dtype=np.bool_)
        self._is_active = np.zeros(users_cap, dtype=np.bool_)
        self._chosen = np.zeros(users_cap, dtype=np.bool_)
        self._delta = np.zeros(users_cap, dtype=np.int64)
        self._touched = np.empty(users_cap, dtype=np.int64)
        self._initiator = np.empty(p.m + p.n + 1, dtype=np.int64)
        self._passive = np.empty(p.n + 2, dtype=np.int64)
        self.act_count = np.zeros(users_cap, dtype=np.int64)
        self.act_first = np.full(users_cap, -1, dtype=np.int64)
        self.act_last = np.full(users_cap, -1, dtype=np.int64)
        self._ev = np.empty((events_cap, 5), dtype=np.int64)
        self._n_ev = 0
        self._reports = np.zeros((n_ticks, 8), dtype=np.float64)
        self.tick = 0
        self._init_network()

    def _init_network(self):
        p, rng, g = self.params, self.rng, self.graph
        lo, hi = p.theta_range
        ev = self._ev
        for u in range(p.n0):
            g.social.add_node()
            g.favorites.add_node()
            self.theta[u] = rng.uniform(lo, hi)
            self._n_ev = _emit(ev, self._n_ev, 0, USER, u, -1, -1)
        for item in range(p.m0):
            owner = int(rng.integers(0, p.n0))
            g.fans.add_node()
            g.favorites.insert(owner, item)
            g.fans.insert(item, owner)
            self._n_ev = _emit(ev, self._n_ev, 0, ITEM, item, owner, -1)
        for u in range(p.n0):
            if g.social.size[u] > 0:
                continue
            v = int(rng.integers(0, p.n0 - 1))
            if v >= u:
                v += 1
            g.social.insert(u, v)
            g.social.insert(v, u)
            self._n_ev = _emit(ev, self._n_ev, 0, SOCIAL, u, v, -1)

    @property
    def n_users(self) -> int:
        return self.graph.n_users

    @property
    def n_items(self) -> int:
        return self.graph.n_items

    @property
    def finished(self) -> bool:
        return self.graph.n_users >= self.params.n_final

    def user_state(self, user: int) -> UserState:
        if not 0 <= user < self.n_users:
            raise UnknownNode(f"user {user} does not exist")
        return UserState(float(self.phi[user]), float(self.theta[user]), bool(self.pending[user]))

    def _advance(self, n_ticks: int) -> int:
        p = self.params
        lo, hi = p.theta_range
        done, self._n_ev = _run_ticks(
            self.graph.social, self.graph.favorites, self.graph.fans,
            self.phi, self.theta, self.pending, self._is_active, self._chosen, self._delta, self._touched,
            self._initiator, self._passive, self.act_count, self.act_first, self.act_last,
            self._ev, self._n_ev, self._reports, self.tick, n_ticks, self.rng,
            p.m, p.n, float(p.mu), float(p.phi0), lo, hi, p.walk_retries, p.reset_passive, p.n_final,
        )
        self.tick += done
        return done

    def step(self) -> TickReport:
        if self.finished:
            raise RunComplete(f"user count reached n_final={self.params.n_final}")
        self._advance(1)
        return self.report(self.tick)

    def run(self) -> tuple[EventLog, list[TickReport]]:
        while not self.finished:
            self._advance(self.params.n_final)
        return self.log, self.reports()

    def report(self, tick: int) -> TickReport:
        r = self._reports[tick - 1]
        links = int(r[4] + r[5])
        frac = r[7] / links if links else math.nan
        return TickReport(int(r[0]), int(r[1]), int(r[2]), int(r[3]), int(r[4]), int(r[5]), int(r[6]), frac)

    def reports(self) -> list[TickReport]:
        return [self.report(t) for t in range(1, self.tick + 1)]

    @property
    def log(self) -> EventLog:
        ev = self._ev[: self._n_ev]
        return EventLog(ev[:, 0], ev[:, 1], ev[:, 2], ev[:, 3], ev[:, 4], directed=False)

    def mean_activation_interval(self) -> np.ndarray:
        """Mean ticks between activations per user (nan with < 2 activations)."""
        n = self.n_users
        cnt = self.act_count[:n]
        out = np.full(n, np.nan)
        ok = cnt >= 2
        out[ok] = (self.act_last[:n][ok] - self.act_first[:n][ok]) / (cnt[ok] - 1)
        return out


def init(params: ModelParams) -> Simulator:
    return Simulator(params)


def step(state: Simulator) -> TickReport:
    return state.step()


def run(params: ModelParams) -> tuple[EventLog, list[TickReport]]:
    """Simulate until ``n_final`` users exist."""
    return Simulator(params).run()


def two_step_walk(state, user: int, rng: np.random.Generator | None = None, retries: int | None = None):
    """One walk (with retries) from ``user`` over a Simulator or a DualGraph.

    Returns ``(node, WalkType)`` or None. Item targets come with
    ``WalkType.ITEM_OF_FRIEND``; the other two walk types land on users.
    """
    if isinstance(state, Simulator):
        graph = state.graph
        rng = state.rng if rng is None else rng
        retries = state.params.walk_retries if retries is None else retries
    else:
        graph = state
        if rng is None:
            raise ValueError("rng is required when walking on a bare DualGraph")
        retries = 10 if retries is None else retries
    if not 0 <= user < graph.n_users:
        raise UnknownNode(f"user {user} does not exist")
    node, wtype = _walk(graph.social, graph.favorites, graph.fans, user, rng, retries)
    if node < 0:
        return None
    return int(node), _WALK_TYPES[wtype]


def write_tick_reports(reports, path) -> None:
    path = Path(path)
    with path.open("w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        fh.write("#v1\n")
        w.writerow(TickReport.FIELDS)
        for r in reports:
            w.writerow([r.tick, r.activated, r.new_users, r.new_items, r.social_links, r.cross_links,
                        r.skipped_walks, "" if math.isnan(r.triadic_fraction) else f"{r.triadic_fraction:.6g}"])
