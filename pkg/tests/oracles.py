"""Slow, set-based reference implementations used only by the tests.

Nothing here imports the package's kernels: graphs are dicts of Python sets
and every statistic is recomputed from scratch by replaying events.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

U, I, S, C = 0, 1, 2, 3


class OracleGraph:
    def __init__(self, directed=False):
        self.directed = directed
        self.friends: list[set] = []  # undirected union
        self.out: list[set] = []
        self.inn: list[set] = []
        self.fav: list[set] = []
        self.fans: list[set] = []

    @property
    def n_users(self):
        return len(self.friends)

    @property
    def n_items(self):
        return len(self.fans)

    def _add_user(self):
        for lst in (self.friends, self.out, self.inn, self.fav):
            lst.append(set())

    def check(self, kind, a, b, c=-1):
        """Name of the error the event would raise, or None."""
        if kind == U:
            if a != self.n_users:
                return "UnknownNode"
            if b >= self.n_users or c >= self.n_items:
                return "UnknownNode"
            return None
        if kind == I:
            if a != self.n_items or not 0 <= b < self.n_users:
                return "UnknownNode"
            return None
        if kind == S:
            if not (0 <= a < self.n_users and 0 <= b < self.n_users):
                return "UnknownNode"
            if a == b:
                return "SelfLoop"
            if (b in self.out[a]) if self.directed else (b in self.friends[a]):
                return "DuplicateLink"
            return None
        if not (0 <= a < self.n_users and 0 <= b < self.n_items):
            return "UnknownNode"
        if b in self.fav[a]:
            return "DuplicateLink"
        return None

    def apply(self, kind, a, b, c=-1):
        err = self.check(kind, a, b, c)
        if err:
            raise ValueError(err)
        if kind == U:
            self._add_user()
            if b >= 0:
                self._link(a, b)
            if c >= 0:
                self.fav[a].add(c)
                self.fans[c].add(a)
        elif kind == I:
            self.fans.append({b})
            self.fav[b].add(a)
        elif kind == S:
            self._link(a, b)
        else:
            self.fav[a].add(b)
            self.fans[b].add(a)

    def _link(self, a, b):
        self.friends[a].add(b)
        self.friends[b].add(a)
        self.out[a].add(b)
        self.inn[b].add(a)

    def degree(self, kind, node):
        return {
            "ks": lambda: len(self.friends[node]),
            "kf": lambda: len(self.fav[node]),
            "kp": lambda: len(self.fans[node]),
            "kout": lambda: len(self.out[node]),
            "kin": lambda: len(self.inn[node]),
        }[kind]()

    def degrees(self, kind):
        n = self.n_items if kind == "kp" else self.n_users
        return np.array([self.degree(kind, v) for v in range(n)], dtype=np.int64)

    # union graph with namespaced nodes
    def union_adj(self):
        adj = defaultdict(set)
        for u, fs in enumerate(self.friends):
            adj[("u", u)]
            for v in fs:
                adj[("u", u)].add(("u", v))
        for u, items in enumerate(self.fav):
            for it in items:
                adj[("u", u)].add(("i", it))
                adj[("i", it)].add(("u", u))
        return adj


def replay(events, directed=False, stop=None):
    g = OracleGraph(directed)
    for e in list(events)[:stop]:
        g.apply(e[1], e[2], e[3], e[4])
    return g


def triangle_count(adj) -> int:
    total = 0
    for x, nx in adj.items():
        for y in nx:
            if x < y:
                total += len(nx & adj[y])
    return total // 3


def triangle_delta(g: OracleGraph, kind: str, a: int, b: int) -> int:
    """Triangles gained by adding the link, counted on the whole union graph."""
    before = g.union_adj()
    after = {k: set(v) for k, v in before.items()}
    x = ("u", a)
    y = ("u", b) if kind == "social" else ("i", b)
    after.setdefault(x, set()).add(y)
    after.setdefault(y, set()).add(x)
    return triangle_count(after) - triangle_count(before)


def second_neighbors(g: OracleGraph, user: int) -> set:
    """Enumerate every two-step path and apply the exclusion rules."""
    out = set()
    for v in g.friends[user]:
        for w in g.friends[v]:
            if w != user and w not in g.friends[user]:
                out.add((w, "friend_of_friend"))
        for it in g.fav[v]:
            if it not in g.fav[user]:
                out.add((it, "item_of_friend"))
    for it in g.fav[user]:
        for w in g.fans[it]:
            if w != user and w not in g.friends[user]:
                out.add((w, "fan_of_item"))
    return out


def walk_distribution(g: OracleGraph, user: int, retries: int) -> dict:
    """Exact outcome probabilities of the retried two-step walk.

    Keys are ("user", id), ("item", id) or None for "no link".
    """
    friends = sorted(g.friends[user])
    favs = sorted(g.fav[user])
    d = len(friends) + len(favs)
    if d == 0:
        return {None: 1.0}
    single = defaultdict(float)
    fail = 0.0
    for v in friends:
        opts = [("user", w) for w in sorted(g.friends[v])] + [("item", it) for it in sorted(g.fav[v])]
        for o in opts:
            p = 1.0 / d / len(opts)
            ok = (o[0] == "user" and o[1] != user and o[1] not in g.friends[user]) or (
                o[0] == "item" and o[1] not in g.fav[user]
            )
            if ok:
                single[o] += p
            else:
                fail += p
    for it in favs:
        fl = sorted(g.fans[it])
        for w in fl:
            p = 1.0 / d / len(fl)
            if w != user and w not in g.friends[user]:
                single[("user", w)] += p
            else:
                fail += p
    # the first admissible landing over up to `retries` independent walks
    scale = retries if fail == 1.0 else (1 - fail**retries) / (1 - fail)
    out = {k: v * scale for k, v in single.items()}
    out[None] = fail**retries
    return out


# ---------------------------------------------------------------------------
# measures


def annotate(events, directed=False):
    """Per event: (triadic, degree increments {(kind, node): +1 ...})."""
    g = OracleGraph(directed)
    rows = []
    for t, kind, a, b, c in events:
        tri = False
        inc = []
        if kind == S:
            tri = bool(g.friends[a] & g.friends[b]) or bool(g.fav[a] & g.fav[b])
            new_pair = b not in g.friends[a]
            if new_pair:
                inc += [("ks", a), ("ks", b)]
            inc += [("kout", a), ("kin", b)]
        elif kind == C:
            tri = bool(g.friends[a] & g.fans[b])
            inc += [("kf", a), ("kp", b)]
        elif kind == I:
            inc += [("kf", b), ("kp", a)]
        else:
            if b >= 0:
                inc += [("ks", a), ("ks", b), ("kout", a), ("kin", b)]
            if c >= 0:
                inc += [("kf", a), ("kp", c)]
        g.apply(kind, a, b, c)
        rows.append((tri, inc))
    return rows


def pa_oracle(events, x_kind, y_kind, t0_list, dt, directed=False):
    """Average of per-window normalized rates, straight from the definitions.

    Returns (pi_t, pi_n, counts) as dicts keyed by x.
    """
    rows = annotate(events, directed)
    pi_t = defaultdict(float)
    pi_n = defaultdict(float)
    counts = defaultdict(int)
    used = 0
    for t0 in t0_list:
        n_before = sum(1 for e in events if e[0] <= t0)
        g = replay(events, directed, n_before)
        n_nodes = g.n_items if x_kind == "kp" else g.n_users
        x_of = {v: g.degree(x_kind, v) for v in range(n_nodes)}
        c_x = defaultdict(int)
        for v, x in x_of.items():
            c_x[x] += 1
        a_t = defaultdict(int)
        a_n = defaultdict(int)
        for e, (tri, inc) in zip(events, rows):
            if not (t0 < e[0] <= t0 + dt):
                continue
            for kind, node in inc:
                if kind == y_kind and node in x_of:
                    (a_t if tri else a_n)[x_of[node]] += 1
        for x, n in c_x.items():
            counts[x] += n
        total = sum(a_t[x] / c_x[x] for x in c_x) + sum(a_n[x] / c_x[x] for x in c_x)
        if total == 0:
            continue
        used += 1
        for x in c_x:
            pi_t[x] += a_t[x] / c_x[x] / total
            pi_n[x] += a_n[x] / c_x[x] / total
    if used:
        for x in list(pi_t):
            pi_t[x] /= used
        for x in list(pi_n):
            pi_n[x] /= used
    return dict(pi_t), dict(pi_n), dict(counts)


def growth_oracle(events, kind, t0, t1, directed=False):
    """{bin j: (mean k0, mean r, population std r, count)} for nodes with k0 >= 1."""
    g0 = replay(events, directed, sum(1 for e in events if e[0] <= t0))
    g1 = replay(events, directed, sum(1 for e in events if e[0] <= t1))
    n = g0.n_items if kind == "kp" else g0.n_users
    bins = defaultdict(list)
    for v in range(n):
        k0 = g0.degree(kind, v)
        if k0 < 1:
            continue
        k1 = g1.degree(kind, v)
        j = int(math.floor(math.log2(k0)))
        bins[j].append((k0, math.log(k1 / k0)))
    out = {}
    for j, rows in bins.items():
        k0s = [r[0] for r in rows]
        rs = [r[1] for r in rows]
        mean = sum(rs) / len(rs)
        var = sum((r - mean) ** 2 for r in rs) / len(rs)
        out[j] = (sum(k0s) / len(k0s), mean, math.sqrt(var), len(rs))
    return out


def nn_oracle(g: OracleGraph):
    """Per-user k_p^nn and per-item k_f^nn by direct summation (None when undefined)."""
    knn_p = []
    for u in range(g.n_users):
        items = g.fav[u]
        knn_p.append(sum(len(g.fans[it]) for it in items) / len(items) if items else None)
    knn_f = []
    for it in range(g.n_items):
        fl = g.fans[it]
        knn_f.append(sum(len(g.fav[u]) for u in fl) / len(fl) if fl else None)
    return knn_p, knn_f


def exposure_oracle(events, directed=False):
    """A(u), C(u) for the streaming exposure model, tracked per (user, item)."""
    g = OracleGraph(directed)
    expo = {}
    A = defaultdict(int)
    Cc = defaultdict(int)

    def adopt(user, item):
        A[expo.pop((user, item), 0)] += 1
        for j in g.friends[user]:
            if j in g.fans[item]:
                continue
            expo[(j, item)] = expo.get((j, item), 0) + 1
            Cc[expo[(j, item)]] += 1

    for t, kind, a, b, c in events:
        g.apply(kind, a, b, c)
        if kind == U and c >= 0:
            adopt(a, c)
        elif kind == I:
            adopt(b, a)
        elif kind == C:
            adopt(a, b)
    return dict(A), dict(Cc)


def shared_oracle(events, directed=False):
    """A(z), C(z) for unlinked user pairs by their shared-favorite count."""
    g = OracleGraph(directed)
    A = defaultdict(int)
    Cc = defaultdict(int)
    reached = defaultdict(int)  # pair -> highest z counted so far

    def shared(x, y):
        return len(g.fav[x] & g.fav[y])

    for t, kind, a, b, c in events:
        if kind == S and b not in g.friends[a]:
            A[shared(a, b)] += 1
        g.apply(kind, a, b, c)
        if kind in (U, I, C):
            user = a if kind in (U, C) else b
            # recount every unlinked pair involving the adopter
            for other in range(g.n_users):
                if other == user or other in g.friends[user]:
                    continue
                key = (min(user, other), max(user, other))
                z = shared(user, other)
                while reached[key] < z:
                    reached[key] += 1
                    Cc[reached[key]] += 1
    return dict(A), dict(Cc)


def pearson(a, b):
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    return cov / math.sqrt(va * vb)


# ---------------------------------------------------------------------------
# random logs


def random_log(rng, n_events, directed=False, p_user=0.15, p_item=0.15, p_social=0.35):
    """A valid event list (time, kind, a, b, c) built against an OracleGraph."""
    g = OracleGraph(directed)
    events = []
    t = 0
    # two seed users and one item so every kind has candidates
    for e in [(0, U, 0, -1, -1), (0, U, 1, 0, -1), (0, I, 0, 0, -1)]:
        g.apply(*e[1:])
        events.append(e)
    while len(events) < n_events:
        if rng.random() < 0.3:
            t += 1
        r = rng.random()
        if r < p_user:
            friend = int(rng.integers(-1, g.n_users)) if not directed else -1
            item = -1
            if friend >= 0 and g.fav[friend] and rng.random() < 0.7:
                item = int(rng.choice(sorted(g.fav[friend])))
            e = (t, U, g.n_users, friend, item)
        elif r < p_user + p_item:
            e = (t, I, g.n_items, int(rng.integers(0, g.n_users)), -1)
        elif r < p_user + p_item + p_social:
            a, b = (int(v) for v in rng.integers(0, g.n_users, size=2))
            e = (t, S, a, b, -1)
        else:
            e = (t, C, int(rng.integers(0, g.n_users)), int(rng.integers(0, g.n_items)), -1)
        if g.check(*e[1:]) is None:
            g.apply(*e[1:])
            events.append(e)
    return events
