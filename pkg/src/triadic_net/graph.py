"""Dual-component (user/item) temporal graph and its event log.

Users and items live in separate dense id spaces, both assigned in creation
order. Social links join two users; cross links join a user to an item
(a favorite mark). All mutation goes through events so that any graph can be
rebuilt by replaying a log prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

import numpy as np
from numba import njit

from ._adjacency import SortedAdjacency, sorted_intersects
from .errors import DuplicateLink, SelfLoop, TimeOutOfRange, TriadicNetError, UnknownNode

USER, ITEM, SOCIAL, CROSS = 0, 1, 2, 3
KIND_LETTERS = "UISC"

# error codes returned by the kernels
_OK, _UNKNOWN, _SELF, _DUP, _BADID = 0, 1, 2, 3, 4


class EventKind(IntEnum):
    USER = USER
    ITEM = ITEM
    SOCIAL = SOCIAL
    CROSS = CROSS

    @property
    def letter(self) -> str:
        return KIND_LETTERS[self]


class Event(NamedTuple):
    """One creation event.

    Field meaning depends on ``kind``:

    ======  ======  ============  ==========
    kind    a       b             c
    ======  ======  ============  ==========
    USER    user    seed friend   seed item
    ITEM    item    owner         unused
    SOCIAL  src     dst           unused
    CROSS   user    item          unused
    ======  ======  ============  ==========

    A seed of ``-1`` means no arrival link of that type.
    """

    time: int
    kind: int
    a: int
    b: int
    c: int = -1

    @classmethod
    def new_user(cls, time, user, friend=-1, item=-1):
        return cls(time, USER, user, friend, item)

    @classmethod
    def new_item(cls, time, item, owner):
        return cls(time, ITEM, item, owner, -1)

    @classmethod
    def social(cls, time, src, dst):
        return cls(time, SOCIAL, src, dst, -1)

    @classmethod
    def cross(cls, time, user, item):
        return cls(time, CROSS, user, item, -1)


class LinkClass(Enum):
    TRIADIC = "triadic"
    NON_TRIADIC = "non_triadic"


class Link(NamedTuple):
    """A prospective link, ``kind`` is ``"social"`` or ``"cross"``."""

    kind: str
    a: int
    b: int

    @classmethod
    def social(cls, u, v):
        return cls("social", u, v)

    @classmethod
    def cross(cls, u, item):
        return cls("cross", u, item)


class WalkType(Enum):
    FRIEND_OF_FRIEND = "friend_of_friend"  # user -> user -> user
    ITEM_OF_FRIEND = "item_of_friend"  # user -> user -> item
    FAN_OF_ITEM = "fan_of_item"  # user -> item -> user


# ---------------------------------------------------------------------------
# numba kernels


@njit
def _check_event(social, out_adj, fav, fans, directed, kind, a, b, c):
    n_users = social.n_nodes
    n_items = fans.n_nodes
    if kind == USER:
        if a != n_users:
            return _BADID
        if b >= n_users or c >= n_items:
            return _UNKNOWN
        return _OK
    if kind == ITEM:
        if a != n_items:
            return _BADID
        if b < 0 or b >= n_users:
            return _UNKNOWN
        return _OK
    if kind == SOCIAL:
        if a < 0 or b < 0 or a >= n_users or b >= n_users:
            return _UNKNOWN
        if a == b:
            return _SELF
        if directed:
            if out_adj.contains(a, b):
                return _DUP
        elif social.contains(a, b):
            return _DUP
        return _OK
    if kind == CROSS:
        if a < 0 or b < 0 or a >= n_users or b >= n_items:
            return _UNKNOWN
        if fav.contains(a, b):
            return _DUP
        return _OK
    return _UNKNOWN


@njit
def _is_triadic(social, fav, fans, kind, a, b):
    if kind == SOCIAL:
        return sorted_intersects(social.neighbors(a), social.neighbors(b)) or sorted_intersects(
            fav.neighbors(a), fav.neighbors(b)
        )
    if kind == CROSS:
        return sorted_intersects(social.neighbors(a), fans.neighbors(b))
    return False


@njit
def _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c):
    """Mutate the graph; returns True if a new undirected social pair appeared."""
    new_pair = False
    if kind == USER:
        social.add_node()
        fav.add_node()
        if directed:
            out_adj.add_node()
            in_adj.add_node()
        if b >= 0:
            social.insert(a, b)
            social.insert(b, a)
            new_pair = True
            if directed:
                out_adj.insert(a, b)
                in_adj.insert(b, a)
        if c >= 0:
            fav.insert(a, c)
            fans.insert(c, a)
    elif kind == ITEM:
        fans.add_node()
        fav.insert(b, a)
        fans.insert(a, b)
    elif kind == SOCIAL:
        if directed:
            out_adj.insert(a, b)
            in_adj.insert(b, a)
        new_pair = social.insert(a, b)
        social.insert(b, a)
    else:
        fav.insert(a, b)
        fans.insert(b, a)
    return new_pair


@njit
def _replay(social, out_adj, in_adj, fav, fans, directed, kinds, aa, bb, cc, start, stop, triadic, new_pair):
    """Apply events [start, stop); on failure return (index, code)."""
    for e in range(start, stop):
        kind = kinds[e]
        a = aa[e]
        b = bb[e]
        c = cc[e]
        code = _check_event(social, out_adj, fav, fans, directed, kind, a, b, c)
        if code != _OK:
            return e, code
        triadic[e] = _is_triadic(social, fav, fans, kind, a, b)
        new_pair[e] = _apply_unchecked(social, out_adj, in_adj, fav, fans, directed, kind, a, b, c)
    return stop, _OK


def _raise_for(code, event):
    if code == _UNKNOWN:
        raise UnknownNode(f"event references a node that does not exist: {event}")
    if code == _SELF:
        raise SelfLoop(f"self-loop: {event}")
    if code == _DUP:
        raise DuplicateLink(f"link already present: {event}")
    if code == _BADID:
        raise UnknownNode(f"created id is not the next dense id: {event}")
    raise TriadicNetError(f"invalid event {event}")


# ---------------------------------------------------------------------------
# graph


class DualGraph:
    """Sparse user/item graph with social (user-user) and cross (user-item) links.

    In directed mode the out/in lists of social links are kept in addition to
    the undirected union, which is what ``k_s``, walks and triadic
    classification use.
    """

    def __init__(self, directed: bool = False, *, user_capacity=16, item_capacity=16, link_capacity=64):
        self.directed = directed
        self.social = SortedAdjacency(user_capacity, 2 * link_capacity)
        self.favorites = SortedAdjacency(user_capacity, link_capacity)
        self.fans = SortedAdjacency(item_capacity, link_capacity)
        if directed:
            self.out_links = SortedAdjacency(user_capacity, link_capacity)
            self.in_links = SortedAdjacency(user_capacity, link_capacity)
        else:
            self.out_links = SortedAdjacency(1, 16)
            self.in_links = SortedAdjacency(1, 16)

    def __repr__(self):
        return (
            f"DualGraph(users={self.n_users}, items={self.n_items}, "
            f"social={self.n_social_links}, cross={self.n_cross_links}, directed={self.directed})"
        )

    @property
    def n_users(self) -> int:
        return self.social.n_nodes

    @property
    def n_items(self) -> int:
        return self.fans.n_nodes

    @property
    def n_social_links(self) -> int:
        if self.directed:
            return int(self.k_out().sum())
        return int(self.k_s().sum()) // 2

    @property
    def n_cross_links(self) -> int:
        return int(self.k_f().sum())

    # -- neighborhoods (ascending id order) --
    def friends(self, user: int) -> np.ndarray:
        self._check_user(user)
        return self.social.neighbors(user).copy()

    def favorite_items(self, user: int) -> np.ndarray:
        self._check_user(user)
        return self.favorites.neighbors(user).copy()

    def item_fans(self, item: int) -> np.ndarray:
        self._check_item(item)
        return self.fans.neighbors(item).copy()

    def out_neighbors(self, user: int) -> np.ndarray:
        self._require_directed()
        self._check_user(user)
        return self.out_links.neighbors(user).copy()

    def in_neighbors(self, user: int) -> np.ndarray:
        self._require_directed()
        self._check_user(user)
        return self.in_links.neighbors(user).copy()

    def has_social(self, u: int, v: int) -> bool:
        return bool(self.social.contains(u, v))

    def has_cross(self, u: int, item: int) -> bool:
        return bool(self.favorites.contains(u, item))

    # -- degrees --
    def k_s(self) -> np.ndarray:
        return self.social.size[: self.n_users].copy()

    def k_f(self) -> np.ndarray:
        return self.favorites.size[: self.n_users].copy()

    def k_p(self) -> np.ndarray:
        return self.fans.size[: self.n_items].copy()

    def k_a(self) -> np.ndarray:
        return self.k_s() + self.k_f()

    def k_out(self) -> np.ndarray:
        self._require_directed()
        return self.out_links.size[: self.n_users].copy()

    def k_in(self) -> np.ndarray:
        self._require_directed()
        return self.in_links.size[: self.n_users].copy()

    def degrees(self, kind: str) -> np.ndarray:
        """Degree array by name: ``ks``, ``kf``, ``kp``, ``kin``, ``kout``, ``ka``."""
        try:
            fn = {"ks": self.k_s, "kf": self.k_f, "kp": self.k_p, "kin": self.k_in, "kout": self.k_out, "ka": self.k_a}[
                kind
            ]
        except KeyError:
            raise ValueError(f"unknown degree kind {kind!r}") from None
        return fn()

    # -- link listings --
    def cross_links(self) -> tuple[np.ndarray, np.ndarray]:
        """(users, items) arrays, one entry per cross link, user-major order."""
        kf = self.k_f()
        users = np.repeat(np.arange(self.n_users, dtype=np.int64), kf)
        items = np.concatenate([self.favorites.neighbors(u) for u in range(self.n_users)] or [np.empty(0, np.int64)])
        return users, items.astype(np.int64)

    def social_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Undirected social pairs (u < v)."""
        ks = self.k_s()
        us = np.repeat(np.arange(self.n_users, dtype=np.int64), ks)
        vs = np.concatenate([self.social.neighbors(u) for u in range(self.n_users)] or [np.empty(0, np.int64)])
        keep = us < vs
        return us[keep], vs[keep].astype(np.int64)

    def structure_equal(self, other: "DualGraph") -> bool:
        if (self.directed, self.n_users, self.n_items) != (other.directed, other.n_users, other.n_items):
            return False
        for mine, theirs, n in (
            (self.social, other.social, self.n_users),
            (self.favorites, other.favorites, self.n_users),
            (self.fans, other.fans, self.n_items),
        ):
            if not np.array_equal(mine.size[:n], theirs.size[:n]):
                return False
            for node in range(n):
                if not np.array_equal(mine.neighbors(node), theirs.neighbors(node)):
                    return False
        if self.directed:
            for node in range(self.n_users):
                if not np.array_equal(self.out_links.neighbors(node), other.out_links.neighbors(node)):
                    return False
        return True

    def _check_user(self, user):
        if not 0 <= user < self.n_users:
            raise UnknownNode(f"user {user} does not exist")

    def _check_item(self, item):
        if not 0 <= item < self.n_items:
            raise UnknownNode(f"item {item} does not exist")

    def _require_directed(self):
        if not self.directed:
            raise ValueError("in/out degrees only exist for directed social links")


def apply_event(graph: DualGraph, event: Event) -> DualGraph:
    """Apply one event in place. Raises and leaves the graph untouched on error."""
    time, kind, a, b, c = event
    code = _check_event(graph.social, graph.out_links, graph.favorites, graph.fans, graph.directed, kind, a, b, c)
    if code != _OK:
        _raise_for(code, event)
    _apply_unchecked(graph.social, graph.out_links, graph.in_links, graph.favorites, graph.fans, graph.directed, kind, a, b, c)
    return graph


def classify_link(graph: DualGraph, link: Link) -> LinkClass:
    """Would adding ``link`` close at least one triangle in the union graph?

    A social link (u, v) is triadic when u and v share a friend or a favorite
    item; a cross link (u, item) when one of u's friends is already a fan.
    Direction of social links is ignored.
    """
    kind, a, b = link
    if kind == "social":
        graph._check_user(a)
        graph._check_user(b)
        if a == b:
            raise SelfLoop(f"self-loop {link}")
        if graph.has_social(a, b) if not graph.directed else graph.out_links.contains(a, b):
            raise DuplicateLink(f"{link} already present")
        tri = _is_triadic(graph.social, graph.favorites, graph.fans, SOCIAL, a, b)
    elif kind == "cross":
        graph._check_user(a)
        graph._check_item(b)
        if graph.has_cross(a, b):
            raise DuplicateLink(f"{link} already present")
        tri = _is_triadic(graph.social, graph.favorites, graph.fans, CROSS, a, b)
    else:
        raise ValueError(f"unknown link kind {kind!r}")
    return LinkClass.TRIADIC if tri else LinkClass.NON_TRIADIC


def second_neighbors(graph: DualGraph, user: int) -> set[tuple[int, WalkType]]:
    """All (node, walk type) pairs two steps away from ``user``.

    Nodes already linked to ``user`` by the link type the walk would create
    are left out, as is ``user`` itself.
    """
    graph._check_user(user)
    friends = graph.social.neighbors(user)
    favs = graph.favorites.neighbors(user)
    friend_set = set(friends.tolist())
    fav_set = set(favs.tolist())
    out: set[tuple[int, WalkType]] = set()
    for v in friends:
        for w in graph.social.neighbors(v):
            if w != user and w not in friend_set:
                out.add((int(w), WalkType.FRIEND_OF_FRIEND))
        for item in graph.favorites.neighbors(v):
            if item not in fav_set:
                out.add((int(item), WalkType.ITEM_OF_FRIEND))
    for item in favs:
        for w in graph.fans.neighbors(item):
            if w != user and w not in friend_set:
                out.add((int(w), WalkType.FAN_OF_ITEM))
    return out


# ---------------------------------------------------------------------------
# event log


@dataclass(frozen=True)
class Annotations:
    """Per-event facts that need the graph state at formation time."""

    triadic: np.ndarray  # bool, link classified against the pre-event graph
    new_pair: np.ndarray  # bool, event created a new undirected social pair


class EventLog:
    """Immutable, time-ordered sequence of events stored column-wise."""

    def __init__(self, time, kind, a, b, c, directed: bool = False):
        self.time = np.ascontiguousarray(time, dtype=np.int64)
        self.kind = np.ascontiguousarray(kind, dtype=np.int8)
        self.a = np.ascontiguousarray(a, dtype=np.int64)
        self.b = np.ascontiguousarray(b, dtype=np.int64)
        self.c = np.ascontiguousarray(c, dtype=np.int64)
        self.directed = bool(directed)
        n = self.time.shape[0]
        if not all(arr.shape == (n,) for arr in (self.kind, self.a, self.b, self.c)):
            raise ValueError("event columns must have equal length")
        if n and np.any(np.diff(self.time) < 0):
            raise ValueError("event times must be non-decreasing")
        for arr in (self.time, self.kind, self.a, self.b, self.c):
            arr.flags.writeable = False

    @classmethod
    def from_events(cls, events: Iterable[Event], directed: bool = False) -> "EventLog":
        rows = list(events)
        if not rows:
            return cls.empty(directed)
        cols = np.array(rows, dtype=np.int64).T
        return cls(cols[0], cols[1], cols[2], cols[3], cols[4], directed=directed)

    @classmethod
    def empty(cls, directed: bool = False) -> "EventLog":
        z = np.empty(0, dtype=np.int64)
        return cls(z, z, z, z, z, directed=directed)

    def __len__(self) -> int:
        return self.time.shape[0]

    def __getitem__(self, i) -> Event:
        return Event(int(self.time[i]), int(self.kind[i]), int(self.a[i]), int(self.b[i]), int(self.c[i]))

    def __iter__(self) -> Iterator[Event]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, EventLog):
            return NotImplemented
        return self.directed == other.directed and all(
            np.array_equal(getattr(self, f), getattr(other, f)) for f in ("time", "kind", "a", "b", "c")
        )

    def __repr__(self):
        span = f"{self.t_first}..{self.t_last}" if len(self) else "empty"
        return f"EventLog({len(self)} events, t={span}, directed={self.directed})"

    def slice(self, stop: int) -> "EventLog":
        return EventLog(self.time[:stop], self.kind[:stop], self.a[:stop], self.b[:stop], self.c[:stop], self.directed)

    @property
    def t_first(self) -> int:
        return int(self.time[0])

    @property
    def t_last(self) -> int:
        return int(self.time[-1])

    @property
    def n_users(self) -> int:
        return int(np.count_nonzero(self.kind == USER))

    @property
    def n_items(self) -> int:
        return int(np.count_nonzero(self.kind == ITEM))

    def check_time(self, t: int) -> None:
        if len(self) == 0 or not self.t_first <= t <= self.t_last:
            span = f"[{self.t_first}, {self.t_last}]" if len(self) else "empty log"
            raise TimeOutOfRange(f"t={t} outside {span}")

    def position(self, t: int) -> int:
        """Number of events with time <= t."""
        return int(np.searchsorted(self.time, t, side="right"))

    def users_at(self, t: int) -> int:
        return int(np.count_nonzero(self.kind[: self.position(t)] == USER))

    def items_at(self, t: int) -> int:
        return int(np.count_nonzero(self.kind[: self.position(t)] == ITEM))

    def _replay_into(self, graph: DualGraph, stop: int, triadic=None, new_pair=None):
        if triadic is None:
            triadic = np.zeros(len(self), dtype=np.bool_)
            new_pair = np.zeros(len(self), dtype=np.bool_)
        idx, code = _replay(
            graph.social, graph.out_links, graph.in_links, graph.favorites, graph.fans, graph.directed,
            self.kind, self.a, self.b, self.c, 0, stop, triadic, new_pair,
        )
        if code != _OK:
            _raise_for(code, self[idx])
        return triadic, new_pair

    def _sized_graph(self, stop: int) -> DualGraph:
        kinds = self.kind[:stop]
        n_users = int(np.count_nonzero(kinds == USER))
        n_items = int(np.count_nonzero(kinds == ITEM))
        n_links = stop - n_users - n_items + 2 * n_users
        return DualGraph(
            self.directed,
            user_capacity=n_users + 1,
            item_capacity=n_items + 1,
            link_capacity=2 * n_links + 64,
        )

    @cached_property
    def annotations(self) -> Annotations:
        graph = self._sized_graph(len(self))
        triadic, new_pair = self._replay_into(graph, len(self))
        triadic.flags.writeable = False
        new_pair.flags.writeable = False
        self.__dict__["final_graph"] = graph
        return Annotations(triadic, new_pair)

    @cached_property
    def final_graph(self) -> DualGraph:
        self.annotations
        return self.__dict__["final_graph"]


def replay(log: EventLog, stop: int | None = None) -> DualGraph:
    """Fold ``apply_event`` over the first ``stop`` events (all by default)."""
    stop = len(log) if stop is None else stop
    graph = log._sized_graph(stop)
    log._replay_into(graph, stop)
    return graph


def snapshot_at(log: EventLog, t: int) -> DualGraph:
    """Graph containing every event with time <= t."""
    log.check_time(t)
    return replay(log, log.position(t))


def _sized_graph_for(log: EventLog, stop: int) -> DualGraph:
    return log._sized_graph(stop)
