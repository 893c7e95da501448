import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triadic_net import (
    DualGraph,
    Event,
    EventLog,
    Link,
    LinkClass,
    WalkType,
    apply_event,
    classify_link,
    replay,
    second_neighbors,
    snapshot_at,
)
from triadic_net.errors import DuplicateLink, SelfLoop, TimeOutOfRange, UnknownNode

import oracles

E = Event


def build(events, directed=False):
    g = DualGraph(directed)
    for e in events:
        apply_event(g, e)
    return g


# -- apply_event ------------------------------------------------------------


def test_first_user_has_zero_degrees():
    g = build([E.new_user(0, 0)])
    assert g.n_users == 1
    assert g.k_s().tolist() == [0] and g.k_f().tolist() == [0]


def test_cross_link_updates_both_sides():
    g = build([E.new_user(0, 0), E.new_user(0, 1), E.new_item(0, 0, 0)])
    apply_event(g, E.cross(1, 1, 0))
    assert g.k_f().tolist() == [1, 1]
    assert g.k_p().tolist() == [2]
    assert g.k_f().sum() == g.k_p().sum()


@pytest.mark.parametrize(
    "event, exc",
    [
        (E.social(1, 0, 0), SelfLoop),
        (E.social(1, 0, 1), DuplicateLink),
        (E.social(1, 1, 0), DuplicateLink),  # undirected
        (E.social(1, 0, 7), UnknownNode),
        (E.cross(1, 0, 0), DuplicateLink),
        (E.cross(1, 0, 5), UnknownNode),
        (E.new_item(1, 3, 0), UnknownNode),  # id must be the next dense id
        (E.new_user(1, 2, 9), UnknownNode),
    ],
)
def test_invalid_events_leave_graph_untouched(event, exc):
    g = build([E.new_user(0, 0), E.new_user(0, 1, 0), E.new_item(0, 0, 0)])
    before = (g.k_s().tolist(), g.k_f().tolist(), g.k_p().tolist(), g.n_users, g.n_items)
    with pytest.raises(exc):
        apply_event(g, event)
    assert (g.k_s().tolist(), g.k_f().tolist(), g.k_p().tolist(), g.n_users, g.n_items) == before


def test_directed_mode_allows_reciprocal_link():
    g = build([E.new_user(0, 0), E.new_user(0, 1), E.social(0, 0, 1), E.social(0, 1, 0)], directed=True)
    assert g.k_out().tolist() == [1, 1] and g.k_in().tolist() == [1, 1]
    assert g.k_s().tolist() == [1, 1]  # one undirected pair
    with pytest.raises(DuplicateLink):
        apply_event(g, E.social(1, 0, 1))


def fig1_events():
    """Directed example network; ids are the figure's labels minus one."""
    ev = [E.new_user(0, u) for u in range(6)]
    ev += [E.new_item(0, i, 0) for i in range(4)]  # U1 uploads I1..I4
    ev += [E.social(1, 3, 0), E.social(1, 3, 1), E.social(1, 3, 2), E.social(1, 3, 4)]  # U4 -> 4 users
    ev += [E.social(1, 4, 3), E.social(1, 5, 3)]  # U5, U6 -> U4 (U5 reciprocal)
    ev += [E.cross(2, 3, 3), E.cross(2, 4, 3), E.cross(2, 3, 1)]  # U4, U5 fans of I4; U4 of I2
    return ev


def test_fig1_degrees():
    g = build(fig1_events(), directed=True)
    u4, i4 = 3, 3
    assert g.k_in()[u4] == 2
    assert g.k_out()[u4] == 4
    assert g.k_s()[u4] == 5
    assert g.k_f()[u4] == 2
    assert g.k_p()[i4] == 3  # uploader U1 plus U4, U5


def fig3_events():
    """Pre-step network of the model illustration (ids are labels minus one)."""
    ev = [E.new_user(0, u) for u in range(10)]
    ev += [E.new_item(0, 0, 0), E.new_item(0, 1, 1), E.new_item(0, 2, 5), E.new_item(0, 3, 8), E.new_item(0, 4, 8)]
    ev += [
        E.social(1, 1, 0), E.social(1, 0, 2),  # U2 - U1 - U3
        E.social(1, 7, 8),  # U8 - U9, U9 owns I4, I5
        E.social(1, 6, 5),  # U7 - U6
        E.social(1, 9, 3),
        E.cross(1, 6, 2), E.cross(1, 4, 2),  # U7 and U5 fans of I3
    ]
    return ev


def test_fig3_second_neighbors_and_step():
    g = build(fig3_events())
    assert (2, WalkType.FRIEND_OF_FRIEND) in second_neighbors(g, 1)  # U2 -> U3
    assert (3, WalkType.ITEM_OF_FRIEND) in second_neighbors(g, 7)  # U8 -> I4
    assert (4, WalkType.FAN_OF_ITEM) in second_neighbors(g, 6)  # U7 -> U5
    step = [
        E.new_user(2, 10, 8, 4),  # U11 joins: U9 and I5
        E.new_item(2, 5, 9),  # U10 uploads I6
        E.social(2, 1, 2), E.cross(2, 7, 3), E.social(2, 6, 4),
    ]
    for e in step:
        link = None
        if e.kind == 2:
            link = Link.social(e.a, e.b)
        elif e.kind == 3:
            link = Link.cross(e.a, e.b)
        if link is not None:
            assert classify_link(g, link) is LinkClass.TRIADIC
        apply_event(g, e)
    assert g.n_users == 11 and g.n_items == 6
    assert g.k_s()[10] == 1 and g.k_f()[10] == 1
    assert g.k_p()[4] == 2 and g.k_p()[3] == 2
    assert g.k_s()[4] == 1  # U5 gained a passive link


# -- snapshot_at ------------------------------------------------------------


def small_log():
    return EventLog.from_events([E.new_user(1, 0), E.new_user(2, 1), E.social(2, 0, 1)])


def test_snapshot_at_counts_events_up_to_t():
    log = small_log()
    g = snapshot_at(log, 1)
    assert g.n_users == 1 and g.n_social_links == 0
    assert snapshot_at(log, 2).n_social_links == 1


def test_snapshot_out_of_range():
    with pytest.raises(TimeOutOfRange):
        snapshot_at(small_log(), 3)
    with pytest.raises(TimeOutOfRange):
        snapshot_at(small_log(), 0)


def test_snapshot_prefix_composition():
    rng = np.random.default_rng(5)
    events = oracles.random_log(rng, 300)
    log = EventLog.from_events([Event(*e) for e in events])
    full = snapshot_at(log, log.t_last)
    folded = build(log)
    assert full.structure_equal(folded)
    for t in range(log.t_first + 1, log.t_last + 1, 7):
        g = snapshot_at(log, t - 1)
        for e in log:
            if e.time == t:
                apply_event(g, e)
        assert g.structure_equal(snapshot_at(log, t))


def test_replay_is_deterministic():
    rng = np.random.default_rng(2)
    log = EventLog.from_events([Event(*e) for e in oracles.random_log(rng, 400)])
    assert replay(log).structure_equal(replay(log))


# -- second_neighbors / classify_link ---------------------------------------


def test_isolated_user_has_no_second_neighbors():
    assert second_neighbors(build([E.new_user(0, 0)]), 0) == set()


def test_second_neighbors_unknown_user():
    with pytest.raises(UnknownNode):
        second_neighbors(build([E.new_user(0, 0)]), 3)


def test_second_neighbors_matches_brute_force():
    rng = np.random.default_rng(11)
    events = oracles.random_log(rng, 400, p_user=0.1, p_item=0.08)
    g = build([Event(*e) for e in events])
    og = oracles.replay(events)
    assert g.n_users >= 30
    for u in range(g.n_users):
        got = {(n, w.value) for n, w in second_neighbors(g, u)}
        assert got == oracles.second_neighbors(og, u)


def test_shared_item_makes_social_link_triadic():
    g = build([E.new_user(0, 0), E.new_user(0, 1), E.new_item(0, 0, 0), E.cross(0, 1, 0)])
    assert classify_link(g, Link.social(0, 1)) is LinkClass.TRIADIC


def test_first_link_of_new_user_is_not_triadic():
    g = build([E.new_user(0, 0), E.new_user(0, 1, 0), E.new_user(1, 2)])
    assert classify_link(g, Link.social(2, 0)) is LinkClass.NON_TRIADIC


def test_classify_rejects_existing_link():
    g = build([E.new_user(0, 0), E.new_user(0, 1, 0)])
    with pytest.raises(DuplicateLink):
        classify_link(g, Link.social(0, 1))


def test_classify_matches_triangle_count():
    rng = np.random.default_rng(3)
    checked = 0
    for rep in range(12):
        events = oracles.random_log(rng, 260, p_user=0.25, p_item=0.1)
        g = build([Event(*e) for e in events])
        og = oracles.replay(events)
        for _ in range(100):
            if rng.random() < 0.5:
                a, b = (int(v) for v in rng.integers(0, g.n_users, 2))
                if a == b or g.has_social(a, b):
                    continue
                kind = "social"
            else:
                a, b = int(rng.integers(0, g.n_users)), int(rng.integers(0, g.n_items))
                if g.has_cross(a, b):
                    continue
                kind = "cross"
            got = classify_link(g, Link(kind, a, b))
            delta = oracles.triangle_delta(og, kind, a, b)
            assert (got is LinkClass.TRIADIC) == (delta >= 1)
            checked += 1
    assert checked >= 1000


# -- invariants -------------------------------------------------------------


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**31), st.booleans())
def test_degree_cache_matches_adjacency(seed, directed):
    rng = np.random.default_rng(seed)
    events = oracles.random_log(rng, 10_000, directed=directed)
    g = build([Event(*e) for e in events], directed=directed)
    og = oracles.replay(events, directed)
    for kind in ("ks", "kf", "kp") + (("kin", "kout") if directed else ()):
        assert np.array_equal(g.degrees(kind), og.degrees(kind))
    assert g.k_f().sum() == g.k_p().sum()
    for u in range(0, g.n_users, 17):
        assert g.friends(u).tolist() == sorted(og.friends[u])
        assert g.favorite_items(u).tolist() == sorted(og.fav[u])
        assert len(g.friends(u)) == g.k_s()[u]
    if not directed:
        for u in range(g.n_users):
            for v in g.friends(u):
                assert g.has_social(int(v), u)
