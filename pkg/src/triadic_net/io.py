"""File formats: canonical event logs, snapshots, curves, reports; empirical ingestion.

Canonical log file (UTF-8, LF)::

    #v1 t,kind,arg1,arg2 social=undirected
    0,U,-1,-1          user arrival: seed friend, seed item (ids implicit)
    0,I,0,3            item 0 uploaded (and favorited) by user 3
    1,S,3,0            social link 3 -> 0
    1,C,0,0            user 0 favorites item 0
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from numba import njit

from .errors import EmptyAfterFilter, MalformedLine, NonMonotoneTime
from .graph import CROSS, ITEM, KIND_LETTERS, SOCIAL, USER, DualGraph, EventLog

FORMAT_TOKEN = "#v1"
LOG_COLUMNS = "t,kind,arg1,arg2"


@dataclass
class IngestReport:
    total_lines: int = 0
    accepted: int = 0
    duplicates: int = 0
    self_loops: int = 0
    dangling: int = 0  # creation events synthesized for never-created ids
    filtered: int = 0  # lines removed by the user filter (empirical ingest)
    t_first: int | None = None
    t_last: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def dropped(self) -> int:
        return self.duplicates + self.self_loops + self.filtered

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dropped"] = self.dropped
        return d


# ---------------------------------------------------------------------------
# canonical log


def _arg_columns(log: EventLog):
    is_user = log.kind == USER
    return np.where(is_user, log.b, log.a), np.where(is_user, log.c, log.b)


def serialize_log(log: EventLog, path) -> None:
    """Write ``log`` in the canonical text format."""
    arg1, arg2 = _arg_columns(log)
    letters = np.array(list(KIND_LETTERS))[log.kind]
    mode = "directed" if log.directed else "undirected"
    df = pd.DataFrame({"t": log.time, "kind": letters, "arg1": arg1, "arg2": arg2})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{FORMAT_TOKEN} {LOG_COLUMNS} social={mode}\n")
        df.to_csv(fh, header=False, index=False, lineterminator="\n")


def _parse_header(line: str):
    tokens = line.split()
    if not tokens or tokens[0] != FORMAT_TOKEN:
        raise MalformedLine(1, line, f"header must start with {FORMAT_TOKEN}")
    directed = False
    for tok in tokens[1:]:
        if tok.startswith("social="):
            mode = tok.split("=", 1)[1]
            if mode not in ("directed", "undirected"):
                raise MalformedLine(1, line, f"unknown social mode {mode!r}")
            directed = mode == "directed"
    return directed


def _scan_lines(path):
    """Slow validation pass that pinpoints the first bad line."""
    prev = None
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            parts = line.split(",")
            if len(parts) != 4 or parts[1] not in KIND_LETTERS or not parts[1]:
                raise MalformedLine(lineno, line, "expected t,kind,arg1,arg2")
            try:
                t, x, y = int(parts[0]), int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedLine(lineno, line, "non-integer field") from None
            if prev is not None and t < prev:
                raise NonMonotoneTime(lineno, line, f"time {t} after {prev}")
            if parts[1] != "U" and (x < 0 or y < 0):
                raise MalformedLine(lineno, line, "negative id")
            if x < -1 or y < -1:
                raise MalformedLine(lineno, line, "negative id")
            prev = t


@njit
def _ensure_users(upto, t, social, out_adj, in_adj, fav, directed, ev, n_ev):
    made = 0
    while social.n_nodes <= upto:
        u = social.add_node()
        fav.add_node()
        if directed:
            out_adj.add_node()
            in_adj.add_node()
        ev[n_ev, 0] = t
        ev[n_ev, 1] = USER
        ev[n_ev, 2] = u
        ev[n_ev, 3] = -1
        ev[n_ev, 4] = -1
        n_ev += 1
        made += 1
    return n_ev, made


@njit
def _ensure_items(upto, owner, t, fav, fans, ev, n_ev):
    made = 0
    while fans.n_nodes <= upto:
        item = fans.add_node()
        fav.insert(owner, item)
        fans.insert(item, owner)
        ev[n_ev, 0] = t
        ev[n_ev, 1] = ITEM
        ev[n_ev, 2] = item
        ev[n_ev, 3] = owner
        ev[n_ev, 4] = -1
        n_ev += 1
        made += 1
    return n_ev, made


@njit
def _sanitize(times, kinds, x1, x2, directed, social, out_adj, in_adj, fav, fans, ev, counts):
    """Drop duplicates/self-loops and synthesize creations for dangling ids.

    counts = [accepted, duplicates, self_loops, dangling]
    """
    n_ev = 0
    for i in range(times.shape[0]):
        t = times[i]
        k = kinds[i]
        x = x1[i]
        y = x2[i]
        if k == USER:
            if x >= social.n_nodes:
                n_ev, made = _ensure_users(x, t, social, out_adj, in_adj, fav, directed, ev, n_ev)
                counts[3] += made
            u = social.add_node()
            fav.add_node()
            if directed:
                out_adj.add_node()
                in_adj.add_node()
            item = y
            if y >= fans.n_nodes:
                item = -1
            if x >= 0:
                social.insert(u, x)
                social.insert(x, u)
                if directed:
                    out_adj.insert(u, x)
                    in_adj.insert(x, u)
            if item >= 0:
                fav.insert(u, item)
                fans.insert(item, u)
            ev[n_ev, 0] = t
            ev[n_ev, 1] = USER
            ev[n_ev, 2] = u
            ev[n_ev, 3] = x
            ev[n_ev, 4] = item
            n_ev += 1
            if y >= 0 and item < 0:
                n_ev, made = _ensure_items(y, u, t, fav, fans, ev, n_ev)
                counts[3] += made
            counts[0] += 1
        elif k == ITEM:
            if y >= social.n_nodes:
                n_ev, made = _ensure_users(y, t, social, out_adj, in_adj, fav, directed, ev, n_ev)
                counts[3] += made
            if x < fans.n_nodes:
                counts[1] += 1
                continue
            if x > fans.n_nodes:
                n_ev, made = _ensure_items(x - 1, y, t, fav, fans, ev, n_ev)
                counts[3] += made
            n_ev, made = _ensure_items(x, y, t, fav, fans, ev, n_ev)
            counts[0] += 1
        elif k == SOCIAL:
            if x == y:
                counts[2] += 1
                continue
            top = max(x, y)
            if top >= social.n_nodes:
                n_ev, made = _ensure_users(top, t, social, out_adj, in_adj, fav, directed, ev, n_ev)
                counts[3] += made
            dup = out_adj.contains(x, y) if directed else social.contains(x, y)
            if dup:
                counts[1] += 1
                continue
            if directed:
                out_adj.insert(x, y)
                in_adj.insert(y, x)
            social.insert(x, y)
            social.insert(y, x)
            ev[n_ev, 0] = t
            ev[n_ev, 1] = SOCIAL
            ev[n_ev, 2] = x
            ev[n_ev, 3] = y
            ev[n_ev, 4] = -1
            n_ev += 1
            counts[0] += 1
        else:
            if x >= social.n_nodes:
                n_ev, made = _ensure_users(x, t, social, out_adj, in_adj, fav, directed, ev, n_ev)
                counts[3] += made
            if y >= fans.n_nodes:
                # the user becomes the uploader of the unseen item
                n_ev, made = _ensure_items(y, x, t, fav, fans, ev, n_ev)
                counts[3] += made
                counts[0] += 1
                continue
            if fav.contains(x, y):
                counts[1] += 1
                continue
            fav.insert(x, y)
            fans.insert(y, x)
            ev[n_ev, 0] = t
            ev[n_ev, 1] = CROSS
            ev[n_ev, 2] = x
            ev[n_ev, 3] = y
            ev[n_ev, 4] = -1
            n_ev += 1
            counts[0] += 1
    return n_ev


def _events_to_log(times, kinds, x1, x2, directed, report: IngestReport) -> EventLog:
    """Clean raw (t, kind, arg1, arg2) columns into a replayable log."""
    n = times.shape[0]
    max_user = int(max(x1.max(initial=-1), x2.max(initial=-1)))
    max_item = max_user
    g = DualGraph(directed, user_capacity=max(n, 16), item_capacity=max(n, 16), link_capacity=2 * n + 64)
    ev = np.empty((2 * n + max_user + max_item + 4, 5), dtype=np.int64)
    counts = np.zeros(4, dtype=np.int64)
    n_ev = _sanitize(times, kinds, x1, x2, directed, g.social, g.out_links, g.in_links, g.favorites, g.fans, ev, counts)
    report.accepted += int(counts[0])
    report.duplicates += int(counts[1])
    report.self_loops += int(counts[2])
    report.dangling += int(counts[3])
    ev = ev[:n_ev]
    log = EventLog(ev[:, 0], ev[:, 1], ev[:, 2], ev[:, 3], ev[:, 4], directed=directed)
    if len(log):
        report.t_first, report.t_last = log.t_first, log.t_last
    return log


def parse_log(path) -> tuple[EventLog, IngestReport]:
    """Read a canonical log file; duplicates are dropped and counted."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
    directed = _parse_header(header)
    report = IngestReport()
    try:
        df = pd.read_csv(path, skiprows=1, header=None, names=["t", "kind", "arg1", "arg2"],
                         dtype={"t": np.int64, "kind": str, "arg1": np.int64, "arg2": np.int64},
                         keep_default_na=False, na_filter=False, engine="c")
    except pd.errors.EmptyDataError:
        return EventLog.empty(directed), report
    except (ValueError, pd.errors.ParserError):
        _scan_lines(path)
        raise
    report.total_lines = len(df)
    if len(df) == 0:
        return EventLog.empty(directed), report
    codes = np.full(len(df), -1, dtype=np.int8)
    for code, letter in enumerate(KIND_LETTERS):
        codes[(df["kind"] == letter).to_numpy()] = code
    times = df["t"].to_numpy()
    x1 = df["arg1"].to_numpy()
    x2 = df["arg2"].to_numpy()
    bad = (codes < 0) | (x1 < -1) | (x2 < -1) | ((codes != USER) & ((x1 < 0) | (x2 < 0)))
    if bad.any() or np.any(np.diff(times) < 0):
        _scan_lines(path)
    log = _events_to_log(times, codes, x1, x2, directed, report)
    return log, report


# ---------------------------------------------------------------------------
# empirical ingestion


@dataclass
class IngestOptions:
    min_cross: int = 1
    min_social: int = 1
    shuffle_ties: bool = False  # randomize same-day order (sensitivity probe)
    seed: int = 0
    delimiter: str = ","


def _read_edges(path, delimiter):
    """Edge list ``a,b,day`` with arbitrary string ids; '#' lines are comments."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(delimiter)]
            if len(parts) != 3 or not parts[0] or not parts[1]:
                raise MalformedLine(lineno, line, "expected a,b,day")
            try:
                day = int(parts[2])
            except ValueError:
                raise MalformedLine(lineno, line, "day must be an integer") from None
            rows.append((parts[0], parts[1], day))
    return rows


def ingest_empirical(user_links_path, cross_links_path, options: IngestOptions | None = None):
    """Turn timestamped social and cross edge lists into a canonical directed log.

    Keeps only users with at least one cross link and one social link (either
    direction), makes the first user to mark an item its uploader (an ITEM
    event, i.e. an owner self-favorite), and orders each day as: user
    creations, item uploads, social links, cross links, preserving input order
    within each class.

    Returns ``(log, report, user_ids, item_ids)`` where the id lists map dense
    ids back to the raw identifiers.
    """
    options = options or IngestOptions()
    social = _read_edges(user_links_path, options.delimiter)
    cross = _read_edges(cross_links_path, options.delimiter)
    report = IngestReport(total_lines=len(social) + len(cross))

    n_soc: dict[str, int] = {}
    n_cross: dict[str, int] = {}
    for s, d, _ in social:
        if s != d:
            n_soc[s] = n_soc.get(s, 0) + 1
            n_soc[d] = n_soc.get(d, 0) + 1
    for u, _, _ in cross:
        n_cross[u] = n_cross.get(u, 0) + 1
    keep = {u for u in n_soc if n_soc[u] >= options.min_social and n_cross.get(u, 0) >= options.min_cross}
    soc_kept = [(s, d, day, i) for i, (s, d, day) in enumerate(social) if s in keep and d in keep]
    cross_kept = [(u, it, day, i) for i, (u, it, day) in enumerate(cross) if u in keep]
    report.filtered = report.total_lines - len(soc_kept) - len(cross_kept)
    if not soc_kept and not cross_kept:
        raise EmptyAfterFilter("no events survive the user filter")

    # class rank within a day: 0 user creation, 1 upload, 2 social, 3 cross
    rows = []  # (day, class_rank, input order, kind, raw a, raw b)
    for s, d, day, i in soc_kept:
        rows.append((day, 2, i, SOCIAL, s, d))
    seen_items = set()
    for u, it, day, i in sorted(cross_kept, key=lambda r: (r[2], r[3])):
        if it in seen_items:
            rows.append((day, 3, i, CROSS, u, it))
        else:
            seen_items.add(it)
            rows.append((day, 1, i, ITEM, it, u))
    first_day: dict[str, tuple] = {}
    for day, rank, i, kind, a, b in sorted(rows, key=lambda r: (r[0], r[1], r[2])):
        users = (a, b) if kind == SOCIAL else ((b,) if kind == ITEM else (a,))
        for u in users:
            if u not in first_day:
                first_day[u] = (day, len(first_day))
    for u, (day, order) in first_day.items():
        rows.append((day, 0, order, USER, u, None))
    if options.shuffle_ties:
        rng = np.random.default_rng(options.seed)
        tiebreak = rng.permutation(len(rows))
        rows = [r for _, r in sorted(zip(tiebreak, rows), key=lambda p: (p[1][0], p[1][1], p[0]))]
    else:
        rows.sort(key=lambda r: (r[0], r[1], r[2]))

    user_ids: dict[str, int] = {}
    item_ids: dict[str, int] = {}
    times, kinds, x1, x2 = [], [], [], []
    for day, _, _, kind, a, b in rows:
        if kind == USER:
            user_ids[a] = len(user_ids)
            times.append(day), kinds.append(USER), x1.append(-1), x2.append(-1)
        elif kind == ITEM:
            item_ids[a] = len(item_ids)
            times.append(day), kinds.append(ITEM), x1.append(item_ids[a]), x2.append(user_ids[b])
        elif kind == SOCIAL:
            times.append(day), kinds.append(SOCIAL), x1.append(user_ids[a]), x2.append(user_ids[b])
        else:
            times.append(day), kinds.append(CROSS), x1.append(user_ids[a]), x2.append(item_ids[b])
    log = _events_to_log(
        np.asarray(times, np.int64), np.asarray(kinds, np.int8), np.asarray(x1, np.int64),
        np.asarray(x2, np.int64), True, report,
    )
    # accepted counts input lines, not synthesized user creations
    report.accepted -= sum(1 for r in rows if r[3] == USER)
    if len(log) == 0:
        raise EmptyAfterFilter("no events survive the user filter")
    return log, report, list(user_ids), list(item_ids)


def write_id_map(ids, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{FORMAT_TOKEN}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "raw"])
        for i, raw in enumerate(ids):
            w.writerow([i, raw])


def segments(log: EventLog, min_gap: int = 2) -> list[tuple[int, int]]:
    """Maximal time spans whose consecutive event times differ by < ``min_gap``."""
    if len(log) == 0:
        return []
    t = np.unique(log.time)
    cuts = np.flatnonzero(np.diff(t) >= min_gap)
    starts = np.concatenate([[t[0]], t[cuts + 1]])
    ends = np.concatenate([t[cuts], [t[-1]]])
    return [(int(a), int(b)) for a, b in zip(starts, ends)]


def t0_within_segments(t0_list, dt, spans) -> list[int]:
    return [t0 for t0 in t0_list if any(a <= t0 and t0 + dt <= b for a, b in spans)]


# ---------------------------------------------------------------------------
# snapshot / curves / reports


def write_snapshot(graph: DualGraph, path) -> None:
    """Per-node degree table; in/out columns are blank for undirected graphs."""
    ks, kf, kp = graph.k_s(), graph.k_f(), graph.k_p()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{FORMAT_TOKEN}\n")
        fh.write("node_kind,id,k_s,k_in,k_out,k_f,k_p\n")
        if graph.directed:
            kin, kout = graph.k_in(), graph.k_out()
            for u in range(graph.n_users):
                fh.write(f"user,{u},{ks[u]},{kin[u]},{kout[u]},{kf[u]},0\n")
        else:
            for u in range(graph.n_users):
                fh.write(f"user,{u},{ks[u]},,,{kf[u]},0\n")
        for i in range(graph.n_items):
            fh.write(f"item,{i},0,{'0' if graph.directed else ''},{'0' if graph.directed else ''},0,{kp[i]}\n")


def read_snapshot(path) -> pd.DataFrame:
    with open(path, encoding="utf-8") as fh:
        if fh.readline().strip() != FORMAT_TOKEN:
            raise MalformedLine(1, "", f"missing {FORMAT_TOKEN}")
    return pd.read_csv(path, skiprows=1)


def write_curve(path, x, y, count) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{FORMAT_TOKEN}\n")
        fh.write("x,y,count\n")
        for xi, yi, ci in zip(x, y, count):
            fh.write(f"{_num(xi)},{_num(yi)},{int(ci)}\n")


def read_curve(path) -> pd.DataFrame:
    return pd.read_csv(path, skiprows=1)


def _num(v) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return None if math.isnan(f) or math.isinf(f) else f
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
