"""Command-line front end: simulate, ingest, analyze, reproduce.

Exit codes
----------
0  success
1  a measurement failed hard (analyze) or a reproduction check is out of tolerance
2  invalid parameters or configuration
3  input/output error (missing file, unreadable or malformed input)
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import io as tio
from . import measures as ms
from . import reproduce as rp
from .errors import EmptyWindow, InvalidParams, MalformedLine, TriadicNetError
from .model import ModelParams, Simulator, write_tick_reports

log = logging.getLogger("triadic_net")

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

# section -> key -> parser
_SCHEMA = {
    "model": {
        "m": int, "n": int, "mu": float, "phi0": float, "theta_min": float, "theta_max": float,
        "n0": int, "m0": int, "n_final": int, "seed": int, "walk_retries": int, "reset_passive": "bool",
    },
    "analysis": {
        "measures": str, "t0": str, "t1": int, "dt": int, "threads": int,
        "segment_policy": str, "min_count": int, "fit_quantile": float,
    },
    "io": {
        "input": str, "out_dir": str, "user_links": str, "cross_links": str,
        "min_cross": int, "min_social": int, "shuffle_ties": "bool", "delimiter": str,
    },
}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["format", "command", "input", "measurements"],
    "properties": {
        "format": {"const": "v1"},
        "command": {"type": "string"},
        "input": {"type": "string"},
        "measurements": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["ok", "no_fit", "error"]},
                    "exponent": {"type": ["number", "null"]},
                    "stderr": {"type": ["number", "null"]},
                    "r2": {"type": ["number", "null"]},
                    "n_points": {"type": ["integer", "null"]},
                    "sample_size": {"type": ["integer", "null"]},
                    "files": {"type": "array", "items": {"type": "string"}},
                    "error": {"type": "string"},
                },
            },
        },
    },
}


class ConfigError(InvalidParams):
    pass


# ---------------------------------------------------------------------------
# configuration


def read_config(path) -> dict:
    """Parse an INI file into ``{section: {key: value}}``; unknown keys are rejected."""
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    out: dict = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        out[section] = {}
        for key, raw in cp.items(section):
            kind = _SCHEMA[section].get(key)
            if kind is None:
                raise ConfigError(f"unknown key '{key}' in [{section}]")
            try:
                out[section][key] = cp.getboolean(section, key) if kind == "bool" else kind(raw)
            except ValueError:
                raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None
    return out


def model_params(cfg: dict, args) -> ModelParams:
    m = dict(cfg.get("model", {}))
    lo = m.pop("theta_min", 40.0)
    hi = m.pop("theta_max", 4000.0)
    if args.seed is not None:
        m["seed"] = args.seed
    if getattr(args, "n_final", None) is not None:
        m["n_final"] = args.n_final
    if getattr(args, "n0", None) is not None:
        m["n0"] = args.n0
    return ModelParams(theta_range=(lo, hi), **m)


def _setting(args, cfg, attr, section, key, default=None):
    v = getattr(args, attr, None)
    if v is not None:
        return v
    return cfg.get(section, {}).get(key, default)


def _out_dir(args, cfg) -> Path:
    d = Path(_setting(args, cfg, "out_dir", "io", "out_dir", "."))
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args, cfg) -> int:
    params = model_params(cfg, args)
    out = _out_dir(args, cfg)
    log.info("simulating %s", params)
    sim = Simulator(params)
    elog, reports = sim.run()
    tio.serialize_log(elog, out / "events.csv")
    write_tick_reports(reports, out / "ticks.csv")
    print(f"wrote {len(elog)} events ({sim.n_users} users, {sim.n_items} items) to {out}")
    return EXIT_OK


def cmd_ingest(args, cfg) -> int:
    users = _setting(args, cfg, "user_links", "io", "user_links")
    cross = _setting(args, cfg, "cross_links", "io", "cross_links")
    if not users or not cross:
        raise ConfigError("ingest needs --user-links and --cross-links")
    io_cfg = cfg.get("io", {})
    opts = tio.IngestOptions(
        min_cross=io_cfg.get("min_cross", 1),
        min_social=io_cfg.get("min_social", 1),
        shuffle_ties=bool(args.shuffle_ties or io_cfg.get("shuffle_ties", False)),
        seed=args.seed if args.seed is not None else 0,
        delimiter=io_cfg.get("delimiter", ","),
    )
    elog, report, user_ids, item_ids = tio.ingest_empirical(users, cross, opts)
    out = _out_dir(args, cfg)
    tio.serialize_log(elog, out / "events.csv")
    tio.write_id_map(user_ids, out / "user_ids.csv")
    tio.write_id_map(item_ids, out / "item_ids.csv")
    tio.write_json(report.to_dict(), out / "ingest_report.json")
    print(f"ingested {len(elog)} events ({len(user_ids)} users, {len(item_ids)} items) into {out}")
    return EXIT_OK


def _parse_t0(text) -> list[int] | None:
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [int(t) for t in text]
    return [int(t) for t in str(text).replace(";", ",").split(",") if t.strip()]


def _fit_fields(fit) -> dict:
    if fit is None:
        return {"exponent": None, "stderr": None, "r2": None, "n_points": None}
    return {"stderr": fit.stderr, "r2": fit.r2, "n_points": fit.n_points}


def _measure_one(spec: str, elog, settings: dict, out: Path) -> dict:
    parts = spec.split(":")
    name = parts[0]
    slug = spec.replace(":", "_")
    entry = {"name": spec, "status": "ok", "files": []}
    if len(elog) == 0:
        raise EmptyWindow("empty log")
    if name == "pa":
        if len(parts) != 3:
            raise InvalidParams(f"pa needs pa:X:Y, got {spec!r}")
        dt = settings["dt"] if settings["dt"] is not None else ms.default_dt(elog)
        t0_list = settings["t0"]
        if t0_list is None:
            t0_list = ms.default_t0_list(elog, dt)
        if settings["segment_policy"] == "separate":
            kept = tio.t0_within_segments(t0_list, dt, tio.segments(elog))
            if not kept:
                raise EmptyWindow("no t0 window fits inside a single segment")
            t0_list = kept
        est = ms.measure_pa(elog, parts[1], parts[2], t0_list=t0_list, dt=dt,
                            fit_quantile=settings["fit_quantile"])
        f = out / f"{slug}.csv"
        tio.write_curve(f, est.x, est.kappa, est.counts)
        entry["files"].append(f.name)
        entry.update(_fit_fields(est.fit))
        entry.update(exponent=est.alpha, alpha_triadic=est.alpha_t, alpha_nontriadic=est.alpha_n,
                     windows=est.windows_used, dt=dt, sample_size=int(est.counts.sum()),
                     fit_window=est.fit_window)
        if est.fit is None:
            entry["status"] = "no_fit"
            entry["error"] = est.fit_error or "fit failed"
    elif name == "growth":
        kind = parts[1]
        t0 = settings["t0"][0] if settings["t0"] else None
        t1 = settings["t1"]
        if t0 is None or t1 is None:
            t0, t1 = rp.growth_window(elog)
        g = ms.growth_stats(elog, kind, t0, t1, min_count=settings["min_count"])
        f = out / f"{slug}.csv"
        tio.write_curve(f, g.k0_mean, g.r_mean, g.counts)
        f2 = out / f"{slug}_sigma.csv"
        tio.write_curve(f2, g.k0_mean, g.r_std, g.counts)
        entry["files"] += [f.name, f2.name]
        entry.update(_fit_fields(g.fit_sigma))
        entry.update(exponent=g.beta_sigma, beta_sigma=g.beta_sigma, beta_r=g.beta_r, t0=t0, t1=t1,
                     sample_size=int(np.sum(g.counts)))
        if g.beta_sigma is None:
            entry["status"] = "no_fit"
    elif name == "degree":
        d = ms.degree_distribution(elog.final_graph, parts[1])
        f = out / f"{slug}.csv"
        tio.write_curve(f, d.bin_center, d.pdf, d.counts)
        entry["files"].append(f.name)
        entry.update(_fit_fields(d.fit))
        entry.update(exponent=d.exponent, mean_degree=d.mean_degree, sample_size=int(d.counts.sum()))
    elif name == "pcc":
        g = elog.final_graph
        entry.update(exponent=None, pcc=ms.degree_pcc(g, parts[1], parts[2]), sample_size=g.n_users)
    elif name == "nn":
        nn = ms.nn_degree_curves(elog.final_graph)
        f1, f2 = out / "nn_kp_by_kf.csv", out / "nn_kf_by_kp.csv"
        tio.write_curve(f1, nn.kf_values, nn.knn_p_by_kf, nn.kf_counts)
        tio.write_curve(f2, nn.kp_values, nn.knn_f_by_kp, nn.kp_counts)
        entry["files"] += [f1.name, f2.name]
        entry.update(exponent=None, sample_size=int(nn.kf_counts.sum()))
    elif name in ("exposure", "shared"):
        fn = ms.exposure_influence if name == "exposure" else ms.shared_favorites_influence
        est = fn(elog)
        f = out / f"influence_{name}.csv"
        tio.write_curve(f, est.level, est.kappa, est.exposures)
        entry["files"].append(f.name)
        entry.update(_fit_fields(est.fit))
        entry.update(exponent=est.exponent, sample_size=int(est.exposures.sum()))
        if est.fit is None:
            entry["status"] = "no_fit"
    elif name == "triadic":
        cls = parts[1] if len(parts) > 1 else "social"
        start = None if elog.directed else elog.t_first + 1
        entry.update(exponent=None, fraction=ms.triadic_fraction(elog, cls, start_time=start))
    else:
        raise InvalidParams(f"unknown measurement {spec!r}")
    return entry


def _safe_measure(spec, elog, settings, out) -> dict:
    try:
        return _measure_one(spec, elog, settings, out)
    except InvalidParams:
        raise
    except (TriadicNetError, ValueError) as exc:
        return {"name": spec, "status": "error", "error": f"{type(exc).__name__}: {exc}", "files": []}


DEFAULT_MEASURES = ["pa:kf:kf", "pa:ks:kf", "pa:kf:ks", "pa:ks:ks", "pa:kp:kp"]


def cmd_analyze(args, cfg) -> int:
    path = _setting(args, cfg, "input", "io", "input")
    if not path:
        raise ConfigError("analyze needs --input")
    elog, _ = tio.parse_log(path)
    an = cfg.get("analysis", {})
    measures = args.measure or [m.strip() for m in an.get("measures", "").split(",") if m.strip()]
    measures = measures or DEFAULT_MEASURES
    settings = {
        "dt": args.dt if args.dt is not None else an.get("dt"),
        "t0": _parse_t0(args.t0 if args.t0 is not None else an.get("t0")),
        "t1": args.t1 if args.t1 is not None else an.get("t1"),
        "segment_policy": args.segment_policy or an.get("segment_policy", "separate"),
        "min_count": an.get("min_count", ms.MIN_BIN_COUNT),
        "fit_quantile": an.get("fit_quantile", 99.0),
    }
    if settings["segment_policy"] not in ("separate", "bridge"):
        raise ConfigError("segment_policy must be 'separate' or 'bridge'")
    threads = max(1, int(_setting(args, cfg, "threads", "analysis", "threads", 1)))
    out = _out_dir(args, cfg)
    if len(elog):
        _ = elog.annotations  # shared by all measurements; build once before fan-out
    with ThreadPoolExecutor(max_workers=threads) as pool:
        entries = list(pool.map(lambda s: _safe_measure(s, elog, settings, out), measures))
    summary = {"format": "v1", "command": "analyze", "input": str(path), "measurements": entries}
    summary = tio._jsonable(summary)
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    tio.write_json(summary, out / "summary.json")
    failed = 0
    for e in entries:
        val = next((e[k] for k in ("exponent", "fraction", "pcc") if e.get(k) is not None), None)
        shown = "" if val is None else f"{val:.4f}"
        print(f"{e['status']:<7} {e['name']:<16} {shown} {e.get('error', '')}".rstrip())
        failed += e["status"] == "error"
    return EXIT_FAILED if failed else EXIT_OK


def cmd_reproduce(args, cfg) -> int:
    params = model_params(cfg, args)
    target = args.target
    out = _out_dir(args, cfg)
    checks = []
    const = target == "fig5" and args.constant_theta
    elog = rp.simulate(params).log
    if target == "table3":
        checks = rp.table3(elog, dt=args.dt, t0_list=_parse_t0(args.t0))
    elif target == "table2":
        checks = rp.table2(elog)
        if args.constant_theta:
            alt = rp.simulate(params, constant_theta=True)
            checks += rp.constant_theta(alt.log)
    elif target == "fig4":
        checks = rp.fig4(elog)
    elif target == "fig5":
        checks = rp.fig5(elog)
        if const:
            alt = rp.simulate(params, constant_theta=True)
            base, other = rp.nn_shape(elog), rp.nn_shape(alt.log)
            tio.write_json({"heterogeneous": base, "constant_theta": other}, out / "fig5_nn_shapes.json")
            print("constant-theta NN curves written to fig5_nn_shapes.json (informational)")
    print(rp.format_checks(f"reproduce {target} (n_final={params.n_final}, seed={params.seed})", checks))
    tio.write_json({"target": target, "checks": [c.__dict__ for c in checks]}, out / f"reproduce_{target}.json")
    bad = [c.name for c in checks if not c.passed]
    if bad:
        print("ReproductionFailure: " + ", ".join(bad), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [model], [analysis], [io] sections")
    common.add_argument("--seed", type=int)
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--threads", type=int)

    p = argparse.ArgumentParser(prog="triadic-net", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run the growth model, write the event log")
    s.add_argument("--n-final", dest="n_final", type=int)
    s.add_argument("--n0", type=int)

    i = sub.add_parser("ingest", parents=[common], help="convert empirical edge lists to a canonical log")
    i.add_argument("--user-links", dest="user_links")
    i.add_argument("--cross-links", dest="cross_links")
    i.add_argument("--shuffle-ties", action="store_true")

    a = sub.add_parser("analyze", parents=[common], help="run measurements on a canonical log")
    a.add_argument("--input")
    a.add_argument("--measure", action="append",
                   help="pa:X:Y, growth:K, degree:K, pcc:A:B, nn, exposure, shared, triadic:social|cross")
    a.add_argument("--t0", help="comma-separated start times")
    a.add_argument("--t1", type=int)
    a.add_argument("--dt", type=int)
    a.add_argument("--segment-policy", dest="segment_policy", choices=("separate", "bridge"))

    r = sub.add_parser("reproduce", parents=[common], help="compare a model run with reference values")
    r.add_argument("target", choices=("table2", "table3", "fig4", "fig5"))
    r.add_argument("--n-final", dest="n_final", type=int)
    r.add_argument("--n0", type=int)
    r.add_argument("--t0")
    r.add_argument("--dt", type=int)
    r.add_argument("--constant-theta", dest="constant_theta", action="store_true",
                   help="also run with a constant threshold")
    return p


_COMMANDS = {"simulate": cmd_simulate, "ingest": cmd_ingest, "analyze": cmd_analyze, "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    level = os.environ.get("TRIADIC_NET_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = read_config(args.config) if args.config else {}
        return _COMMANDS[args.command](args, cfg)
    except InvalidParams as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, MalformedLine) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TriadicNetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
