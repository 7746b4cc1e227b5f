"""Command-line entry point: ``compactroute {gen,ingest,eval,sweep,compare}``.

Every command accepts ``--config FILE`` (flat ``key = value`` lines, '#'
comments); explicit flags override file values and the fully resolved
configuration is written next to the outputs, so a run can be repeated with
``--config <out>/config.txt``.

Exit codes: 0 success, 1 usage/config, 2 input or parse error, 3 internal
assertion (stretch bound violated, forwarding loop).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .evaluation import (
    REINSERTION_COLUMNS,
    STRETCH_COLUMNS,
    TABLE_COLUMNS,
    StretchBoundError,
    SweepError,
    compare,
    default_builders,
    derive_seed,
    evaluate,
    stretch_row,
    summary_from_dict,
    sweep,
    table_row,
    to_csv,
    to_json,
)
from .graph import GraphError, ccdf_slope, stats
from .schemes import KINDS, RoutingLoopError
from .topology import GenConfig, AsRelParseError, asrel_to_graph, generate, parse_asrel, read_edgelist, write_edgelist

EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 1, 2, 3

# key -> (type, default); None default means "required or optional per command"
PARAMS = {
    "seed": (int, 0),
    "pair_budget": (int, 100_000),
    "workers": (int, 1),
    "model": (str, "preferential"),
    "n": (int, None),
    "m_attach": (int, 2),
    "gamma": (float, 2.5),
    "scheme": (str, "tz"),
    "s": (int, None),
    "cap": (float, 4.0),
    "alpha": (float, 1 / 3),
    "k": (int, None),
    "sizes": (str, None),
    "schemes": (str, "trivial,tz"),
    "graph": (str, None),
    "asrel": (str, None),
    "out": (str, None),
    "stats_pair_budget": (int, 1_000_000),
}
COMMAND_KEYS = {
    "gen": ("seed", "model", "n", "m_attach", "gamma", "out"),
    "ingest": ("seed", "asrel", "out", "stats_pair_budget", "workers"),
    "eval": ("seed", "graph", "scheme", "s", "cap", "alpha", "k", "pair_budget", "workers", "out"),
    "sweep": ("seed", "model", "sizes", "schemes", "m_attach", "gamma", "s", "cap", "alpha", "k",
              "pair_budget", "workers", "out"),
    "compare": ("out",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path: str | Path) -> dict[str, str]:
    out = {}
    for no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key != "command" and key not in PARAMS:
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        out[key] = value
    return out


def write_config(path: Path, command: str, cfg: dict) -> None:
    lines = [f"command = {command}"]
    for key in sorted(cfg):
        if cfg[key] is not None:
            lines.append(f"{key} = {cfg[key]}")
    path.write_text("\n".join(lines) + "\n")


def resolve(command: str, args: argparse.Namespace) -> dict:
    file_cfg = read_config(args.config) if args.config else {}
    if file_cfg.get("command", command) != command:
        raise UsageError(f"config is for command {file_cfg['command']!r}, not {command!r}")
    cfg = {}
    for key in COMMAND_KEYS[command]:
        typ, default = PARAMS[key]
        value = getattr(args, key, None)
        if value is None and key in file_cfg:
            value = file_cfg[key]
        if value is None:
            value = default
        if value is not None:
            try:
                value = typ(value)
            except ValueError:
                raise UsageError(f"bad value for {key}: {value!r}") from None
        cfg[key] = value
    return cfg


def _need(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


# ----------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    cfg = resolve("gen", args)
    _need(cfg, "n")
    gc = GenConfig(n=cfg["n"], model=cfg["model"], m_attach=cfg["m_attach"], gamma=cfg["gamma"],
                   seed=derive_seed(cfg["seed"], "graph"))
    try:
        gc.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = generate(gc)
    out = Path(cfg["out"] or f"{cfg['model']}-n{cfg['n']}-s{cfg['seed']}.edges")
    write_edgelist(g, out, header=f"model={gc.model} n={g.n} m={g.m} seed={cfg['seed']}")
    write_config(out.with_name(out.name + ".config.txt"), "gen", {**cfg, "out": str(out)})
    _say(args, f"n = {g.n}\nm = {g.m}\nccdf_slope = {ccdf_slope(g):.4f}\nwrote {out}")
    return 0


def cmd_ingest(args) -> int:
    cfg = resolve("ingest", args)
    _need(cfg, "asrel")
    with open(cfg["asrel"]) as fh:
        records = parse_asrel(fh)
    g = asrel_to_graph(records)
    out = Path(cfg["out"] or Path(cfg["asrel"]).with_suffix(".edges").name)
    write_edgelist(g, out, header=f"source={Path(cfg['asrel']).name} records={len(records)} "
                                  f"n={g.n} m={g.m}")
    st = stats(g, cfg["stats_pair_budget"], derive_seed(cfg["seed"], "stats"), cfg["workers"])
    body = {"source": Path(cfg["asrel"]).name, "records": len(records),
            "graph_fingerprint": g.fingerprint(), **st.as_dict()}
    out.with_name(out.name + ".stats.json").write_text(to_json(body))
    write_config(out.with_name(out.name + ".config.txt"), "ingest", {**cfg, "out": str(out)})
    _say(args, "\n".join([
        f"records = {len(records)}",
        f"n = {st.n}",
        f"m = {st.m}",
        f"avg_degree = {st.avg_degree:.4f}",
        f"max_degree = {st.max_degree}",
        f"avg_distance = {st.avg_distance:.4f}",
        f"pct_2_to_4 = {st.pct_2_to_4:.4f}",
        f"clustering = {st.clustering:.4f}",
        f"mode = {st.mode} ({st.pair_count} pairs)",
        f"wrote {out}",
    ]))
    return 0


def _builders(cfg: dict):
    return default_builders(s=cfg.get("s"), cap=cfg.get("cap", 4.0), alpha=cfg.get("alpha", 1 / 3),
                            k=cfg.get("k"))


def cmd_eval(args) -> int:
    cfg = resolve("eval", args)
    _need(cfg, "graph")
    if cfg["scheme"] not in KINDS:
        raise UsageError(f"unknown scheme {cfg['scheme']!r}; choose from {', '.join(KINDS)}")
    g = read_edgelist(cfg["graph"])
    if not g.is_connected():
        raise GraphError(f"{cfg['graph']}: graph is disconnected")
    out = Path(cfg["out"] or f"eval-{cfg['scheme']}")
    out.mkdir(parents=True, exist_ok=True)
    art = _builders(cfg)[cfg["scheme"]](g, derive_seed(cfg["seed"], "build", cfg["scheme"]))
    s = evaluate(art, g, cfg["pair_budget"], derive_seed(cfg["seed"], "pairs"), cfg["workers"])
    (out / "stretch.csv").write_text(to_csv([stretch_row(s.stretch)], STRETCH_COLUMNS))
    (out / "stretch.json").write_text(to_json(s.stretch.as_dict()))
    (out / "tables.csv").write_text(to_csv([table_row(s)], TABLE_COLUMNS))
    (out / "tables.json").write_text(to_json(table_row(s)))
    (out / "reinsertion.csv").write_text(to_csv([s.reinsertion.as_dict()], REINSERTION_COLUMNS))
    (out / "reinsertion.json").write_text(to_json(s.reinsertion.as_dict()))
    (out / "summary.json").write_text(to_json(s.as_dict()))
    write_config(out / "config.txt", "eval", {**cfg, "out": str(out)})
    _say(args, "\n".join([
        f"scheme = {s.scheme}",
        f"graph = {s.graph_fingerprint}",
        f"avg_table = {s.avg_table:.4f}",
        f"max_table = {s.max_table}",
        f"avg_stretch = {s.stretch.avg_stretch:.6f}",
        f"max_stretch = {s.stretch.max_stretch:.4f}",
        f"avg_stretch_len1 = {s.stretch.avg_stretch_len1:.6f}",
        f"violating_adjacencies = {s.reinsertion.violating_adjacencies}",
        f"wrote {out}",
    ]))
    return 0


def cmd_sweep(args) -> int:
    cfg = resolve("sweep", args)
    _need(cfg, "sizes")
    try:
        sizes = [int(float(x)) for x in cfg["sizes"].split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad sizes list {cfg['sizes']!r}") from None
    schemes = [x.strip() for x in cfg["schemes"].split(",") if x.strip()]
    if len(sizes) < 3:
        raise UsageError("need >= 3 sizes to fit exponents")
    template = GenConfig(n=sizes[0], model=cfg["model"], m_attach=cfg["m_attach"], gamma=cfg["gamma"])
    out = Path(cfg["out"] or "sweep")
    out.mkdir(parents=True, exist_ok=True)
    try:
        rep = sweep(template, sizes, schemes, cfg["pair_budget"], cfg["seed"], _builders(cfg),
                    cfg["workers"], progress=None if args.quiet else print)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    (out / "sweep.csv").write_text(rep.to_csv())
    (out / "exponents.csv").write_text(rep.exponents_csv())
    (out / "sweep.json").write_text(to_json(rep.as_dict()))
    write_config(out / "config.txt", "sweep", {**cfg, "out": str(out)})
    for kind, e in rep.fitted_exponents.items():
        _say(args, f"{kind}: avg_table_exponent = {e['avg_table_exponent']:.4f} "
                   f"max_table_exponent = {e['max_table_exponent']:.4f}")
    _say(args, f"wrote {out}")
    return 0


def cmd_compare(args) -> int:
    cfg = resolve("compare", args)
    summaries = []
    for item in args.reports:
        p = Path(item)
        if p.is_dir():
            p = p / "summary.json"
        summaries.append(summary_from_dict(json.loads(p.read_text())))
    table = compare(summaries)
    out = Path(cfg["out"] or "compare")
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.csv").write_text(table.to_csv())
    (out / "compare.json").write_text(table.to_json())
    write_config(out / "config.txt", "compare", {**cfg, "out": str(out),
                                                 })
    _say(args, table.to_csv().rstrip())
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--pair-budget", dest="pair_budget", type=int)
    common.add_argument("--workers", type=int, help="threads for pair evaluation (output is identical)")
    common.add_argument("--quiet", action="store_true")

    p = _Parser(prog="compactroute", description="compact routing laboratory")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a synthetic scale-free graph")
    g.add_argument("--model", choices=("preferential", "powerlaw-config"))
    g.add_argument("--n", type=int)
    g.add_argument("--m-attach", dest="m_attach", type=int)
    g.add_argument("--gamma", type=float)
    g.set_defaults(func=cmd_gen)

    i = sub.add_parser("ingest", parents=[common], help="AS-relationship snapshot -> edge list + stats")
    i.add_argument("asrel", nargs="?")
    i.add_argument("--stats-pair-budget", dest="stats_pair_budget", type=int)
    i.set_defaults(func=cmd_ingest)

    e = sub.add_parser("eval", parents=[common], help="build a scheme and measure it")
    e.add_argument("graph", nargs="?")
    e.add_argument("--scheme", choices=KINDS)
    e.add_argument("--s", type=int, help="TZ sampling parameter (default ceil(sqrt(n)))")
    e.add_argument("--cap", type=float, help="TZ cluster cap factor")
    e.add_argument("--alpha", type=float, help="Cowen ball exponent")
    e.add_argument("--k", type=int, help="hierarchical area count (default ceil(sqrt(n)))")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", parents=[common], help="scaling sweep over graph sizes")
    s.add_argument("sweep_config", nargs="?", help="sweep config file (same as --config)")
    s.add_argument("--model", choices=("preferential", "powerlaw-config"))
    s.add_argument("--sizes", help="comma-separated node counts")
    s.add_argument("--schemes", help="comma-separated scheme kinds")
    s.add_argument("--m-attach", dest="m_attach", type=int)
    s.add_argument("--gamma", type=float)
    s.add_argument("--s", type=int)
    s.add_argument("--cap", type=float)
    s.add_argument("--alpha", type=float)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("compare", parents=[common], help="align eval reports from one graph")
    c.add_argument("reports", nargs="+", help="eval output dirs or summary.json files")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sweep_config", None):
        if args.config:
            parser.error("give the sweep config either positionally or via --config")
        args.config = args.sweep_config
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"compactroute {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StretchBoundError, RoutingLoopError) as exc:
        print(f"compactroute {args.command}: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SweepError as exc:
        code = EXIT_INTERNAL if isinstance(exc.__cause__, (StretchBoundError, RoutingLoopError)) else EXIT_INPUT
        print(f"compactroute {args.command}: {exc}", file=sys.stderr)
        return code
    except (GraphError, AsRelParseError, OSError, ValueError) as exc:
        print(f"compactroute {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
