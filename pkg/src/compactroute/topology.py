"""Internet-like graphs: seeded scale-free generators and AS-relationship ingestion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .graph import Graph, GraphError, from_arrays, from_edges, giant_component

MODELS = ("preferential", "powerlaw-config")


@dataclass(frozen=True)
class GenConfig:
    n: int
    model: str = "preferential"
    m_attach: int = 2
    gamma: float = 2.5
    seed: int = 0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.model == "preferential":
            if self.m_attach < 1:
                raise ValueError("m_attach must be >= 1")
            if self.n < self.m_attach + 1:
                raise ValueError(f"n={self.n} must be >= m_attach + 1 = {self.m_attach + 1}")
        else:
            if not self.gamma > 2:
                raise ValueError(f"gamma must be > 2, got {self.gamma}")
            if self.n < 2:
                raise ValueError("n must be >= 2")


def gen_preferential(cfg: GenConfig) -> Graph:
    """Preferential attachment grown from a complete graph on ``m_attach + 1``
    nodes. Each arrival links to ``m_attach`` distinct existing nodes drawn
    with probability proportional to their current degree (duplicates are
    re-drawn)."""
    cfg.validate()
    if cfg.model != "preferential":
        raise ValueError("gen_preferential needs model='preferential'")
    m0 = cfg.m_attach
    rng = np.random.default_rng(cfg.seed)
    us: list[int] = []
    vs: list[int] = []
    # one entry per edge endpoint, so a uniform pick is degree-proportional
    ends: list[int] = []
    for i in range(m0 + 1):
        for j in range(i + 1, m0 + 1):
            us.append(i)
            vs.append(j)
            ends += (i, j)
    for new in range(m0 + 1, cfg.n):
        chosen: list[int] = []
        size = len(ends)
        while len(chosen) < m0:
            t = ends[int(rng.integers(size))]
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            us.append(new)
            vs.append(t)
            ends += (t, new)
    return from_arrays(cfg.n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


def gen_powerlaw_config(cfg: GenConfig) -> Graph:
    """Configuration model with degrees drawn from P(k) ~ k^-gamma on
    [1, floor(sqrt(n))]. Stubs are paired uniformly; self-loops and repeated
    pairs are discarded and the giant component returned. An odd stub total
    drops the last stub after shuffling."""
    cfg.validate()
    if cfg.model != "powerlaw-config":
        raise ValueError("gen_powerlaw_config needs model='powerlaw-config'")
    rng = np.random.default_rng(cfg.seed)
    kmax = max(1, math.isqrt(cfg.n))
    ks = np.arange(1, kmax + 1)
    p = ks.astype(float) ** -cfg.gamma
    deg = rng.choice(ks, size=cfg.n, p=p / p.sum())
    stubs = np.repeat(np.arange(cfg.n, dtype=np.int64), deg)
    rng.shuffle(stubs)
    if len(stubs) % 2:
        stubs = stubs[:-1]
    pairs = stubs.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    _, first = np.unique(pairs, axis=0, return_index=True)
    pairs = pairs[np.sort(first)]
    g = from_arrays(cfg.n, pairs[:, 0], pairs[:, 1])
    if g.m == 0:
        raise GraphError("configuration model produced no edges")
    return giant_component(g)


def generate(cfg: GenConfig) -> Graph:
    if cfg.model == "preferential":
        return gen_preferential(cfg)
    return gen_powerlaw_config(cfg)


class Relationship(Enum):
    PROVIDER_CUSTOMER = -1
    PEER = 0


@dataclass(frozen=True)
class AsRelRecord:
    as_a: int
    as_b: int
    relationship: Relationship


class AsRelParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_asrel(text: str | Iterable[str] | TextIO) -> list[AsRelRecord]:
    """Parse ``<as1>|<as2>|<code>`` lines (code -1 provider-customer, 0 peer).

    '#' comments and blank lines are skipped. A fourth ``|``-separated source
    field, present in some published snapshots, is accepted and ignored.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    out = []
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("|")
        if len(fields) not in (3, 4):
            raise AsRelParseError(no, f"expected 3 '|'-separated fields, got {len(fields)}")
        try:
            a, b, code = int(fields[0]), int(fields[1]), int(fields[2])
        except ValueError:
            raise AsRelParseError(no, f"non-integer field in {line!r}") from None
        if a < 0 or b < 0:
            raise AsRelParseError(no, f"negative AS number in {line!r}")
        if a == b:
            raise AsRelParseError(no, f"self-relationship for AS {a}")
        try:
            rel = Relationship(code)
        except ValueError:
            raise AsRelParseError(no, f"unknown relationship code {code}") from None
        out.append(AsRelRecord(a, b, rel))
    return out


def serialize_asrel(records: Iterable[AsRelRecord]) -> str:
    return "".join(f"{r.as_a}|{r.as_b}|{r.relationship.value}\n" for r in records)


def asrel_to_graph(records: list[AsRelRecord]) -> Graph:
    """Undirected AS graph (relationship labels dropped, duplicates merged),
    reduced to its giant component. ``labels`` hold the AS numbers."""
    if not records:
        raise GraphError("no AS relationship records")
    seen = set()
    edges = []
    for r in records:
        key = (min(r.as_a, r.as_b), max(r.as_a, r.as_b))
        if key not in seen:
            seen.add(key)
            edges.append((r.as_a, r.as_b))
    return giant_component(from_edges(edges))


def read_edgelist(source: str | Path | TextIO) -> Graph:
    """Whitespace-separated ``u v`` per line, '#' comments. Duplicate edges and
    self-loops are errors naming the line."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            return read_edgelist(fh)
    edges, lines = [], []
    for no, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {no}: expected 2 fields, got {len(parts)}")
        edges.append(parts)
        lines.append(no)
    return from_edges(edges, lines)


def write_edgelist(g: Graph, dest: str | Path | TextIO, header: str | None = None) -> None:
    """One ``u v`` line per edge using original node ids, in dense-id order."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w") as fh:
            write_edgelist(g, fh, header)
        return
    if header:
        for h in header.splitlines():
            dest.write(f"# {h}\n")
    lab = g.labels
    for u, v in g.edges():
        dest.write(f"{lab[u]} {lab[v]}\n")
