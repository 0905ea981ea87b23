"""Growth process: one new node per step, attached by pulling power.

Model A attaches the newcomer to the node of maximum pulling power.
Model B finds that node and then attaches the newcomer to a uniformly
chosen node on the outer boundary of its k-ball. ``model="BA"`` is an
alias for Model B with ``k=0`` and proportional selection, which is
Barabási-Albert preferential attachment.

Randomness comes from one ``numpy.random.PCG64`` stream per run, seeded
from the config. Draws happen in a fixed order, once per attachment:

1. ``selection_mode="proportional"``: one ``integers(Y)`` draw picks the
   centre (``integers(count)`` over the candidates when all powers are 0).
2. Model B: one ``integers(len(candidates))`` draw picks the boundary node
   (or the fallback node).

A choice between a single candidate consumes no draw. Model A in argmax
mode never touches the generator.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .cuts import PullingPowerTable, apply_edge_incremental, boundary_nodes, recompute_all
from .graph import Graph, load_edge_list

RNG_VERSION = "numpy-pcg64/evocut-draws-v1"
MODELS = ("A", "B")
SELECTION_MODES = ("argmax", "proportional")
INITIAL_KINDS = ("complete", "ring", "star", "file")


class ConfigError(ValueError):
    pass


class InvalidSpec(ConfigError):
    pass


@dataclass(frozen=True)
class InitialGraphSpec:
    kind: str = "complete"
    n0: int | None = 3
    path: str | None = None

    def validate(self) -> None:
        if self.kind not in INITIAL_KINDS:
            raise InvalidSpec(f"unknown initial graph kind {self.kind!r}")
        if self.kind == "file":
            if not self.path:
                raise InvalidSpec("initial.kind='file' requires initial.path")
            if self.n0 is not None and self.n0 < 1:
                raise InvalidSpec("initial.n0 must be >= 1")
            return
        if self.n0 is None or self.n0 < 1:
            raise InvalidSpec("initial.n0 must be >= 1")
        if self.kind == "ring" and self.n0 < 3:
            raise InvalidSpec(f"a ring needs at least 3 nodes, got n0={self.n0}")


def init_graph(spec: InitialGraphSpec) -> Graph:
    spec.validate()
    n0 = spec.n0
    if spec.kind == "complete":
        return Graph.from_edges(n0, ((u, v) for u in range(n0) for v in range(u + 1, n0)))
    if spec.kind == "ring":
        return Graph.from_edges(n0, ((i, (i + 1) % n0) for i in range(n0)))
    if spec.kind == "star":
        return Graph.from_edges(n0, ((0, i) for i in range(1, n0)))
    g, _ = load_edge_list(Path(spec.path).read_text(encoding="utf-8"))
    if n0 is not None and g.n != n0:
        raise InvalidSpec(f"{spec.path}: edge list has {g.n} nodes, config says n0={n0}")
    return g


@dataclass(frozen=True)
class EvolutionConfig:
    initial: InitialGraphSpec = field(default_factory=InitialGraphSpec)
    k: int = 1
    N: int = 100
    model: str = "A"
    selection_mode: str = "argmax"
    edges_per_arrival: int = 1
    seed: int = 0
    record_trace: bool = True

    def __post_init__(self):
        if self.model == "BA":
            # alias: k and selection_mode are fixed by the model
            object.__setattr__(self, "model", "B")
            object.__setattr__(self, "k", 0)
            object.__setattr__(self, "selection_mode", "proportional")
        self.validate()

    def validate(self) -> None:
        self.initial.validate()
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of A, B, BA; got {self.model!r}")
        if self.selection_mode not in SELECTION_MODES:
            raise ConfigError(f"selection_mode must be argmax or proportional; got {self.selection_mode!r}")
        for name in ("k", "N", "edges_per_arrival", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{name} must be an integer; got {value!r}")
        if self.k < 0:
            raise ConfigError("k must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.edges_per_arrival < 1:
            raise ConfigError("edges_per_arrival must be >= 1")
        n0 = self.initial.n0
        if n0 is not None:
            if self.N < n0:
                raise ConfigError(f"N={self.N} is smaller than the initial graph (n0={n0})")
            if self.edges_per_arrival > n0:
                raise ConfigError(f"edges_per_arrival={self.edges_per_arrival} exceeds n0={n0}")

    def replace(self, **changes) -> "EvolutionConfig":
        data = asdict(self)
        data.update(changes)
        data["initial"] = InitialGraphSpec(**data["initial"]) if isinstance(data["initial"], dict) else data["initial"]
        return EvolutionConfig(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path | None = None) -> "EvolutionConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"initial", "k", "N", "model", "selection_mode", "edges_per_arrival", "seed", "record_trace"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        init = data.get("initial", {})
        if not isinstance(init, dict):
            raise ConfigError("'initial' must be an object")
        bad = set(init) - {"kind", "n0", "path"}
        if bad:
            raise ConfigError(f"unknown initial keys: {sorted(bad)}")
        path = init.get("path")
        if path is not None and base_dir is not None and not Path(path).is_absolute():
            path = str(Path(base_dir) / path)
        spec = InitialGraphSpec(kind=init.get("kind", "complete"), n0=init.get("n0", None if init.get("kind") == "file" else 3), path=path)
        kwargs = {key: data[key] for key in known - {"initial"} if key in data}
        if kwargs.get("model") == "BA" and (kwargs.get("k", 0) != 0 or kwargs.get("selection_mode", "proportional") != "proportional"):
            raise ConfigError("model 'BA' implies k=0 and selection_mode='proportional'")
        try:
            return cls(initial=spec, **kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "EvolutionConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data, base_dir=path.parent)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# ---------------------------------------------------------------------------
# target selection

def select_target_A(table: PullingPowerTable) -> int:
    """Node of maximum pulling power, smallest id on ties."""
    if len(table) == 0:
        raise ValueError("empty table")
    return int(np.argmax(table.power))


def _uniform(rng: np.random.Generator, candidates: list[int]) -> int:
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


def _proportional(weights: np.ndarray, rng: np.random.Generator, exclude: Iterable[int] = ()) -> int:
    w = weights
    excluded = sorted(set(exclude))
    if excluded:
        w = weights.copy()
        w[excluded] = 0
    total = int(w.sum())
    if total == 0:
        skip = set(excluded)
        return _uniform(rng, [v for v in range(len(w)) if v not in skip])
    r = int(rng.integers(total))
    return int(np.searchsorted(np.cumsum(w), r, side="right"))


def select_target_proportional(table: PullingPowerTable, rng: np.random.Generator) -> int:
    """Sample ``v`` with probability ``x_v / Y``; uniform when ``Y == 0``."""
    if len(table) == 0:
        raise ValueError("empty table")
    return _proportional(table.power, rng)


def select_target_B(table: PullingPowerTable, g: Graph, k: int, rng: np.random.Generator) -> int:
    """Uniform node on the boundary of the strongest node's k-ball.

    Falls back to a uniform node of the whole graph when that ball has no
    boundary (it covers its entire component).
    """
    center = select_target_A(table)
    candidates = boundary_nodes(g, center, k)
    if not candidates:
        candidates = list(range(len(table)))
    return _uniform(rng, candidates)


def choose_targets(g: Graph, table: PullingPowerTable, config: EvolutionConfig, rng: np.random.Generator) -> list[int]:
    """Distinct attachment targets for one arrival, in attachment order."""
    m = config.edges_per_arrival
    power = table.power
    chosen: list[int] = []
    if config.model == "A" and config.selection_mode == "argmax":
        order = np.lexsort((np.arange(len(power)), -power))
        return [int(v) for v in order[:m]]
    for _ in range(m):
        if config.model == "A":
            chosen.append(_proportional(power, rng, exclude=chosen))
            continue
        if config.selection_mode == "argmax":
            center = int(np.argmax(power))
        else:
            center = _proportional(power, rng)
        taken = set(chosen)
        candidates = [u for u in boundary_nodes(g, center, config.k) if u not in taken]
        if not candidates:
            candidates = [u for u in range(len(power)) if u not in taken]
        chosen.append(_uniform(rng, candidates))
    return chosen


# ---------------------------------------------------------------------------
# running

@dataclass(frozen=True)
class StepRecord:
    t: int
    new_node: int
    targets: tuple[int, ...]
    checksum: int | None = None


@dataclass
class RunTrace:
    config: EvolutionConfig
    records: list[StepRecord]
    graph: Graph
    m0: int
    n0: int
    rng_version: str = RNG_VERSION

    def header(self) -> str:
        return f"# evocut-trace config_hash={self.config.config_hash()} rng={self.rng_version}\n"

    def to_csv(self) -> str:
        lines = [self.header(), "t,new_node,target\n"]
        for rec in self.records:
            lines.extend(f"{rec.t},{rec.new_node},{target}\n" for target in rec.targets)
        return "".join(lines)


def step(g: Graph, table: PullingPowerTable, config: EvolutionConfig, rng: np.random.Generator, t: int) -> tuple[Graph, PullingPowerTable, list[int]]:
    """Add one arriving node to ``g`` in place.

    Returns the graph, the updated table, and the chosen targets. A no-op
    (empty target list) once ``g`` has ``config.N`` nodes.
    """
    if g.n >= config.N:
        return g, table, []
    targets = choose_targets(g, table, config, rng)
    new = g.add_node()
    for target in targets:
        g.add_edge(new, target)
        table = apply_edge_incremental(table, g, (new, target))
    return g, table, targets


def run(config: EvolutionConfig, on_step: Callable[[int, Graph, PullingPowerTable], None] | None = None) -> RunTrace:
    """Grow the initial graph to ``config.N`` nodes.

    ``on_step(t, graph, table)`` is called after every arrival; tests use it
    to compare the incremental table against a full rebuild.
    """
    g = init_graph(config.initial)
    if config.N < g.n:
        raise ConfigError(f"N={config.N} is smaller than the initial graph (n0={g.n})")
    if config.edges_per_arrival > g.n:
        raise ConfigError(f"edges_per_arrival={config.edges_per_arrival} exceeds n0={g.n}")
    n0, m0 = g.n, g.m
    rng = make_rng(config.seed)
    table = recompute_all(g, config.k)
    records = []
    t = 0
    while g.n < config.N:
        g, table, targets = step(g, table, config, rng, t)
        checksum = table.checksum() if config.record_trace else None
        records.append(StepRecord(t, g.n - 1, tuple(targets), checksum))
        if on_step is not None:
            on_step(t, g, table)
        t += 1
    return RunTrace(config, records, g, m0=m0, n0=n0)


def parse_trace(text: str) -> tuple[dict[str, str], list[tuple[int, int, int]]]:
    """Split a trace CSV into its header fields and ``(t, new_node, target)`` rows."""
    header: dict[str, str] = {}
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    key, value = tok.split("=", 1)
                    header[key] = value
            continue
        if not line or line.startswith("t,"):
            continue
        try:
            t, new, target = (int(x) for x in line.split(","))
        except ValueError:
            raise ConfigError(f"trace line {lineno}: malformed row {line!r}") from None
        rows.append((t, new, target))
    return header, rows


def replay(config: EvolutionConfig, rows: Iterable[tuple[int, int, int]]) -> Graph:
    """Rebuild the final graph from the initial graph and trace rows."""
    g = init_graph(config.initial)
    for _, new, target in rows:
        while g.n <= new:
            g.add_node()
        g.add_edge(new, target)
    return g
