"""Seeded instance generation, solve pipelines and the benchmark harness."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .construct import MergeOrder, layer_merge, nearest_neighbor
from .exact import HELD_KARP_CAP, CapExceeded, held_karp
from .geometry import ConvexLayers, Point, convex_layers_naive
from .hull_graph import convex_layers_fast
from .improve import ImproveConfig, three_opt, two_opt
from .tsp_core import Instance, Tour

MASK64 = (1 << 64) - 1
ZERO_SEED_STATE = 0x9E3779B97F4A7C15
_MULTIPLIER = 2685821657736338717


class Rng:
    """xorshift64* generator; the exact recurrence is part of the file format
    of generated instances, so do not change it."""

    def __init__(self, seed: int):
        seed &= MASK64
        self.state = seed if seed else ZERO_SEED_STATE

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * _MULTIPLIER) & MASK64

    def next_unit(self) -> float:
        """u / 2**64, a float in [0, 1]."""
        return self.next_u64() / 2**64


def gen_random(n: int, seed: int, scale: float = 1000.0) -> Instance:
    """n distinct points uniform in [0, scale)^2; x then y per point."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = Rng(seed)
    seen = set()
    points: List[Point] = []
    while len(points) < n:
        x = rng.next_unit() * scale
        y = rng.next_unit() * scale
        if (x, y) in seen:
            continue
        seen.add((x, y))
        points.append(Point(len(points), x, y))
    return Instance(name=f"random-n{n}-s{seed}", points=points)


def gen_circle(n: int, seed: int, scale: float = 1000.0) -> Instance:
    """n points at random angles on the circle inscribed in [0, scale)^2
    (80% of the half-width), i.e. in convex position."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = Rng(seed)
    c = scale / 2
    r = 0.4 * scale
    seen = set()
    points: List[Point] = []
    while len(points) < n:
        theta = 2 * math.pi * rng.next_unit()
        x, y = c + r * math.cos(theta), c + r * math.sin(theta)
        if (x, y) in seen:
            continue
        seen.add((x, y))
        points.append(Point(len(points), x, y))
    return Instance(name=f"circle-n{n}-s{seed}", points=points)


# -- pipelines ------------------------------------------------------------

CONSTRUCTS = ("layers", "nn")
IMPROVES = ("none", "2opt", "3opt")


@dataclass(frozen=True)
class Pipeline:
    """A construction followed by an optional local search.

    Written as ``construct[:order][+improve][+each]``, e.g. ``nn+2opt`` or
    ``layers:inner+3opt+each``.
    """

    construct: str = "layers"
    improve: str = "none"
    order: MergeOrder = MergeOrder.OUTERMOST_FIRST
    improve_each_merge: bool = False

    def __post_init__(self):
        if self.construct not in CONSTRUCTS:
            raise ValueError(f"unknown construction {self.construct!r}")
        if self.improve not in IMPROVES:
            raise ValueError(f"unknown improvement {self.improve!r}")
        object.__setattr__(self, "order", MergeOrder(self.order))
        if self.improve_each_merge and (self.construct != "layers" or self.improve == "none"):
            raise ValueError("improve-each-merge needs layers and an improvement")

    @classmethod
    def parse(cls, text: str) -> "Pipeline":
        parts = text.strip().split("+")
        head = parts[0]
        construct, _, order = head.partition(":")
        improve = "none"
        each = False
        for tok in parts[1:]:
            if tok == "each":
                each = True
            else:
                improve = tok
        return cls(
            construct=construct,
            improve=improve,
            order=MergeOrder(order) if order else MergeOrder.OUTERMOST_FIRST,
            improve_each_merge=each,
        )

    @property
    def name(self) -> str:
        s = self.construct
        if self.construct == "layers" and self.order is MergeOrder.INNERMOST_FIRST:
            s += ":inner"
        if self.improve != "none":
            s += "+" + self.improve
        if self.improve_each_merge:
            s += "+each"
        return s


def improver(name: str, cfg: Optional[ImproveConfig] = None):
    """Callable ``(tour, inst) -> tour`` for an improvement name, or None."""
    cfg = cfg or ImproveConfig()
    if name == "none":
        return None
    fn = {"2opt": two_opt, "3opt": three_opt}[name]
    return lambda t, inst: fn(t, inst, cfg)


@dataclass
class PipelineRun:
    tour: Tour
    start: Tour
    layers: ConvexLayers


def run_pipeline(
    inst: Instance,
    pipeline: Pipeline,
    start: int = 0,
    layers: Optional[ConvexLayers] = None,
    cfg: Optional[ImproveConfig] = None,
) -> PipelineRun:
    """Construct, then improve.  ``start`` is only used by nearest neighbour."""
    if layers is None:
        layers = convex_layers_fast(inst.points)
    improve = improver(pipeline.improve, cfg)
    if pipeline.construct == "nn":
        built = nearest_neighbor(inst, start)
    else:
        built = layer_merge(inst, layers, pipeline.order,
                            improve if pipeline.improve_each_merge else None)
    tour = improve(built, inst) if improve is not None else built
    return PipelineRun(tour=tour, start=built, layers=layers)


# -- experiments ----------------------------------------------------------

DEFAULT_PIPELINES = ("nn", "nn+2opt", "layers", "layers+3opt")


@dataclass
class BenchConfig:
    n: int
    instances: int
    seed: int = 1
    pipelines: Sequence[str] = DEFAULT_PIPELINES
    gaps: bool = True
    circle: bool = False
    check_fixed_point: bool = True
    timings: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.instances < 1:
            raise ValueError("instances must be at least 1")
        self.pipelines = [Pipeline.parse(p).name for p in self.pipelines]
        if self.gaps and self.n > HELD_KARP_CAP:
            raise CapExceeded("no exact oracle at this size")

    def echo(self) -> Dict[str, object]:
        # threads and timings do not change results, so they stay out of the echo
        d = asdict(self)
        d.pop("threads")
        d.pop("timings")
        d["pipelines"] = list(self.pipelines)
        return d


@dataclass
class BenchRow:
    seed: int
    pipeline: str
    length: float
    start_length: float
    optimum: Optional[float]
    gap_percent: Optional[float]
    layer_count: int
    fixed_point: Optional[bool]
    time_ms: Optional[float] = None


@dataclass
class BenchReport:
    config: Dict[str, object]
    rows: List[BenchRow]
    aggregates: Dict[str, Dict[str, object]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
            "aggregates": self.aggregates,
        }


def gap_percent(length: float, optimum: float) -> float:
    if optimum == 0:
        return 0.0 if length == 0 else math.inf
    return 100.0 * (length - optimum) / optimum


def aggregate(rows: Sequence[BenchRow]) -> Dict[str, Dict[str, object]]:
    """Per-pipeline summary, recomputable from the rows alone."""
    out: Dict[str, Dict[str, object]] = {}
    for name in sorted({r.pipeline for r in rows}):
        mine = [r for r in rows if r.pipeline == name]
        gaps = [r.gap_percent for r in mine if r.gap_percent is not None]
        out[name] = {
            "count": len(mine),
            "mean_length": math.fsum(r.length for r in mine) / len(mine),
            "mean_gap_percent": math.fsum(gaps) / len(gaps) if gaps else None,
            "max_gap_percent": max(gaps) if gaps else None,
            "optimal_count": sum(1 for g in gaps if g <= 1e-7),
        }
    return out


def _instance(cfg: BenchConfig, seed: int) -> Instance:
    return gen_circle(cfg.n, seed) if cfg.circle else gen_random(cfg.n, seed)


def _run_cell(cfg: BenchConfig, seed: int, name: str, inst: Instance,
              layers: ConvexLayers, optimum: Optional[float]) -> BenchRow:
    pipeline = Pipeline.parse(name)
    t0 = time.perf_counter()
    run = run_pipeline(inst, pipeline, layers=layers)
    elapsed = (time.perf_counter() - t0) * 1000.0
    fixed = None
    if cfg.check_fixed_point and pipeline.improve != "none":
        again = improver(pipeline.improve)(run.tour, inst)
        fixed = again.order == run.tour.order
    return BenchRow(
        seed=seed,
        pipeline=name,
        length=run.tour.length,
        start_length=run.start.length,
        optimum=optimum,
        gap_percent=gap_percent(run.tour.length, optimum) if optimum is not None else None,
        layer_count=len(layers),
        fixed_point=fixed,
        time_ms=elapsed if cfg.timings else None,
    )


def run_experiment(cfg: BenchConfig) -> BenchReport:
    """Every pipeline on every seed; rows come out in (seed, pipeline) order."""
    seeds = [cfg.seed + k for k in range(cfg.instances)]

    def prepare(seed: int) -> Tuple[int, Instance, ConvexLayers, Optional[float]]:
        inst = _instance(cfg, seed)
        layers = convex_layers_fast(inst.points)
        optimum = held_karp(inst).length if cfg.gaps else None
        return seed, inst, layers, optimum

    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        prepared = list(pool.map(prepare, seeds))
        jobs = [(seed, name, inst, layers, opt)
                for seed, inst, layers, opt in prepared for name in cfg.pipelines]
        rows = list(pool.map(lambda j: _run_cell(cfg, *j), jobs))
    rows.sort(key=lambda r: (r.seed, r.pipeline))
    return BenchReport(config=cfg.echo(), rows=rows, aggregates=aggregate(rows))


def layers_for(inst: Instance, algo: str = "hullgraph") -> ConvexLayers:
    if algo == "naive":
        return convex_layers_naive(inst.points)
    if algo == "hullgraph":
        return convex_layers_fast(inst.points)
    raise ValueError(f"unknown layers algorithm {algo!r}")
