"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input error, 3 size cap exceeded.
Results go to stdout (or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from .bench import (
    BenchConfig,
    DEFAULT_PIPELINES,
    Pipeline,
    gap_percent,
    gen_circle,
    gen_random,
    layers_for,
    run_experiment,
    run_pipeline,
)
from .exact import HELD_KARP_CAP, CapExceeded, brute_force, held_karp
from .formats import (
    InputError,
    dumps_json,
    layers_to_dict,
    parse_instance,
    render_csv,
    write_svg,
)
from .geometry import GeometryError
from .tsp_core import Instance, Tour

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CAP = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def solve_result(inst: Instance, tour: Tour, *, construct: str, improve: str,
                 order: Optional[str], seed: Optional[int], layer_count: int,
                 optimum: Optional[float] = None, wall_time_ms: Optional[float] = None,
                 improve_each_merge: bool = False, start: Optional[int] = None) -> dict:
    return {
        "instance_name": inst.name,
        "pipeline": {
            "construct": construct,
            "improve": improve,
            "order": order,
            "seed": seed,
            "improve_each_merge": improve_each_merge,
            "start": start,
        },
        "tour": list(tour.order),
        "length": tour.length,
        "optimum": optimum,
        "gap_percent": gap_percent(tour.length, optimum) if optimum is not None else None,
        "layer_count": layer_count,
        "wall_time_ms": wall_time_ms,
    }


def _load(path: str) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text, name=Path(path).stem)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    gen = gen_circle if args.circle else gen_random
    _emit(render_csv(gen(args.n, args.seed)), args.out)
    return EXIT_OK


def cmd_layers(args) -> int:
    inst = _load(args.file)
    layers = layers_for(inst, args.algo)
    if args.format == "svg":
        _emit(write_svg(inst, layers=layers), args.out)
    else:
        _emit(dumps_json(layers_to_dict(inst, layers)), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.file)
    if args.improve_each_merge and args.construct != "layers":
        raise UsageError("--improve-each-merge only applies to --construct layers")
    if args.improve_each_merge and args.improve == "none":
        raise UsageError("--improve-each-merge needs --improve 2opt or 3opt")
    if args.start is not None and args.construct != "nn":
        raise UsageError("--start only applies to --construct nn")
    pipeline = Pipeline(construct=args.construct, improve=args.improve,
                        order=args.order, improve_each_merge=args.improve_each_merge)
    start = args.start if args.start is not None else 0
    if not 0 <= start < inst.n:
        raise InputError(f"start id {start} not in 0..{inst.n - 1}")
    t0 = time.perf_counter()
    run = run_pipeline(inst, pipeline, start=start)
    elapsed = (time.perf_counter() - t0) * 1000.0
    optimum = None
    if args.optimum:
        if inst.n > HELD_KARP_CAP:
            raise CapExceeded(f"held-karp capped at {HELD_KARP_CAP}")
        optimum = held_karp(inst).length
    if args.format == "svg":
        _emit(write_svg(inst, layers=run.layers, tour=run.tour), args.out)
        return EXIT_OK
    result = solve_result(
        inst, run.tour,
        construct=pipeline.construct,
        improve=pipeline.improve,
        order=pipeline.order.value if pipeline.construct == "layers" else None,
        seed=None,
        layer_count=len(run.layers),
        optimum=optimum,
        wall_time_ms=elapsed if args.timings else None,
        improve_each_merge=pipeline.improve_each_merge,
        start=start if pipeline.construct == "nn" else None,
    )
    _emit(dumps_json(result), args.out)
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _load(args.file)
    solver = brute_force if args.algo == "brute" else held_karp
    t0 = time.perf_counter()
    tour = solver(inst)
    elapsed = (time.perf_counter() - t0) * 1000.0
    result = solve_result(
        inst, tour,
        construct=args.algo,
        improve="none",
        order=None,
        seed=None,
        layer_count=len(layers_for(inst)),
        optimum=tour.length,
        wall_time_ms=elapsed if args.timings else None,
    )
    _emit(dumps_json(result), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    pipelines = [p.strip() for p in args.pipelines.split(",") if p.strip()]
    try:
        pipelines = [Pipeline.parse(p).name for p in pipelines]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = BenchConfig(
        n=args.n,
        instances=args.instances,
        seed=args.seed,
        pipelines=pipelines,
        gaps=not args.no_gaps,
        circle=args.circle,
        timings=args.timings,
        threads=args.threads,
    )
    report = run_experiment(cfg)
    _emit(dumps_json(report.to_dict()), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="onion-tsp", description="Convex-layer TSP heuristics.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen", help="write a seeded random instance as CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--circle", action="store_true", help="sample points on a circle")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    lay = sub.add_parser("layers", help="compute convex layers")
    lay.add_argument("file")
    lay.add_argument("--algo", choices=["naive", "hullgraph"], default="hullgraph")
    lay.add_argument("--format", choices=["json", "svg"], default="json")
    lay.add_argument("--out")
    lay.set_defaults(func=cmd_layers)

    s = sub.add_parser("solve", help="run a construction and improvement pipeline")
    s.add_argument("file")
    s.add_argument("--construct", choices=["layers", "nn"], required=True)
    s.add_argument("--order", choices=["outer", "inner"], default="outer")
    s.add_argument("--improve", choices=["none", "2opt", "3opt"], default="none")
    s.add_argument("--improve-each-merge", action="store_true")
    s.add_argument("--start", type=int)
    s.add_argument("--optimum", action="store_true", help="also solve exactly (n <= 18) and report the gap")
    s.add_argument("--format", choices=["json", "svg"], default="json")
    s.add_argument("--timings", action="store_true", help="record wall time (output is then not reproducible)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("exact", help="solve exactly")
    e.add_argument("file")
    e.add_argument("--algo", choices=["brute", "held-karp"], required=True)
    e.add_argument("--timings", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bench", help="run pipelines over seeded instances")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--instances", type=int, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--pipelines", default=",".join(DEFAULT_PIPELINES),
                   help="comma-separated, e.g. nn,nn+2opt,layers,layers+3opt")
    b.add_argument("--circle", action="store_true")
    b.add_argument("--no-gaps", action="store_true", help="skip the exact oracle")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--timings", action="store_true")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, GeometryError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
