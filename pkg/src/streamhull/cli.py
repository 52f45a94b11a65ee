"""Command line: ``streamhull {hull,gen,calipers,bench}``.

Exit codes: 0 ok, 2 unparsable input, 3 space budget exceeded, 4 invalid
parameters.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import calipers, instances
from .geometry import Point, as_points, dedupe, oracle_hull
from .io import ParseError, format_number, format_points, read_points, write_points
from .metrics import RunMetrics, Stopwatch
from .ram import ram_convex_hull
from .streaming import StreamRunConfig, run_streaming
from .tape import BudgetExceeded, ResultStream, Tape
from .wstream import DETERMINISTIC, RANDOMIZED, WStreamConfig, run_wstream_det, run_wstream_rand

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_PARAMS = 0, 2, 3, 4
ALGORITHMS = ("oracle", "ram", "stream", "wstream-det", "wstream-rand")
BENCH_HEADER = ["algo", "n", "h", "param", "passes", "peak_space", "time_ms"]


class InvalidParams(ValueError):
    pass


def run_hull(points: Sequence[Point], algo: str, *, r: int = 1, delta=Fraction(1, 3),
             space: int | None = None, seed: int | None = None,
             result: ResultStream | None = None) -> tuple[list[Point], RunMetrics]:
    """Deduplicate ``points`` and run one hull algorithm with metering."""
    pts = dedupe(as_points(points))
    if not pts:
        raise InvalidParams("no input points")
    if algo in ("oracle", "ram"):
        clock = Stopwatch()
        if algo == "oracle":
            hull, params = oracle_hull(pts), {}
        else:
            if r < 1:
                raise InvalidParams("r must be at least 1")
            hull, params = ram_convex_hull(pts, r), {"r": r}
        if result is not None:
            result.extend(hull)
        return hull, RunMetrics(algo, len(pts), len(hull), 1, len(pts), clock.ms(), params)
    try:
        if algo == "stream":
            cfg = StreamRunConfig(delta=Fraction(delta), budget=space)
            return run_streaming(Tape.of_points(pts), cfg, result)
        if algo in ("wstream-det", "wstream-rand"):
            if space is None:
                raise InvalidParams("--space is required for the W-stream algorithms")
            mode = DETERMINISTIC if algo == "wstream-det" else RANDOMIZED
            cfg = WStreamConfig(space, mode, seed)
            tape = Tape.of_points(pts, writable=True)
            run = run_wstream_det if mode == DETERMINISTIC else run_wstream_rand
            return run(tape, cfg, result)
    except BudgetExceeded:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(str(exc)) from exc
    raise InvalidParams(f"unknown algorithm {algo!r}")


def _subset(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidParams(f"bad index list {text!r}") from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit_metrics(args, metrics: RunMetrics) -> None:
    text = metrics.to_json() + "\n"
    if args.metrics:
        Path(args.metrics).write_text(text)
    else:
        sys.stderr.write(text)


def cmd_hull(args) -> int:
    pts = read_points(args.input)
    hull, metrics = run_hull(pts, args.algo, r=args.r, delta=args.delta, space=args.space, seed=args.seed)
    _write(args.output, format_points(hull))
    _emit_metrics(args, metrics)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n is None or args.n < 1:
        raise InvalidParams("--n must be a positive integer")
    sidecar = None
    if args.kind == "random-disk":
        if args.seed is None:
            raise InvalidParams("random-disk needs --seed")
        pts = instances.random_disk(args.n, args.seed)
    else:
        gen = instances.gen_disjointness if args.kind == "disjointness" else instances.gen_four_copy
        try:
            inst = gen(_subset(args.A), _subset(args.B), args.n)
        except ValueError as exc:
            raise InvalidParams(str(exc)) from exc
        pts, sidecar = inst.points, inst
    if args.pad:
        pts = instances.pad_interior(pts, args.pad)
    write_points(args.output, pts)
    if sidecar is not None:
        instances.write_sidecar(str(args.output) + ".json", sidecar)
    return EXIT_OK


def cmd_calipers(args) -> int:
    pts = dedupe(read_points(args.input))
    if not pts:
        raise InvalidParams("no input points")
    clock = Stopwatch()

    def replay(stream: ResultStream) -> RunMetrics:
        return run_hull(pts, args.algo, r=args.r, delta=args.delta, space=args.hull_space, seed=args.seed,
                        result=stream)[1]

    source = calipers.ReplayHullSource(replay)
    if args.task == "diameter":
        res = calipers.diameter(source, args.space)
        text = format_number(res.squared) + "\n" + format_points(res.witness)
        value, refills = res.squared, res.refills
    else:
        rect = calipers.min_enclosing_rectangle(source, args.space)
        text = format_number(rect.area) + "\n" + format_points(rect.corners)
        value, refills = rect.area, rect.refills
    _write(args.output, text)
    metrics = RunMetrics(f"calipers-{args.task}", len(pts), source.size or 0, source.passes,
                         math.ceil(args.space / 2) * (2 if args.task == "diameter" else 4), clock.ms(),
                         {"space": args.space, "hull_algo": args.algo, "replays": source.replays,
                          "refills": list(refills), "value": str(value)})
    _emit_metrics(args, metrics)
    return EXIT_OK


def bench_cells(suite: str):
    """(algo, points, param) cells for a named suite."""
    if suite == "empty":
        return
    if suite in ("stream", "all"):
        for n in (10 ** 3, 10 ** 4, 10 ** 5):
            pts = instances.random_disk(n, seed=n)
            for d in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
                yield "stream", pts, d
    if suite in ("wstream-det", "all"):
        pts = instances.hard_instance(256).points
        for s in (16, 32, 64, 128):
            yield "wstream-det", pts, s
    if suite in ("wstream-rand", "all"):
        pts = instances.hard_instance(256).points
        for s in (8, 16, 32, 64):
            yield "wstream-rand", pts, s
    if suite == "quick":
        pts = instances.random_disk(500, seed=1)
        yield "stream", pts, Fraction(1, 3)
        yield "wstream-det", pts, 64
        yield "wstream-rand", pts, 16
    if suite not in ("stream", "wstream-det", "wstream-rand", "all", "quick"):
        raise InvalidParams(f"unknown suite {suite!r}")


def cmd_bench(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{args.suite}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BENCH_HEADER)
        for algo, pts, param in bench_cells(args.suite):
            if algo == "stream":
                _, m = run_hull(pts, algo, delta=param)
            else:
                _, m = run_hull(pts, algo, space=param, seed=0)
            w.writerow([algo, m.n, m.h, str(param), m.passes, m.peak_space, m.wall_time_ms])
            fh.flush()
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="streamhull", description="Exact planar convex hulls in the RAM, streaming and W-stream models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def algo_opts(q):
        q.add_argument("--algo", choices=ALGORITHMS, default="ram")
        q.add_argument("--r", type=int, default=1, help="split arity for ram")
        q.add_argument("--delta", type=_rational, default=Fraction(1, 3), help="exponent for stream, e.g. 1/3")
        q.add_argument("--seed", type=int, help="required for wstream-rand")
        q.add_argument("--metrics", help="write metrics JSON here instead of stderr")
        q.add_argument("-o", "--output", help="output file (default stdout)")

    h = sub.add_parser("hull", help="compute the hull of a point file")
    h.add_argument("input")
    algo_opts(h)
    h.add_argument("--space", type=int, help="space budget s in point-equivalents")
    h.set_defaults(func=cmd_hull)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("random-disk", "disjointness", "four-copy"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--A")
    g.add_argument("--B")
    g.add_argument("--pad", type=int, help="pad with interior points up to this total")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("calipers", help="diameter or minimum enclosing rectangle")
    c.add_argument("task", choices=("diameter", "mer"))
    c.add_argument("input")
    algo_opts(c)
    c.add_argument("--space", type=int, default=16, help="caliper space s (windows of s/2)")
    c.add_argument("--hull-space", type=int, help="space budget for a W-stream hull source")
    c.set_defaults(func=cmd_calipers)

    b = sub.add_parser("bench", help="metered sweep written as CSV")
    b.add_argument("suite", help="empty, quick, stream, wstream-det, wstream-rand or all")
    b.add_argument("out_dir")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_PARAMS
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(json.dumps({"error": "space budget exceeded", "peak": exc.peak, "budget": exc.budget,
                          "phase": exc.phase}), file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidParams, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
