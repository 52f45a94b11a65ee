"""Constant-pass streaming hull over a read-only tape.

The recursion of :mod:`streamhull.ram` is run breadth first with
``r = ceil(n**delta)``. Each depth costs two passes over the original tape:

* pass A routes every point down the memoised splits to its depth-``d``
  subproblem and feeds that subproblem's quantile summary with the edge
  slopes of its groups (approximate quantile slopes);
* pass B routes again and finds, for each subproblem, the support of every
  approximate quantile slope and of the anchor slope (suitable extreme
  points). The resulting splits create the next depth.

Routing keeps one buffer of ``r + 1`` points per internal node, so a child
sees exactly the groups the offline recursion would have formed. The upper
and the lower (mirrored) recursions share every pass.

Before a depth is started, if ``live * r * ceil(log2 n) > n`` the remaining
subproblems are gathered in one pass and finished in memory.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .geometry import NEG_INF, POS_INF, Point, as_points, dedupe, edge_slopes, leftmost, reflect, rightmost, slope, stitch, upper_hull_small
from .metrics import RunMetrics, Stopwatch
from .quantiles import QuantileSummary
from .ram import EmptySubproblem, RecursionTrace, Split, Subproblem, SupportFold, _Solver, cutoff, nearest_rank, plan_split
from .tape import POINT, ResultStream, SpaceMeter, Tape

UPPER, LOWER = "U", "L"


@dataclass(frozen=True)
class StreamRunConfig:
    delta: Fraction = Fraction(1, 3)
    epsilon0: Fraction = Fraction(1, 2)
    space_fallback: bool = True
    budget: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "epsilon0", Fraction(self.epsilon0))
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < self.epsilon0 < 1:
            raise ValueError("epsilon0 must lie in (0, 1)")


def stream_r(n: int, delta) -> int:
    """``ceil(n ** delta)`` computed exactly for rational ``delta``."""
    d = Fraction(delta)
    p, q = d.numerator, d.denominator
    target = n ** p
    r = max(1, round(n ** float(d)))
    while r ** q < target:
        r += 1
    while r > 1 and (r - 1) ** q >= target:
        r -= 1
    return r


@dataclass
class _Node:
    id: int
    chain: str
    depth: int
    left: Point | None = None
    right: Point | None = None
    window: tuple = (POS_INF, NEG_INF)
    parent: "_Node | None" = None
    split: Split | None = None
    children: list = field(default_factory=list)
    sigmas: list | None = None
    output: list | None = None  # interior vertices once resolved
    record: Subproblem | None = None

    @property
    def resolved(self) -> bool:
        return self.output is not None or self.split is not None


class _Router:
    """Push points down the memoised splits; deliver arrivals at ``target`` depth."""

    def __init__(self, roots: dict, target: int, r: int, deliver: Callable, meter: SpaceMeter) -> None:
        self.roots = roots
        self.target = target
        self.size = r + 1
        self.deliver = deliver
        self.meter = meter
        self.buffers: dict[int, list[Point]] = {}
        self.internal: list[_Node] = []

    def feed(self, p: Point) -> None:
        self.push(self.roots[UPPER], p)
        self.push(self.roots[LOWER], reflect(p))

    def push(self, node: _Node, p: Point) -> None:
        if node.depth == self.target:
            if node.output is None and node.split is None:
                self.deliver(node, p)
            return
        if node.split is None:
            return
        buf = self.buffers.get(node.id)
        if buf is None:
            buf = self.buffers[node.id] = []
            self.internal.append(node)
        buf.append(p)
        self.meter.charge(1, "routing")
        if len(buf) == self.size:
            self._flush(node, buf)

    def _flush(self, node: _Node, buf: list[Point]) -> None:
        group = buf[:]
        buf.clear()
        self.meter.release(len(group))
        for w, v in node.split.route(group):
            self.push(node.children[w], v)

    def finish(self) -> None:
        # parents before children, so flushed survivors are flushed again below
        for node in sorted(self.internal, key=lambda n: n.depth):
            buf = self.buffers[node.id]
            if buf:
                self._flush(node, buf)


class _QuantileState:
    """Approximate quantile slopes of one subproblem's stream (one pass)."""

    def __init__(self, r: int, epsilon, keep: int, meter: SpaceMeter) -> None:
        self.r = r
        self.gk = QuantileSummary(epsilon)
        self.group: list[Point] = []
        self.kept: list[Point] = []
        self.keep = keep
        self.size = 0
        self.q = 0
        self.meter = meter
        self.lo: Point | None = None
        self.hi: Point | None = None

    def feed(self, p: Point) -> None:
        self.size += 1
        if self.lo is None or (p.x, -p.y) < (self.lo.x, -self.lo.y):
            self.lo = p
        if self.hi is None or (p.x, p.y) > (self.hi.x, self.hi.y):
            self.hi = p
        if len(self.kept) <= self.keep:
            self.kept.append(p)
            self.meter.charge(1, "quantile slopes")
        self.group.append(p)
        self.meter.charge(1, "quantile slopes")
        if len(self.group) == self.r + 1:
            self._flush()

    def _flush(self) -> None:
        chain = upper_hull_small(self.group)
        self.meter.release(len(self.group))
        self.group = []
        before = len(self.gk)
        for s in edge_slopes(chain):
            self.gk.insert(s)
            self.q += 1
        self.meter.charge(len(self.gk) - before, "quantile slopes")

    def finish(self) -> None:
        if self.group:
            self._flush()

    def sigmas(self) -> list:
        if self.q == 0:
            return []
        return [self.gk.query(nearest_rank(k, self.q, self.r + 1)) for k in range(1, self.r + 1)]

    def release(self) -> None:
        self.meter.release(len(self.kept) + len(self.gk))


def approx_quantile_slopes(points: Iterable[Point], r: int, epsilon0=Fraction(1, 2)) -> list:
    """One-pass approximate ``(r+1)``-quantiles of the group-hull edge slopes, ascending."""
    st = _QuantileState(r, Fraction(epsilon0) / (r + 1), 0, SpaceMeter())
    for p in points:
        st.feed(p)
    st.finish()
    return sorted(st.sigmas())


class _SupportState:
    def __init__(self, r: int, sigmas: list, seeds, meter: SpaceMeter) -> None:
        self.size = r + 1
        self.fold = SupportFold(sigmas, seeds)
        self.group: list[Point] = []
        self.meter = meter
        meter.charge(len(sigmas), "suitable extreme points")

    def feed(self, p: Point) -> None:
        self.group.append(p)
        self.meter.charge(1, "suitable extreme points")
        if len(self.group) == self.size:
            self._flush()

    def _flush(self) -> None:
        self.fold.add_chain(upper_hull_small(self.group))
        self.meter.release(len(self.group))
        self.group = []

    def finish(self) -> list:
        if self.group:
            self._flush()
        out = self.fold.result()
        self.meter.release(len(out))
        return out


def suitable_extreme_points_stream(points: Iterable[Point], sigmas, r: int) -> list[Point]:
    """One-pass supports of ``sigmas`` using groups of ``r + 1`` and the slope merge."""
    st = _SupportState(r, list(sigmas), (), SpaceMeter())
    for p in points:
        st.feed(p)
    return st.finish()


class StreamingHull:
    """One metered run of the streaming algorithm; see :func:`run_streaming`."""

    def __init__(self, tape: Tape, config: StreamRunConfig, trace: RecursionTrace | None = None) -> None:
        self.tape = tape
        self.config = config
        self.n = len(tape)
        if self.n == 0:
            raise ValueError("hull of an empty tape")
        self.r = stream_r(self.n, config.delta)
        self.eps = config.epsilon0 / (self.r + 1)
        self.cut = cutoff(self.r)
        self.meter = SpaceMeter(config.budget)
        self.trace = trace if trace is not None else RecursionTrace()
        self.trace.r = self.r
        self.ids = itertools.count()
        self.roots = {c: _Node(next(self.ids), c, 0) for c in (UPPER, LOWER)}
        self.depth_passes: list[int] = []
        self.fallback_depth: int | None = None

    # -- passes ---------------------------------------------------------

    def _scan(self, router: _Router) -> None:
        with self.tape.begin_pass() as reader:
            for rec in reader:
                if rec.tag == POINT:
                    router.feed(rec.payload)
        router.finish()

    def generate_depth_inputs(self, depth: int) -> dict[int, list[Point]]:
        """One pass delivering every live depth-``depth`` subproblem its input."""
        out: dict[int, list[Point]] = {}

        def collect(node, p):
            out.setdefault(node.id, []).append(p)
            self.meter.charge(1, "generate inputs")

        self._scan(_Router(self.roots, depth, self.r, collect, self.meter))
        return out

    def _register(self, node: _Node, size: int) -> None:
        rec = Subproblem(node.id, node.depth, node.left, node.right, node.window, size,
                         node.parent.id if node.parent else None)
        node.record = self.trace.add(rec)
        if node.parent is not None and size:
            node.parent.record.child_sizes.append(size)
            node.parent.record.children.append(node.id)

    def _pass_quantiles(self, live: list[_Node], depth: int) -> list[_Node]:
        states = {n.id: _QuantileState(self.r, self.eps, self.cut, self.meter) for n in live}
        for _ in live:
            self.meter.charge(1, "descriptor")
        self._scan(_Router(self.roots, depth, self.r, lambda node, p: states[node.id].feed(p), self.meter))
        busy = []
        for node in live:
            st = states[node.id]
            st.finish()
            if node.depth == 0 and st.size:
                node.left, node.right = st.lo, st.hi
            if st.size == 0:
                node.output = []  # empty window: never materialised
                st.release()
                continue
            self._register(node, st.size)
            if st.size <= self.cut:
                node.record.leaf = True
                if node.depth == 0:
                    chain = upper_hull_small(st.kept)
                    node.output = chain[1:-1]
                else:
                    node.output = upper_hull_small([node.left, *st.kept, node.right])[1:-1]
                self.meter.charge(len(node.output), "output")
            else:
                node.sigmas = sorted(st.sigmas(), reverse=True)
                self.meter.charge(len(node.sigmas), "memo")
                busy.append(node)
            st.release()
        for _ in live:
            self.meter.release(1)
        return busy

    def _pass_supports(self, busy: list[_Node], depth: int) -> list[_Node]:
        states = {}
        for node in busy:
            sig = node.sigmas + [slope(node.left, node.right)]
            states[node.id] = _SupportState(self.r, sig, (node.left, node.right), self.meter)
        self._scan(_Router(self.roots, depth, self.r, lambda node, p: states[node.id].feed(p), self.meter))
        children = []
        for node in busy:
            best = states[node.id].finish()
            self.meter.release(len(node.sigmas))
            try:
                split = plan_split(node.left, node.right, list(zip(node.sigmas, best[:-1])), best[-1])
            except EmptySubproblem:
                node.output = []
                node.sigmas = None
                continue
            node.split = split
            node.sigmas = None
            self.meter.charge(len(split.anchors) + len(split.windows), "memo")
            for w, win in enumerate(split.windows):
                child = _Node(next(self.ids), node.chain, depth + 1, split.anchors[w], split.anchors[w + 1], win, node)
                node.children.append(child)
                children.append(child)
        return children

    def _fallback(self, live: list[_Node], depth: int) -> None:
        self.fallback_depth = depth
        streams = self.generate_depth_inputs(depth)
        solver = _Solver(self.r, self.trace, self.ids)
        for node in live:
            pts = streams.get(node.id, [])
            if node.depth == 0:
                node.left, node.right = leftmost(pts), rightmost(pts)
                if node.left == node.right:
                    node.output = []
                    continue
            rec_parent = node.parent.record if node.parent else None
            start = len(self.trace.nodes)
            node.output = solver.solve(node.left, node.right, pts, depth, node.window,
                                       rec_parent.id if rec_parent else None) if pts else []
            if pts and rec_parent is not None:
                rec_parent.child_sizes.append(len(pts))
                rec_parent.children.append(self.trace.nodes[start].id)
            self.meter.charge(len(node.output), "output")
        self.meter.release(sum(len(v) for v in streams.values()))

    def _needs_fallback(self, live: int) -> bool:
        return self.config.space_fallback and live * self.r * math.ceil(math.log2(max(self.n, 2))) > self.n

    # -- driver ---------------------------------------------------------

    def run(self) -> tuple[list[Point], list[Point]]:
        live = list(self.roots.values())
        depth = 0
        while live:
            before = self.tape.pass_count
            if self._needs_fallback(len(live)):
                self._fallback(live, depth)
                self.depth_passes.append(self.tape.pass_count - before)
                break
            busy = self._pass_quantiles(live, depth)
            if busy:
                live = self._pass_supports(busy, depth)
            else:
                live = []
            self.depth_passes.append(self.tape.pass_count - before)
            depth += 1
        return self._chain(self.roots[UPPER]), [reflect(p) for p in self._chain(self.roots[LOWER])]

    def _chain(self, root: _Node) -> list[Point]:
        if root.left is None:
            return []
        if root.left == root.right:
            return [root.left]
        return [root.left, *self._interior(root), root.right]

    def _interior(self, node: _Node) -> list[Point]:
        if node.output is not None:
            return node.output
        out: list[Point] = []
        for w, child in enumerate(node.children):
            if w > 0:
                out.append(node.split.anchors[w])
            out.extend(self._interior(child))
        return out


def run_streaming(tape: Tape, config: StreamRunConfig = StreamRunConfig(),
                  result: ResultStream | None = None,
                  trace: RecursionTrace | None = None) -> tuple[list[Point], RunMetrics]:
    """Exact convex hull (clockwise from the leftmost point) of a read-only tape."""
    clock = Stopwatch()
    start_passes = tape.pass_count
    run = StreamingHull(tape, config, trace)
    upper, lower = run.run()
    hull = stitch(upper, lower)
    if result is not None:
        result.extend(hull)
    metrics = RunMetrics(
        algorithm="stream",
        n=run.n,
        h=len(hull),
        passes=tape.pass_count - start_passes,
        peak_space=run.meter.peak,
        wall_time_ms=clock.ms(),
        params={"delta": config.delta, "epsilon0": config.epsilon0, "r": run.r,
                "passes_per_depth": run.depth_passes, "fallback_depth": run.fallback_depth,
                "subproblems": len(run.trace.nodes)},
    )
    return hull, metrics


def stream_convex_hull(points: Iterable, delta=Fraction(1, 3), **kwargs) -> list[Point]:
    pts = dedupe(as_points(points))
    hull, _ = run_streaming(Tape.of_points(pts), StreamRunConfig(delta=delta, **kwargs))
    return hull
