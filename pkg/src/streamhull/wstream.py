"""Hull in the W-stream model: a writable tape and ``O(s)`` working space.

The recursion uses ``r = 1``. Pending subproblems live on the tape as
parameter records, and every point record carries the id of the subproblem
it currently belongs to. Subproblems are processed in FIFO batches
(subrounds) of ``k`` at a time, two passes per subround:

* pass Y: points still tagged with a just-split parent are routed through
  the parent's split (carried in each child's parameter record) and
  re-tagged for every child. Batch members collect their median slope:
  a GK summary (deterministic) or a reservoir-sampled edge slope
  (randomized).
* pass X: batch members find the supports of the median slope and of the
  anchor slope. While scanning, the parameter records of the next batch are
  taken off the tape. At the end of the pass the new children are written
  back and every newly found hull vertex is written as a vertex record.

A final series of passes reads the vertex records and streams the hull out
in clockwise order, at most ``s`` vertices per pass.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .geometry import NEG_INF, POS_INF, Point, as_points, dedupe, edge_slopes, reflect, slope, upper_hull_small
from .metrics import RunMetrics, Stopwatch
from .quantiles import QuantileSummary
from .ram import EmptySubproblem, RecursionTrace, Subproblem, SupportFold, nearest_rank, plan_split
from .ram import split_degenerate_guard  # noqa: F401  (re-exported)
from .tape import PARAM, POINT, ResultStream, SpaceMeter, SubproblemParams, Tape, TapeRecord

DETERMINISTIC, RANDOMIZED = "deterministic", "randomized"
VERTEX_UPPER, VERTEX_LOWER = -1, -2
LEAF_SIZE = 2  # r + 1 with r = 1

# Units reserved per batch member. The deterministic figure is multiplied by
# ceil(log2 n). Both were measured against the metered peak (see tests).
DET_COST = 2
RAND_COST = 8

GK_EPSILON = Fraction(1, 4)  # epsilon0 / (r + 1) with r = 1


@dataclass(frozen=True)
class WStreamConfig:
    space: int
    mode: str = DETERMINISTIC
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in (DETERMINISTIC, RANDOMIZED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == RANDOMIZED and self.seed is None:
            raise ValueError("the randomized algorithm needs an explicit seed")
        if self.space < 1:
            raise ValueError("space must be positive")

    def per_subproblem_cost(self, n: int) -> int:
        if self.mode == DETERMINISTIC:
            return DET_COST * max(1, math.ceil(math.log2(max(n, 2))))
        return RAND_COST

    def batch_size(self, n: int) -> int:
        k = self.space // self.per_subproblem_cost(n)
        if k < 1:
            raise ValueError(f"space {self.space} is below the per-subproblem cost "
                             f"{self.per_subproblem_cost(n)} for n={n}")
        return k


class _Member:
    """Working state of one batch member across its two passes."""

    __slots__ = ("params", "group", "size", "gk", "q", "pick", "sigma", "fold", "leaf", "record")

    def __init__(self, params: SubproblemParams) -> None:
        self.params = params
        self.group: list[Point] = []
        self.size = 0
        self.gk: QuantileSummary | None = None
        self.q = 0
        self.pick = None
        self.sigma = None
        self.fold: SupportFold | None = None
        self.leaf: list[Point] | None = None
        self.record: Subproblem | None = None


class WStreamHull:
    """One metered run; see :func:`run_wstream_det` and :func:`run_wstream_rand`."""

    def __init__(self, tape: Tape, config: WStreamConfig, trace: RecursionTrace | None = None) -> None:
        if not tape.writable:
            raise ValueError("the W-stream algorithms need a writable tape")
        self.tape = tape
        self.config = config
        self.n = len(tape)
        if self.n == 0:
            raise ValueError("hull of an empty tape")
        self.k = config.batch_size(self.n)
        self.meter = SpaceMeter(config.space)
        self.rng = random.Random(config.seed) if config.mode == RANDOMIZED else None
        self.trace = trace
        self._records: dict[int, Subproblem] = {}
        self.next_id = 2
        self.subproblems = 0
        self.subrounds = 0
        self.work_peak = 0

    # -- helpers --------------------------------------------------------

    def _charge(self, units: int, phase: str) -> None:
        self.meter.charge(units, phase)

    def _release(self, units: int) -> None:
        self.meter.release(units)

    def _vertex(self, chain: str, p: Point) -> TapeRecord:
        if chain == "U":
            return TapeRecord(POINT, VERTEX_UPPER, p)
        return TapeRecord(POINT, VERTEX_LOWER, reflect(p))

    # -- setup pass -----------------------------------------------------

    def _setup(self) -> list[SubproblemParams]:
        """Tag every point for both roots and find the roots' anchors."""
        lo: dict = {"U": None, "L": None}
        hi: dict = {"U": None, "L": None}
        upper_ends: set[Point] = set()
        self._charge(4, "setup")
        with self.tape.begin_pass() as pas:
            emit = pas.emit
            for rec in pas:
                if rec.tag != POINT:
                    continue
                p = rec.payload
                for chain, sid, q in (("U", 0, p), ("L", 1, reflect(p))):
                    emit(TapeRecord(POINT, sid, q))
                    a, b = lo[chain], hi[chain]
                    if a is None or (q.x, -q.y) < (a.x, -a.y):
                        lo[chain] = q
                    if b is None or (q.x, q.y) > (b.x, b.y):
                        hi[chain] = q
            roots = []
            for sid, chain in ((0, "U"), (1, "L")):
                a, b = lo[chain], hi[chain]
                # a lower endpoint that is also an upper endpoint is written once
                for v in ([a] if a == b else [a, b]):
                    if chain == "U":
                        upper_ends.add(v)
                        emit(self._vertex(chain, v))
                    elif reflect(v) not in upper_ends:
                        emit(self._vertex(chain, v))
                if a != b:
                    roots.append(SubproblemParams(sid, 0, a, b, (POS_INF, NEG_INF), chain))
            batch = roots[:self.k]
            for d in roots[self.k:]:
                emit(TapeRecord(PARAM, d.id, d))
        self._release(4)
        self._charge(len(batch), "descriptors")
        return batch

    # -- pass Y ---------------------------------------------------------

    def _pass_median(self, batch: list[SubproblemParams], dead: set[int]) -> dict[int, _Member]:
        members = {d.id: _Member(d) for d in batch}
        parents: dict[int, SubproblemParams] = {}
        for d in batch:
            if d.routing is not None and d.parent not in parents:
                parents[d.parent] = d
        pbuf: dict[int, list[Point]] = {pid: [] for pid in parents}
        det = self.config.mode == DETERMINISTIC
        for m in members.values():
            if det:
                m.gk = QuantileSummary(GK_EPSILON)

        def feed(m: _Member, p: Point) -> None:
            m.size += 1
            if len(m.group) == LEAF_SIZE:
                self._median_group(m, det)
            m.group.append(p)
            self._charge(1, "median slope")

        def route(pid: int, buf: list[Point], emit) -> None:
            d = parents[pid]
            survivors = d.routing.route(buf)
            self._release(len(buf))
            buf.clear()
            for w, v in survivors:
                cid = d.first_sibling + w
                emit(TapeRecord(POINT, cid, v))
                m = members.get(cid)
                if m is not None:
                    feed(m, v)

        with self.tape.begin_pass() as pas:
            emit = pas.emit
            for rec in pas:
                sid = rec.subproblem_id
                if rec.tag == PARAM:
                    emit(rec)
                    continue
                m = members.get(sid)
                if m is not None:
                    feed(m, rec.payload)
                    emit(rec)
                elif sid in pbuf:
                    buf = pbuf[sid]
                    buf.append(rec.payload)
                    self._charge(1, "routing")
                    if len(buf) == LEAF_SIZE:
                        route(sid, buf, emit)
                elif sid in dead:
                    continue
                else:
                    emit(rec)
            for pid, buf in pbuf.items():
                if buf:
                    route(pid, buf, emit)
        self._release(len(dead))
        dead.clear()

        for m in members.values():
            self.subproblems += 1
            self._register(m)
            d = m.params
            if m.size <= LEAF_SIZE:
                pts = m.group
                if d.depth == 0:
                    chain = upper_hull_small(pts)
                    m.leaf = chain[1:-1]
                else:
                    m.leaf = upper_hull_small([d.left, *pts, d.right])[1:-1] if pts else []
                self._release(len(pts))
                m.group = []
                self._charge(len(m.leaf), "leaf output")
                continue
            if m.group:
                self._median_group(m, det)
            if det:
                m.sigma = m.gk.query(nearest_rank(1, m.q, 2)) if m.q else None
                self._release(len(m.gk))
                m.gk = None
            else:
                m.sigma = m.pick
                if m.pick is not None:
                    self._release(1)
            self._charge(1, "median slope")
        return members

    def _median_group(self, m: _Member, det: bool) -> None:
        chain = upper_hull_small(m.group)
        self._release(len(m.group))
        m.group = []
        slopes = edge_slopes(chain)
        if det:
            before = len(m.gk)
            for s in slopes:
                m.gk.insert(s)
            m.q += len(slopes)
            self._charge(len(m.gk) - before, "median slope")
        else:
            for s in slopes:
                m.q += 1
                if self.rng.randrange(m.q) == 0:
                    if m.pick is None:
                        self._charge(1, "median slope")
                    m.pick = s

    def _register(self, m: _Member) -> None:
        if self.trace is None:
            return
        d = m.params
        rec = Subproblem(d.id, d.depth, d.left, d.right, d.window, m.size, d.parent if d.parent >= 0 else None)
        m.record = rec
        if m.size:
            self.trace.add(rec)
            self._records[d.id] = rec
            parent = self._records.get(d.parent)
            if parent is not None:
                parent.child_sizes.append(m.size)
                parent.children.append(d.id)
            if m.size <= LEAF_SIZE:
                rec.leaf = True

    # -- pass X ---------------------------------------------------------

    def _pass_supports(self, members: dict[int, _Member], dead: set[int]) -> list[SubproblemParams]:
        busy = {sid: m for sid, m in members.items() if m.leaf is None}
        for m in busy.values():
            d = m.params
            sig = [slope(d.left, d.right)]
            if m.sigma is not None:
                sig.append(m.sigma)
            m.fold = SupportFold(sig, (d.left, d.right))
            self._charge(len(sig), "supports")
        nxt: list[SubproblemParams] = []

        def feed(m: _Member, p: Point) -> None:
            if len(m.group) == LEAF_SIZE:
                m.fold.add_chain(upper_hull_small(m.group))
                self._release(len(m.group))
                m.group = []
            m.group.append(p)
            self._charge(1, "supports")

        with self.tape.begin_pass() as pas:
            emit = pas.emit
            for rec in pas:
                sid = rec.subproblem_id
                if rec.tag == PARAM:
                    if len(nxt) < self.k:
                        nxt.append(rec.payload)
                        self._charge(1, "descriptors")
                    else:
                        emit(rec)
                    continue
                m = busy.get(sid)
                if m is not None:
                    feed(m, rec.payload)
                    emit(rec)
                elif sid in members:
                    continue  # leaf members: their points are finished
                else:
                    emit(rec)

            for m in members.values():
                d = m.params
                if m.leaf is not None:
                    for v in m.leaf:
                        emit(self._vertex(d.chain, v))
                    self._release(len(m.leaf))
                    self._release(1)  # descriptor
                    continue
                if m.group:
                    m.fold.add_chain(upper_hull_small(m.group))
                    self._release(len(m.group))
                    m.group = []
                best = m.fold.result()
                self._release(len(best) + 2)  # supports, median, descriptor
                guard = best[0]
                supports = [(m.sigma, best[1])] if m.sigma is not None else []
                try:
                    split = plan_split(d.left, d.right, supports, guard)
                except EmptySubproblem:
                    dead.add(d.id)
                    self._charge(1, "dead ids")
                    continue
                for v in split.interior:
                    emit(self._vertex(d.chain, v))
                first = self.next_id
                self.next_id += len(split.windows)
                for w, win in enumerate(split.windows):
                    child = SubproblemParams(first + w, d.depth + 1, split.anchors[w], split.anchors[w + 1],
                                             win, d.chain, d.id, first, split)
                    self._charge(1, "descriptors")
                    if len(nxt) < self.k:
                        nxt.append(child)
                    else:
                        emit(TapeRecord(PARAM, child.id, child))
                        self._release(1)
        return nxt

    # -- output ---------------------------------------------------------

    def _output(self, result: ResultStream | None) -> list[Point]:
        """Stream the vertex records out in clockwise order, ``m`` per pass."""
        m = max(1, self.config.space - self.meter.current - 1)
        self._charge(1, "output cursor")
        last = None
        hull: list[Point] = []
        while True:
            heap: list = []  # max-heap of the m smallest keys beyond ``last``
            with self.tape.begin_pass() as pas:
                emit = pas.emit
                for rec in pas:
                    emit(rec)
                    sid = rec.subproblem_id
                    if rec.tag != POINT or sid >= 0:
                        continue
                    p = rec.payload
                    key = (0, p.x) if sid == VERTEX_UPPER else (1, -p.x)
                    if last is not None and key <= last:
                        continue
                    item = (-key[0], -key[1], p)
                    if len(heap) < m:
                        heapq.heappush(heap, item)
                        self._charge(1, "output")
                    elif item > heap[0]:
                        heapq.heapreplace(heap, item)
            if not heap:
                break
            chunk = sorted(heap, reverse=True)
            for _, _, p in chunk:
                hull.append(p)
                if result is not None:
                    result.write(p)
            self._release(len(heap))
            last = (-chunk[-1][0], -chunk[-1][1])
            if len(heap) < m:
                break
        self._release(1)
        return hull

    # -- driver ---------------------------------------------------------

    def run(self, result: ResultStream | None = None) -> list[Point]:
        batch = self._setup()
        dead: set[int] = set()
        while batch:
            self.subrounds += 1
            members = self._pass_median(batch, dead)
            batch = self._pass_supports(members, dead)
        self.work_peak = self.meter.peak  # the output phase then fills the budget
        return self._output(result)


def _run(tape: Tape, config: WStreamConfig, result, trace, name: str) -> tuple[list[Point], RunMetrics]:
    clock = Stopwatch()
    start = tape.pass_count
    run = WStreamHull(tape, config, trace)
    hull = run.run(result)
    metrics = RunMetrics(
        algorithm=name,
        n=run.n,
        h=len(hull),
        passes=tape.pass_count - start,
        peak_space=run.meter.peak,
        wall_time_ms=clock.ms(),
        params={"space": config.space, "batch": run.k, "subrounds": run.subrounds,
                "subproblems": run.subproblems, "work_peak": run.work_peak,
                **({"seed": config.seed} if config.mode == RANDOMIZED else {})},
    )
    return hull, metrics


def run_wstream_det(tape: Tape, config: WStreamConfig, result: ResultStream | None = None,
                    trace: RecursionTrace | None = None) -> tuple[list[Point], RunMetrics]:
    """Deterministic W-stream hull: GK median slopes, batches of ``s / (c1 log n)``."""
    if config.mode != DETERMINISTIC:
        raise ValueError("expected a deterministic configuration")
    return _run(tape, config, result, trace, "wstream-det")


def run_wstream_rand(tape: Tape, config: WStreamConfig, result: ResultStream | None = None,
                     trace: RecursionTrace | None = None) -> tuple[list[Point], RunMetrics]:
    """Randomized W-stream hull: a uniformly random edge slope per subproblem."""
    if config.mode != RANDOMIZED:
        raise ValueError("expected a randomized configuration")
    return _run(tape, config, result, trace, "wstream-rand")


def wstream_convex_hull(points: Iterable, space: int, mode: str = DETERMINISTIC, seed: int | None = None) -> list[Point]:
    pts = dedupe(as_points(points))
    hull, _ = _run(Tape.of_points(pts, writable=True), WStreamConfig(space, mode, seed), None, None, mode)
    return hull
