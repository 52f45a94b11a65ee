"""Rotating calipers over replayable hull streams: diameter and minimum rectangle.

A :class:`HullSource` delivers the clockwise hull (starting at the leftmost
point) as a stream that can be replayed; each replay is one refill. Cursors
hold a window of ``ceil(s/2)`` consecutive vertices and ask for a replay when
they run past it, so the caliper itself stays within ``O(s)`` space.

All quantities are exact: the diameter is reported squared, areas and
rectangle corners are rationals. Directions are compared with dot and cross
products only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .geometry import Point, canonical, cross, point
from .metrics import RunMetrics
from .tape import ResultStream


class HullSource:
    """Replayable clockwise hull stream."""

    def __init__(self) -> None:
        self.replays = 0
        self.passes = 0
        self.size: int | None = None

    def _replay(self, consume: Callable[[int, Point], None]) -> int:
        raise NotImplementedError

    def scan(self, consume: Callable[[int, Point], None]) -> int:
        self.replays += 1
        self.size = self._replay(consume)
        return self.size

    def read(self, start: int, count: int) -> list[Point]:
        """Vertices at cyclic positions ``start .. start+count-1``."""
        if self.size is None:
            raise RuntimeError("hull size unknown; scan the source first")
        h = self.size
        want = {(start + j) % h: j for j in range(min(count, h))}
        out: list = [None] * len(want)

        def keep(pos: int, p: Point) -> None:
            j = want.get(pos)
            if j is not None:
                out[j] = p

        self.scan(keep)
        if count > h:
            out = [out[j % h] for j in range(count)]
        return out


class ListHullSource(HullSource):
    """Replays a hull that is already known (tests and small inputs)."""

    def __init__(self, hull: Sequence[Point]) -> None:
        super().__init__()
        self._hull = list(hull)

    def _replay(self, consume) -> int:
        for i, p in enumerate(self._hull):
            consume(i, p)
        return len(self._hull)


class ReplayHullSource(HullSource):
    """Re-runs a hull algorithm for every replay and counts its passes."""

    def __init__(self, run: Callable[[ResultStream], RunMetrics]) -> None:
        super().__init__()
        self._run = run

    def _replay(self, consume) -> int:
        stream = ResultStream()
        count = [0]

        def on_point(p: Point) -> None:
            consume(count[0], p)
            count[0] += 1

        stream.attach(on_point)
        metrics = self._run(stream)
        self.passes += metrics.passes
        return count[0]


class CaliperCursor:
    """Walks consecutive hull positions through a window of at most ``window`` vertices.

    The current vertex is kept as a private copy, so looking one vertex ahead
    may start a fresh window without losing it.
    """

    def __init__(self, source: HullSource, start: int, window: int) -> None:
        self.source = source
        self.window = max(1, window)
        self.pos = start
        self.refills = 0
        self._base = start
        self._buf: list[Point] = []
        self._cur: Point | None = None

    def _get(self, pos: int) -> Point:
        off = pos - self._base
        if not 0 <= off < len(self._buf):
            self._buf = self.source.read(pos, self.window)
            self._base = pos
            self.refills += 1
            off = 0
        return self._buf[off]

    @property
    def current(self) -> Point:
        if self._cur is None:
            self._cur = self._get(self.pos)
        return self._cur

    def peek(self) -> Point:
        self.current
        return self._get(self.pos + 1)

    def advance(self) -> None:
        self.current
        self.pos += 1
        self._cur = None


def _sq(p: Point, q: Point):
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def _locate_extremes(source: HullSource) -> tuple[int, int, int]:
    """One replay: hull size and positions of the lexicographic min and max."""
    best = {"lo": None, "hi": None}

    def see(i: int, p: Point) -> None:
        lo, hi = best["lo"], best["hi"]
        if lo is None or p < lo[1]:
            best["lo"] = (i, p)
        if hi is None or p > hi[1]:
            best["hi"] = (i, p)

    h = source.scan(see)
    if h == 0:
        raise ValueError("diameter of an empty hull")
    return h, best["lo"][0], best["hi"][0]


@dataclass
class DiameterResult:
    squared: Fraction | int
    witness: tuple[Point, Point]
    refills: tuple[int, int]
    replays: int
    passes: int


def diameter(source: HullSource, s: int) -> DiameterResult:
    """Exact squared diameter by antipodal pairs of the two monotone chains.

    The upper cursor walks clockwise from the lexicographic minimum to the
    maximum, the lower cursor from the maximum back to the minimum.
    """
    if s < 2:
        raise ValueError("space must be at least 2")
    h, lo, hi = _locate_extremes(source)
    if h == 1:
        p = source.read(0, 1)[0]
        return DiameterResult(0, (p, p), (1, 0), source.replays, source.passes)
    w = math.ceil(s / 2)
    up_len = (hi - lo) % h + 1
    low_len = (lo - hi) % h + 1
    U = CaliperCursor(source, lo, w)
    L = CaliperCursor(source, hi, w)
    i, j = 0, 0  # steps taken along each chain
    best = None
    while True:
        u, v = U.current, L.current
        d = _sq(u, v)
        if best is None or d > best[0]:
            best = (d, (u, v))
        if i == up_len - 1 and j == low_len - 1:
            break
        if i == up_len - 1:
            L.advance(); j += 1
            continue
        if j == low_len - 1:
            U.advance(); i += 1
            continue
        un, ln = U.peek(), L.peek()
        # advance the chain whose next edge turns first
        du = (un.x - u.x, un.y - u.y)
        dl = (ln.x - v.x, ln.y - v.y)
        if du[0] * dl[1] - du[1] * dl[0] > 0:
            U.advance(); i += 1
        else:
            L.advance(); j += 1
    return DiameterResult(canonical(best[0]), best[1], (U.refills, L.refills), source.replays, source.passes)


@dataclass
class RectangleResult:
    area: Fraction | int
    corners: tuple[Point, Point, Point, Point]
    edge: tuple[Point, Point]
    refills: tuple[int, ...]
    replays: int
    passes: int


def _dot(p: Point, d) -> Fraction | int:
    return p.x * d[0] + p.y * d[1]


def _rect(u: Point, v: Point, tmin, tmax, height) -> tuple:
    d = (v.x - u.x, v.y - u.y)
    nn = d[0] * d[0] + d[1] * d[1]
    base = _dot(u, d)
    nr = (d[1], -d[0])  # points into a clockwise polygon

    def on_edge(t):
        f = Fraction(t - base, nn)
        return (u.x + f * d[0], u.y + f * d[1])

    a, b = on_edge(tmin), on_edge(tmax)
    g = Fraction(height, nn)
    off = (g * nr[0], g * nr[1])
    corners = (point(*a), point(*b), point(b[0] + off[0], b[1] + off[1]), point(a[0] + off[0], a[1] + off[1]))
    return canonical(Fraction((tmax - tmin) * height, nn)), corners


def min_enclosing_rectangle(source: HullSource, s: int) -> RectangleResult:
    """Minimum-area enclosing rectangle with one side on a hull edge.

    Four cursors walk the clockwise hull: the edge cursor, and the vertices
    extreme forward along the edge, backward along it, and farthest from
    its line. All four only move forward. A seek replay positions them for
    the first edge.
    """
    if s < 2:
        raise ValueError("space must be at least 2")
    seek: dict = {}

    def first_two(i, p):
        if i < 2:
            seek[i] = p

    h = source.scan(first_two)
    if h == 0:
        raise ValueError("rectangle of an empty hull")
    if h <= 2:
        pts = [seek[i] for i in range(h)]
        a, b = pts[0], pts[-1]
        return RectangleResult(0, (a, b, b, a), (a, b), (0,), source.replays, source.passes)

    v0, v1 = seek[0], seek[1]
    d0 = (v1.x - v0.x, v1.y - v0.y)
    init = {"max": (0, None), "min": (0, None), "far": (0, None)}

    def locate(i, p):
        t = _dot(p, d0)
        c = cross(v0, v1, p)
        if init["max"][1] is None or t > init["max"][1]:
            init["max"] = (i, t)
        if init["min"][1] is None or t < init["min"][1]:
            init["min"] = (i, t)
        if init["far"][1] is None or c < init["far"][1]:
            init["far"] = (i, c)

    source.scan(locate)
    w = math.ceil(s / 2)
    E = CaliperCursor(source, 0, w)
    A = CaliperCursor(source, init["max"][0], w)
    B = CaliperCursor(source, init["min"][0], w)
    C = CaliperCursor(source, init["far"][0], w)

    best = None
    for _ in range(h):
        u, v = E.current, E.peek()
        d = (v.x - u.x, v.y - u.y)
        while _dot(A.peek(), d) > _dot(A.current, d):
            A.advance()
        while _dot(B.peek(), d) < _dot(B.current, d):
            B.advance()
        while cross(u, v, C.peek()) < cross(u, v, C.current):
            C.advance()
        tmax, tmin = _dot(A.current, d), _dot(B.current, d)
        height = -cross(u, v, C.current)
        area, corners = _rect(u, v, tmin, tmax, height)
        if best is None or area < best[0]:
            best = (area, corners, (u, v))
        E.advance()
    return RectangleResult(best[0], best[1], best[2], (E.refills, A.refills, B.refills, C.refills),
                           source.replays, source.passes)


def brute_diameter_sq(points: Sequence[Point]):
    pts = list(points)
    return max((_sq(p, q) for i, p in enumerate(pts) for q in pts[i:]), default=0)


def brute_min_rectangle_area(hull: Sequence[Point]):
    """Edge-aligned enumeration over a clockwise hull (quadratic)."""
    h = len(hull)
    if h <= 2:
        return 0
    best = None
    for i in range(h):
        u, v = hull[i], hull[(i + 1) % h]
        d = (v.x - u.x, v.y - u.y)
        ts = [_dot(p, d) for p in hull]
        height = max(-cross(u, v, p) for p in hull)
        area = Fraction((max(ts) - min(ts)) * height, d[0] ** 2 + d[1] ** 2)
        best = area if best is None else min(best, area)
    return canonical(best)
