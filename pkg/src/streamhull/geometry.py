"""Exact planar geometry on rational points.

Coordinates are ``int`` or ``fractions.Fraction``; integral values are always
stored as ``int`` so that integer inputs stay on the fast path. Slopes are
``Fraction`` values, with ``NEG_INF``/``POS_INF`` (plain float infinities)
as sentinels. Python orders a ``Fraction`` against ``float('inf')`` exactly,
so sentinel slopes sort and compare with no special casing.
"""

from __future__ import annotations

import enum
import functools
from bisect import bisect_left, bisect_right
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, Fraction]
Slope = Union[Fraction, float]

NEG_INF = float("-inf")
POS_INF = float("inf")


def canonical(value) -> Number:
    """Return ``value`` as an exact rational, an ``int`` when integral."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    if isinstance(value, str):
        value = Fraction(value.strip())
    elif not isinstance(value, Rational):
        raise TypeError(f"unsupported coordinate type {type(value).__name__}")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


class Point(NamedTuple):
    x: Number
    y: Number


def point(x, y) -> Point:
    return Point(canonical(x), canonical(y))


def as_points(items: Iterable) -> list[Point]:
    return [p if isinstance(p, Point) else point(*p) for p in items]


def dedupe(points: Iterable[Point]) -> list[Point]:
    """Drop repeated points, keeping first occurrences in input order."""
    return list(dict.fromkeys(points))


def reflect(p: Point) -> Point:
    """Mirror in the x-axis; the lower hull is the upper hull of the mirror image."""
    return Point(p.x, -p.y)


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


def cross(o: Point, a: Point, b: Point) -> Number:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    c = cross(p, q, r)
    if c > 0:
        return Orientation.COUNTERCLOCKWISE
    if c < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def slope(p: Point, q: Point) -> Slope:
    if p == q:
        raise ValueError("degenerate pair: slope of identical points")
    dx = q.x - p.x
    if dx == 0:
        return POS_INF
    return Fraction(q.y - p.y) / dx


def above_line(a: Point, b: Point, p: Point) -> bool:
    """True when ``p`` lies strictly above the line through ``a`` and ``b`` (x(a) < x(b))."""
    return cross(a, b, p) > 0


def upper_hull_small(points: Iterable[Point]) -> list[Point]:
    """Upper hull from the leftmost to the rightmost point.

    Ties in x keep the highest point; collinear vertices are dropped, so the
    returned chain has strictly increasing x and strictly decreasing edge
    slopes. A one-point input gives a one-vertex chain.
    """
    best: dict[Number, Number] = {}
    for p in points:
        y = best.get(p.x)
        if y is None or p.y > y:
            best[p.x] = p.y
    if not best:
        raise ValueError("upper hull of an empty set")
    chain: list[Point] = []
    for x in sorted(best):
        p = Point(x, best[x])
        while len(chain) >= 2 and cross(chain[-2], chain[-1], p) >= 0:
            chain.pop()
        chain.append(p)
    return chain


def edge_slopes(chain: Sequence[Point]) -> list[Slope]:
    return [slope(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]


def support_range(neg_slopes: Sequence[Slope], sigma: Slope) -> tuple[int, int]:
    """Indices of the leftmost and rightmost chain vertices supporting ``sigma``.

    ``neg_slopes`` are the chain's edge slopes negated (so ascending). Along a
    strictly concave chain the intercept ``y - sigma*x`` rises across every
    edge steeper than ``sigma`` and is flat across an edge equal to it.
    """
    return bisect_left(neg_slopes, -sigma), bisect_right(neg_slopes, -sigma)


def support_key(p: Point, sigma: Slope):
    """Ordering key for 'p supports sigma better': intercept, then y, then x."""
    if sigma == POS_INF:
        return (-p.x, p.y, 0)
    if sigma == NEG_INF:
        return (p.x, p.y, 0)
    return (p.y - sigma * p.x, p.y, p.x)


def support_point(chain: Sequence[Point], sigma: Slope) -> tuple[Point, int]:
    """The chain vertex supporting ``sigma``, preferring the higher point on ties.

    When ``sigma`` equals an edge slope both endpoints have the same
    intercept; the higher one wins, and for a flat edge the right one.
    """
    if not chain:
        raise ValueError("support of an empty chain")
    lo, hi = support_range([-s for s in edge_slopes(chain)], sigma)
    if lo == hi:
        return chain[lo], lo
    i = hi if support_key(chain[hi], sigma) > support_key(chain[lo], sigma) else lo
    return chain[i], i


def better_support(p: Point | None, q: Point, sigma: Slope) -> Point:
    if p is None or support_key(q, sigma) > support_key(p, sigma):
        return q
    return p


def brute_support(points: Iterable[Point], sigma: Slope) -> Point:
    return max(points, key=lambda p: support_key(p, sigma))


def leftmost(points: Iterable[Point]) -> Point:
    return min(points, key=lambda p: (p.x, -p.y))


def rightmost(points: Iterable[Point]) -> Point:
    return max(points, key=lambda p: (p.x, p.y))


def stitch(upper: Sequence[Point], lower: Sequence[Point]) -> list[Point]:
    """Join an upper and a lower chain (both left to right) into a clockwise hull.

    The result starts at the leftmost point (highest on ties). Shared
    endpoints are emitted once.
    """
    hull = list(upper)
    tail = list(reversed(lower))
    if tail and tail[0] == hull[-1]:
        tail.pop(0)
    if tail and tail[-1] == hull[0]:
        tail.pop()
    return hull + tail


def oracle_hull(points: Iterable[Point]) -> list[Point]:
    """Reference convex hull by Andrew's monotone chain.

    Written independently of :func:`upper_hull_small` so the two can check
    each other. Returns extreme points clockwise from the leftmost point.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("hull of an empty set")
    if len(pts) == 1:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)  # counterclockwise from lexicographic min to max
    upper = half(reversed(pts))  # counterclockwise from max back to min
    ccw = lower[:-1] + upper[:-1]
    if len(ccw) == 1:
        return ccw
    start = min(range(len(ccw)), key=lambda i: (ccw[i].x, -ccw[i].y))
    cw = ccw[start::-1] + ccw[:start:-1]
    return cw


def is_extreme(p: Point, others: Sequence[Point]) -> bool:
    """Quadratic-time extremeness test used to validate the oracle.

    ``p`` is extreme iff some line through it leaves every other point
    strictly on one side, i.e. the directions to the others have an angular
    gap wider than a half turn.
    """
    vecs = [(q.x - p.x, q.y - p.y) for q in others if q != p]
    if not vecs:
        return True

    def by_angle(u, v):
        hu = u[1] > 0 or (u[1] == 0 and u[0] > 0)
        hv = v[1] > 0 or (v[1] == 0 and v[0] > 0)
        if hu != hv:
            return -1 if hu else 1
        c = u[0] * v[1] - u[1] * v[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    vecs.sort(key=functools.cmp_to_key(by_angle))
    u0 = vecs[0]
    if all(u[0] * u0[1] == u[1] * u0[0] and u[0] * u0[0] + u[1] * u0[1] > 0 for u in vecs):
        return True
    for i, u in enumerate(vecs):
        w = vecs[(i + 1) % len(vecs)]
        if u[0] * w[1] - u[1] * w[0] < 0:
            return True
    return False
