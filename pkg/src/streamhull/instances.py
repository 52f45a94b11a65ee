"""Hard instances: two concentric half circles and their four-copy layout.

Outer points ``a_i`` lie exactly on the unit upper half circle, inner points
``b_i = rho * a_i`` on a concentric circle of radius ``rho < 1``. With the
anchors ``(1, 0)`` and ``(-1, 0)`` present, every ``a_i`` in the set is
extreme and ``b_i`` is extreme exactly when ``a_i`` is absent. Hence a set
``{a_i : i in A} + {b_i : i in B}`` has ``|A| + |B| + 2`` extreme points iff
``A`` and ``B`` are disjoint.

Evenly spaced circle points are irrational, so the angles are approximated
by rational tangent half-angles and the separation conditions are then
checked exactly.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Point, cross, oracle_hull, point

ANCHOR_RIGHT = Point(1, 0)
ANCHOR_LEFT = Point(-1, 0)


def _circle_point(t: Fraction, radius) -> Point:
    d = 1 + t * t
    return point(radius * (1 - t * t) / d, radius * 2 * t / d)


def rational_half_circle(m: int, radius=1) -> list[Point]:
    """``m`` rational points exactly on the upper half circle, counterclockwise.

    Point ``i`` approximates angle ``i*pi/(m+1)``; the tangent half-angle is
    rounded to a denominator of at most ``16 (m+1)^2``, which keeps every
    angular gap within a few percent of ``pi/(m+1)``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    limit = 16 * (m + 1) ** 2
    out = []
    for i in range(1, m + 1):
        t = Fraction(math.tan(i * math.pi / (2 * (m + 1)))).limit_denominator(limit)
        out.append(_circle_point(t, radius))
    return out


def _dot(p: Point, q: Point):
    return p.x * q.x + p.y * q.y


def _isqrt_upper(x: Fraction, bits: int = 40) -> Fraction:
    """A rational strictly above ``sqrt(x)``."""
    scale = 1 << bits
    return Fraction(math.isqrt(x.numerator * scale * scale // x.denominator) + 1, scale)


@dataclass(frozen=True)
class Circles:
    """Outer circle points ``a_0..a_{m+1}`` (anchors included) and the inner radius."""

    outer: tuple[Point, ...]
    rho: Fraction
    k_max_sq: Fraction

    def inner(self, i: int) -> Point:
        a = self.outer[i]
        return point(self.rho * a.x, self.rho * a.y)


def build_circles(m: int) -> Circles:
    """Circle points for ``m`` indices plus a verified inner radius.

    ``k_max`` is the largest distance from the origin to a chord
    ``a_i a_{i+2}``. ``rho`` is a short rational near the midpoint of
    ``(max(k_max, max neighbour dot), 1)``; both strict inequalities are
    re-checked exactly.
    """
    outer = (ANCHOR_RIGHT, *rational_half_circle(m), ANCHOR_LEFT)
    # squared distance from O to chord(u, v) for unit vectors is (1 + u.v) / 2
    k_max_sq = max(Fraction(1 + _dot(outer[i], outer[i + 2])) / 2 for i in range(len(outer) - 2))
    near = max(_dot(outer[i], outer[i + 1]) for i in range(len(outer) - 1))
    lower = max(_isqrt_upper(Fraction(k_max_sq)), Fraction(near))
    if not lower < 1:
        raise ArithmeticError("circle points too dense for a rational inner radius")
    mid = (lower + 1) / 2
    rho = mid.limit_denominator(math.ceil(8 / (1 - lower)))
    if not (lower < rho < 1 and rho * rho > k_max_sq):
        rho = mid
    circles = Circles(outer, rho, Fraction(k_max_sq))
    verify_separation(circles)
    return circles


def verify_separation(c: Circles, exhaustive: bool | None = None) -> None:
    """Check ``rho > k_max`` and the tangent separation at every ``b_i`` exactly.

    The tangent at ``b_i`` is ``{z : z . a_i = rho}``. Every other outer
    point must satisfy ``z . a_i < rho``; inner points do automatically.
    Along the circle the dot product falls off with angular distance, so
    checking both neighbours suffices; small instances check all pairs.
    """
    if not (0 < c.rho < 1 and c.rho * c.rho > c.k_max_sq):
        raise ArithmeticError("inner radius does not exceed k_max")
    outer = c.outer
    if exhaustive is None:
        exhaustive = len(outer) <= 66
    for i in range(1, len(outer) - 1):
        others = range(len(outer)) if exhaustive else (i - 1, i + 1)
        for j in others:
            if j != i and not _dot(outer[j], outer[i]) < c.rho:
                raise ArithmeticError(f"tangent at b_{i} does not separate a_{j}")


@dataclass(frozen=True)
class DisjointnessInstance:
    domain_n: int
    A: tuple[int, ...]
    B: tuple[int, ...]
    circles: Circles = field(repr=False)

    @property
    def rho(self) -> Fraction:
        return self.circles.rho

    @property
    def k_max_sq(self) -> Fraction:
        return self.circles.k_max_sq

    def outer_point(self, i: int) -> Point:
        return self.circles.outer[i]

    def inner_point(self, i: int) -> Point:
        return self.circles.inner(i)

    @property
    def points(self) -> list[Point]:
        """``Q_A`` first, then ``Q_B`` and the two anchors."""
        qa = [self.outer_point(i) for i in self.A]
        qb = [self.inner_point(i) for i in self.B]
        return qa + qb + [ANCHOR_RIGHT, ANCHOR_LEFT]

    def sidecar(self) -> dict:
        return {"kind": "disjointness", "domain_n": self.domain_n, "A": list(self.A), "B": list(self.B),
                "rho": str(self.rho), "k_max_sq": str(self.k_max_sq)}


def _check_subset(s: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(sorted(set(s)))
    for i in out:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside [1, {n}]")
    return out


_CIRCLE_CACHE: dict[int, Circles] = {}


def _circles(m: int) -> Circles:
    c = _CIRCLE_CACHE.get(m)
    if c is None:
        c = _CIRCLE_CACHE[m] = build_circles(m)
    return c


def gen_disjointness(A: Iterable[int], B: Iterable[int], domain_n: int) -> DisjointnessInstance:
    if domain_n < 1:
        raise ValueError("domain_n must be at least 1")
    return DisjointnessInstance(domain_n, _check_subset(A, domain_n), _check_subset(B, domain_n), _circles(domain_n))


@dataclass(frozen=True)
class FourCopyInstance:
    domain_n: int
    A: tuple[int, ...]
    B: tuple[int, ...]
    circles: Circles = field(repr=False)

    SECTOR_ANCHORS = 5

    def slot(self, copy: int, i: int) -> int:
        """Global angle index of index ``i`` in copy ``copy`` (0-based)."""
        return copy * (self.domain_n + 1) + i

    def copies(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        full = set(range(1, self.domain_n + 1))
        a, b = set(self.A), set(self.B)
        na, nb = tuple(sorted(full - a)), tuple(sorted(full - b))
        return [(self.A, self.B), (na, self.B), (self.A, nb), (na, nb)]

    @property
    def points(self) -> list[Point]:
        pts: list[Point] = []
        step = self.domain_n + 1
        for c, (sa, sb) in enumerate(self.copies()):
            pts += [self.circles.outer[self.slot(c, i)] for i in sa]
            pts += [self.circles.inner(self.slot(c, i)) for i in sb]
        pts += [self.circles.outer[k * step] for k in range(5)]
        return pts

    def sidecar(self) -> dict:
        return {"kind": "four-copy", "domain_n": self.domain_n, "A": list(self.A), "B": list(self.B),
                "rho": str(self.circles.rho), "k_max_sq": str(self.circles.k_max_sq),
                "sector_anchors": self.SECTOR_ANCHORS}


def gen_four_copy(A: Iterable[int], B: Iterable[int], domain_n: int) -> FourCopyInstance:
    """Four gadgets ``(A,B), (~A,B), (A,~B), (~A,~B)`` on consecutive quarter sectors.

    Every index contributes exactly 3 extreme points across the copies, so
    the extreme count is ``3 * domain_n + 5`` whatever ``A`` and ``B`` are.
    """
    if domain_n < 1:
        raise ValueError("domain_n must be at least 1")
    circles = _circles(4 * (domain_n + 1) - 1)
    return FourCopyInstance(domain_n, _check_subset(A, domain_n), _check_subset(B, domain_n), circles)


def pad_interior(points: Sequence[Point], total_n: int) -> list[Point]:
    """Append ``total_n - len(points)`` distinct points strictly inside the hull.

    The dummies sit on a short horizontal segment around ``(0, 1/8)`` (inside
    the radius-1/4 disk about the origin) when that point is strictly
    interior, else around the centroid of the hull vertices.
    """
    pts = list(points)
    extra = total_n - len(pts)
    if extra < 0:
        raise ValueError("total_n is smaller than the instance")
    if extra == 0:
        return pts
    hull = oracle_hull(pts)
    if len(hull) < 3:
        raise ValueError("cannot pad the interior of a degenerate hull")
    edges = list(zip(hull, hull[1:] + hull[:1]))

    def inside(c: Point) -> bool:
        return all(cross(u, v, c) < 0 for u, v in edges)

    c = Point(0, Fraction(1, 8))
    if not inside(c):
        sx = sum(Fraction(p.x) for p in hull) / len(hull)
        sy = sum(Fraction(p.y) for p in hull) / len(hull)
        c = point(sx, sy)
    # squared distance from c to the nearest edge line
    gap = min(Fraction(cross(u, v, c)) ** 2 / ((v.x - u.x) ** 2 + (v.y - u.y) ** 2) for u, v in edges)
    half = Fraction(1, 16)
    while half * half * 4 >= gap:
        half /= 2
    taken = set(pts)
    out = pts
    j = 0
    while len(out) < total_n:
        q = point(c.x - half + 2 * half * Fraction(j, extra + 1), c.y)
        j += 1
        if q not in taken:
            taken.add(q)
            out.append(q)
    return out


def random_disk(n: int, seed: int, radius: int = 10 ** 6) -> list[Point]:
    """``n`` distinct integer points in the disk of the given radius."""
    if n > 3 * radius * radius:
        raise ValueError("disk too small for n distinct points")
    rng = random.Random(seed)
    seen: dict[Point, None] = {}
    while len(seen) < n:
        x, y = rng.randint(-radius, radius), rng.randint(-radius, radius)
        if x * x + y * y <= radius * radius:
            seen[Point(x, y)] = None
    return list(seen)


def hard_instance(n: int) -> DisjointnessInstance:
    """A disjointness instance with ``n`` points, all of them extreme."""
    if n < 2:
        raise ValueError("need at least the two anchors")
    m = n - 2
    if m == 0:
        return gen_disjointness((), (), 1)
    return gen_disjointness(range(1, m + 1, 2), range(2, m + 1, 2), m)


def write_sidecar(path, instance) -> None:
    with open(path, "w") as fh:
        json.dump(instance.sidecar(), fh, indent=2, sort_keys=True)
        fh.write("\n")
