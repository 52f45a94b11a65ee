"""Output-sensitive RAM upper hull by quantile-slope splitting.

One level of the recursion, for a subproblem bounded by anchors ``a`` and
``b``:

1. chunk the input into groups of at most ``r + 1`` points and take the
   upper hull of each group;
2. pick the ``r`` quantiles of the multiset of group-hull edge slopes;
3. find the point supporting each quantile slope (these are hull vertices);
4. cascade-prune every group hull against the resulting windows and recurse
   on each non-empty window.

Slopes are handled in descending order internally, so that the support of
the k-th slope lies left of the support of the (k+1)-th. The window between
two consecutive anchors is described by the smallest slope the left anchor
supports and the largest slope the right anchor supports; group vertices
outside that slope range, or not strictly between the anchors, cannot be on
the hull.

The same :class:`Split` object drives the streaming and W-stream variants.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .geometry import (
    NEG_INF,
    POS_INF,
    Point,
    Slope,
    above_line,
    as_points,
    better_support,
    dedupe,
    edge_slopes,
    leftmost,
    reflect,
    rightmost,
    slope,
    stitch,
    support_key,
    support_range,
    upper_hull_small,
)

MIN_CUTOFF = 8


class EmptySubproblem(Exception):
    """No input point lies strictly above the line between the anchors."""


@dataclass
class Subproblem:
    """One node of the recursion tree."""

    id: int
    depth: int
    left: Point | None
    right: Point | None
    slope_window: tuple[Slope, Slope] = (POS_INF, NEG_INF)
    input_size: int = 0
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    child_sizes: list[int] = field(default_factory=list)
    leaf: bool = False


@dataclass
class RecursionTrace:
    """Optional record of every subproblem a run executes."""

    nodes: list[Subproblem] = field(default_factory=list)
    r: int | None = None

    def add(self, node: Subproblem) -> Subproblem:
        self.nodes.append(node)
        return node

    def balance_pairs(self):
        """(parent input size, child input size) for every materialised child."""
        for node in self.nodes:
            for size in node.child_sizes:
                yield node.input_size, size

    @property
    def leaves(self) -> int:
        return sum(1 for n in self.nodes if not n.child_sizes)

    @property
    def depth(self) -> int:
        return max((n.depth for n in self.nodes), default=0)


def cutoff(r: int) -> int:
    return max(r + 1, MIN_CUTOFF)


def chunk(points: Sequence[Point], size: int) -> list[Sequence[Point]]:
    return [points[i:i + size] for i in range(0, len(points), size)]


def nearest_rank(k: int, total: int, parts: int) -> int:
    """Round ``k * total / parts`` half-up and clamp to ``[1, total]``."""
    rank = math.floor(Fraction(k * total, parts) + Fraction(1, 2))
    return min(max(rank, 1), total)


@dataclass(frozen=True)
class Split:
    """Anchors chosen for one subproblem and the pruning windows between them.

    ``anchors`` are distinct, left to right, with the subproblem's own
    anchors at both ends. ``windows[k]`` is the slope pair used to prune
    group hulls between ``anchors[k]`` and ``anchors[k + 1]``.
    """

    anchors: tuple[Point, ...]
    windows: tuple[tuple[Slope, Slope], ...]

    @property
    def interior(self) -> tuple[Point, ...]:
        return self.anchors[1:-1]

    def route(self, group: Iterable[Point]) -> list[tuple[int, Point]]:
        """Cascade-prune one group: (window index, point) for every survivor."""
        chain = upper_hull_small(group)
        neg = [-s for s in edge_slopes(chain)]
        anchors = self.anchors
        xs = [a.x for a in anchors]
        out = []
        k = 1
        for i, v in enumerate(chain):
            while k < len(xs) and xs[k] < v.x:
                k += 1
            if k == len(xs) or v.x <= xs[k - 1] or v.x == xs[k]:
                continue
            w = k - 1
            lo_slope, hi_slope = self.windows[w]
            alpha = support_range(neg, lo_slope)[1] if lo_slope != POS_INF else 0
            beta = support_range(neg, hi_slope)[0] if hi_slope != NEG_INF else len(chain) - 1
            if alpha <= i <= beta and above_line(anchors[w], anchors[w + 1], v):
                out.append((w, v))
        return out


def plan_split(
    left: Point,
    right: Point,
    supports: Sequence[tuple[Slope, Point]],
    guard: Point | None,
) -> Split:
    """Turn quantile supports into a :class:`Split`.

    ``guard`` is the support of ``slope(left, right)``. It is used only when
    no quantile support lies strictly between the anchors, which keeps every
    subproblem owning at least one hull vertex of its own. Raises
    :class:`EmptySubproblem` when the guard is not strictly above the anchor
    line either.
    """
    entries = [(POS_INF, left)]
    entries += [(s, p) for s, p in supports]
    if not any(p != left and p != right for _, p in supports):
        if guard is None or not above_line(left, right, guard):
            raise EmptySubproblem
        entries.append((slope(left, right), guard))
    entries.append((NEG_INF, right))
    entries.sort(key=lambda e: e[0], reverse=True)

    anchors: list[Point] = []
    ranges: list[list[Slope]] = []  # [largest, smallest] slope per anchor
    for s, p in entries:
        if anchors and anchors[-1] == p:
            ranges[-1][1] = s
        else:
            anchors.append(p)
            ranges.append([s, s])
    windows = tuple((ranges[k][1], ranges[k + 1][0]) for k in range(len(anchors) - 1))
    return Split(tuple(anchors), windows)


def group_slopes(groups: Iterable[Sequence[Point]]) -> list[Slope]:
    q: list[Slope] = []
    for g in groups:
        q.extend(edge_slopes(upper_hull_small(g)))
    return q


def quantile_slopes_exact(points: Sequence[Point], r: int) -> list[Slope]:
    """The r exact (r+1)-quantiles of the group-hull edge-slope multiset, ascending."""
    if r < 1:
        raise ValueError("r must be at least 1")
    q = sorted(group_slopes(chunk(list(points), r + 1)))
    if not q:
        return []
    return [q[nearest_rank(k, len(q), r + 1) - 1] for k in range(1, r + 1)]


def fold_supports(chain: Sequence[Point], sigmas: Sequence[Slope], best: list) -> None:
    """Update ``best[k]`` with the support of ``sigmas[k]`` within one group chain.

    ``sigmas`` must be sorted descending; one merge of the chain's edge
    slopes against them locates every group-level support.
    """
    slopes = edge_slopes(chain)
    i = 0
    for k, sigma in enumerate(sigmas):
        while i < len(slopes) and slopes[i] > sigma:
            i += 1
        cand = chain[i]
        if i < len(slopes) and slopes[i] == sigma:
            nxt = chain[i + 1]
            if support_key(nxt, sigma) > support_key(cand, sigma):
                cand = nxt
        best[k] = better_support(best[k], cand, sigma)


class SupportFold:
    """Running supports of a fixed slope list, fed one group chain at a time."""

    def __init__(self, sigmas: Sequence[Slope], seeds: Iterable[Point] = ()) -> None:
        self._order = sorted(range(len(sigmas)), key=lambda k: sigmas[k], reverse=True)
        self._desc = [sigmas[k] for k in self._order]
        self._best: list = [None] * len(sigmas)
        for p in seeds:
            for j, s in enumerate(self._desc):
                self._best[j] = better_support(self._best[j], p, s)

    def add_chain(self, chain: Sequence[Point]) -> None:
        fold_supports(chain, self._desc, self._best)

    def result(self) -> list:
        """Supports in the order the slopes were given (``None`` if nothing was fed)."""
        out: list = [None] * len(self._best)
        for j, k in enumerate(self._order):
            out[k] = self._best[j]
        return out


def supports_over(chains: Iterable[Sequence[Point]], sigmas: Sequence[Slope],
                  seeds: Iterable[Point] = ()) -> list[Point]:
    """Supports of ``sigmas`` (any order) over the union of group chains and ``seeds``."""
    fold = SupportFold(sigmas, seeds)
    for c in chains:
        fold.add_chain(c)
    return fold.result()


def suitable_extreme_points(points: Sequence[Point], sigmas: Sequence[Slope], r: int | None = None) -> list[Point]:
    """Supports of ``sigmas`` over ``points``, in the order ``sigmas`` are given."""
    if not points:
        raise ValueError("supports over an empty set")
    size = (r + 1) if r else max(len(sigmas) + 1, 2)
    return supports_over((upper_hull_small(g) for g in chunk(list(points), size)), sigmas)


def refine(points: Sequence[Point], split: Split, r: int) -> list[list[Point]]:
    """Children inputs P_1..P_m for ``split``, grouping ``points`` in input order."""
    parts: list[list[Point]] = [[] for _ in split.windows]
    for g in chunk(list(points), r + 1):
        for w, v in split.route(g):
            parts[w].append(v)
    return parts


def split_degenerate_guard(points: Sequence[Point], left: Point, right: Point, median_support: Point) -> Point:
    """Replace a split point that coincides with an anchor by the support of slope(left, right)."""
    if median_support != left and median_support != right:
        return median_support
    sigma = slope(left, right)
    cand = None
    for p in points:
        cand = better_support(cand, p, sigma)
    if cand is None or not above_line(left, right, cand):
        raise EmptySubproblem
    return cand


class _Solver:
    def __init__(self, r: int, trace: RecursionTrace | None, ids: Iterator[int] | None = None) -> None:
        self.r = r
        self.trace = trace
        self.ids = ids if ids is not None else itertools.count()

    def node(self, depth, left, right, window, size, parent) -> Subproblem | None:
        if self.trace is None:
            return None
        return self.trace.add(Subproblem(next(self.ids), depth, left, right, window, size, parent))

    def solve(self, left: Point, right: Point, stream: Sequence[Point], depth: int = 0,
              window=(POS_INF, NEG_INF), parent: int | None = None) -> list[Point]:
        """Interior upper-hull vertices strictly between ``left`` and ``right``."""
        r = self.r
        node = self.node(depth, left, right, window, len(stream), parent)
        if len(stream) <= cutoff(r):
            if node is not None:
                node.leaf = True
            return upper_hull_small([left, *stream, right])[1:-1]

        groups = chunk(stream, r + 1)
        chains = [upper_hull_small(g) for g in groups]
        q = sorted(s for c in chains for s in edge_slopes(c))
        sigmas = [q[nearest_rank(k, len(q), r + 1) - 1] for k in range(1, r + 1)] if q else []
        desc = sorted(sigmas, reverse=True)
        guard_slope = slope(left, right)
        best = supports_over(chains, desc + [guard_slope], (left, right))
        try:
            split = plan_split(left, right, list(zip(desc, best[:-1])), best[-1])
        except EmptySubproblem:
            return []

        parts: list[list[Point]] = [[] for _ in split.windows]
        for g in groups:
            for w, v in split.route(g):
                parts[w].append(v)

        out: list[Point] = []
        for w, part in enumerate(parts):
            if w > 0:
                out.append(split.anchors[w])
            if part:
                if node is not None:
                    node.child_sizes.append(len(part))
                out.extend(self.solve(split.anchors[w], split.anchors[w + 1], part, depth + 1,
                                      split.windows[w], node.id if node is not None else None))
        return out


def ram_upper_hull(points: Iterable, r: int = 1, trace: RecursionTrace | None = None) -> list[Point]:
    """Upper hull, left to right, computed by the recursive splitting algorithm."""
    if r < 1:
        raise ValueError("r must be at least 1")
    pts = dedupe(as_points(points))
    if not pts:
        raise ValueError("hull of an empty set")
    if trace is not None:
        trace.r = r
    left, right = leftmost(pts), rightmost(pts)
    if left == right:
        return [left]
    return [left, *_Solver(r, trace).solve(left, right, pts), right]


def ram_convex_hull(points: Iterable, r: int = 1, trace: RecursionTrace | None = None) -> list[Point]:
    """Clockwise extreme points starting at the leftmost (highest on ties)."""
    pts = dedupe(as_points(points))
    upper = ram_upper_hull(pts, r, trace)
    lower = [reflect(p) for p in ram_upper_hull([reflect(p) for p in pts], r, trace)]
    return stitch(upper, lower)
