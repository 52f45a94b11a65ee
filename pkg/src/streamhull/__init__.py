"""Exact planar convex hulls under pass and space constraints.

Algorithms for the RAM, multi-pass streaming and W-stream models, sharing a
quantile-slope splitting scheme, plus rotating calipers over replayable hull
streams and generators for the hard disjointness instances.
"""

from __future__ import annotations

from .calipers import diameter, min_enclosing_rectangle
from .geometry import Point, oracle_hull, point
from .instances import gen_disjointness, gen_four_copy, hard_instance, random_disk
from .metrics import RunMetrics
from .quantiles import QuantileSummary
from .ram import ram_convex_hull, ram_upper_hull
from .streaming import stream_convex_hull
from .wstream import wstream_convex_hull

__all__ = [
    "Point", "point", "oracle_hull", "ram_convex_hull", "ram_upper_hull", "stream_convex_hull",
    "wstream_convex_hull", "QuantileSummary", "RunMetrics", "diameter", "min_enclosing_rectangle",
    "gen_disjointness", "gen_four_copy", "hard_instance", "random_disk",
]
__version__ = "0.1.0"
