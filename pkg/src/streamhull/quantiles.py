"""Greenwald-Khanna epsilon-approximate quantile summary.

Each tuple ``[v, g, delta]`` stores a value together with ``g``, the gap
between its minimum rank and that of its predecessor, and ``delta``, the
spread between its minimum and maximum rank. Keeping ``g + delta <=
floor(2*eps*n)`` for every tuple guarantees that :meth:`query` can answer any
rank within ``eps*n``. Ranks are 1-based.

Arithmetic on ``eps`` is exact (``Fraction``) so the rank guarantee can be
checked without rounding slack.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction


class QuantileSummary:
    """Streaming rank summary with additive rank error ``eps * n``.

    While ``n < 1/eps`` items are kept verbatim and queries are exact; the
    GK invariant is vacuous at that size. Compression runs every
    ``ceil(1/(2*eps))`` insertions.
    """

    def __init__(self, epsilon) -> None:
        eps = Fraction(epsilon)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        self.epsilon = eps
        self.n = 0
        self._raw: list | None = []
        self._values: list = []
        self._tuples: list[list[int]] = []  # [g, delta], parallel to _values
        self._period = math.ceil(1 / (2 * eps))
        self._exact_limit = math.ceil(1 / eps)

    def __len__(self) -> int:
        """Resident tuple count (or buffered items before the first compression)."""
        if self._raw is not None:
            return len(self._raw)
        return len(self._values)

    @property
    def tuples(self) -> list[tuple]:
        if self._raw is not None:
            return [(v, 1, 0) for v in sorted(self._raw)]
        return [(v, g, d) for v, (g, d) in zip(self._values, self._tuples)]

    def insert(self, value) -> None:
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("only finite values can be summarised")
        self.n += 1
        if self._raw is not None:
            self._raw.append(value)
            if self.n >= self._exact_limit:
                self._raw.sort()
                self._values = self._raw
                self._tuples = [[1, 0] for _ in self._raw]
                self._raw = None
            return

        pos = bisect_right(self._values, value)
        if pos == 0 or pos == len(self._values):
            delta = 0
        else:
            g, d = self._tuples[pos]
            delta = g + d - 1
        self._values.insert(pos, value)
        self._tuples.insert(pos, [1, delta])
        if self.n % self._period == 0:
            self._compress()

    def _compress(self) -> None:
        cap = math.floor(2 * self.epsilon * self.n)
        values, tuples = self._values, self._tuples
        # merge right-to-left into the successor; never touch the extremes
        i = len(values) - 2
        while i >= 1:
            g, _ = tuples[i]
            g_next, d_next = tuples[i + 1]
            if g + g_next + d_next <= cap:
                tuples[i + 1][0] += g
                del values[i]
                del tuples[i]
            i -= 1

    def query(self, rank: int):
        """A stored value whose true rank is within ``eps * n`` of ``rank``."""
        if self.n == 0:
            raise ValueError("query on an empty summary")
        if not 1 <= rank <= self.n:
            raise ValueError(f"rank {rank} outside [1, {self.n}]")
        if self._raw is not None:
            return sorted(self._raw)[rank - 1]
        slack = self.epsilon * self.n
        r_min = 0
        for v, (g, d) in zip(self._values, self._tuples):
            r_min += g
            if r_min >= rank - slack and r_min + d <= rank + slack:
                return v
        raise AssertionError("GK invariant violated")  # pragma: no cover

    def max_spread(self) -> int:
        return max((g + d for g, d in self._tuples), default=0)


def qs_insert(summary: QuantileSummary, sigma) -> QuantileSummary:
    summary.insert(sigma)
    return summary


def qs_query(summary: QuantileSummary, target_rank: int):
    return summary.query(target_rank)
