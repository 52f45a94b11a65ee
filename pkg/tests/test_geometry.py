from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import SQUARE, grid_points, rational_points
from streamhull.geometry import (
    NEG_INF, POS_INF, Orientation, Point, brute_support, canonical, edge_slopes, is_extreme, oracle_hull,
    orientation, slope, support_point, upper_hull_small,
)


def test_canonical_forms():
    assert canonical(Fraction(4, 2)) == 2 and type(canonical(Fraction(4, 2))) is int
    assert canonical(Fraction(-3, 6)) == Fraction(-1, 2)
    with pytest.raises((TypeError, ValueError)):
        canonical(0.5)


@pytest.mark.parametrize("pts, want", [
    (((0, 0), (1, 0), (2, 0)), Orientation.COLLINEAR),
    (((0, 0), (1, 1), (2, 0)), Orientation.CLOCKWISE),
    (((0, 0), (1, -1), (2, 0)), Orientation.COUNTERCLOCKWISE),
])
def test_orientation_examples(pts, want):
    assert orientation(*(Point(*p) for p in pts)) == want


def test_slope_examples():
    assert slope(Point(0, 0), Point(2, 1)) == Fraction(1, 2)
    assert slope(Point(0, 0), Point(1, -2)) == -2
    assert slope(Point(3, 5), Point(3, 7)) == POS_INF
    assert NEG_INF < -10 ** 30 < Fraction(1, 3) < 10 ** 30 < POS_INF


@pytest.mark.parametrize("pts, want", [
    ([(0, 0), (1, 1), (2, 0)], [(0, 0), (1, 1), (2, 0)]),
    ([(0, 0), (1, 0), (2, 0)], [(0, 0), (2, 0)]),
    ([(0, 0), (0, 1), (2, 0), (2, 3)], [(0, 1), (2, 3)]),
])
def test_upper_hull_small_examples(pts, want):
    assert upper_hull_small([Point(*p) for p in pts]) == [Point(*p) for p in want]


def test_support_point_examples():
    chain = [Point(0, 0), Point(1, 1), Point(2, 0)]
    assert support_point(chain, 0)[0] == Point(1, 1)
    assert support_point(chain, 2)[0] == Point(0, 0)
    assert support_point(chain, 1)[0] == Point(1, 1)  # tie, higher point wins


def test_oracle_examples():
    assert oracle_hull(SQUARE) == [Point(0, 1), Point(1, 1), Point(1, 0), Point(0, 0)]
    assert oracle_hull([Point(0, 0), Point(1, 1), Point(2, 2)]) == [Point(0, 0), Point(2, 2)]
    assert oracle_hull([Point(3, 4)]) == [Point(3, 4)]


def _upper_part(hull):
    """Clockwise from the leftmost vertex up to the rightmost one."""
    right = max(range(len(hull)), key=lambda i: (hull[i].x, hull[i].y))
    return hull[:right + 1]


@given(grid_points)
def test_oracle_matches_extremeness_test(pts):
    hull = oracle_hull(pts)
    assert set(hull) == {p for p in pts if is_extreme(p, [q for q in pts if q != p])}


@given(rational_points)
def test_upper_hull_is_oracle_upper_chain(pts):
    chain = upper_hull_small(pts)
    assert chain == _upper_part(oracle_hull(pts))
    slopes = edge_slopes(chain)
    assert all(a > b for a, b in zip(slopes, slopes[1:]))
    assert all(x.x < y.x for x, y in zip(chain, chain[1:]))


def test_support_matches_intercept_brute_force_on_grid():
    grid = [Point(x, y) for x in range(4) for y in range(3)]
    sigmas = [NEG_INF, POS_INF, -3, -1, Fraction(-1, 2), 0, Fraction(1, 3), 1, 2, 5]
    for size in range(1, 6):
        for pts in itertools.combinations(grid, size):
            chain = upper_hull_small(pts)
            if len(chain) > 8:
                continue
            for s in sigmas:
                assert support_point(chain, s)[0] == brute_support(chain, s)


@given(rational_points)
def test_orientation_antisymmetry(pts):
    for p, q, r in itertools.islice(itertools.combinations(pts, 3), 30):
        o = orientation(p, q, r)
        if o != Orientation.COLLINEAR:
            assert orientation(r, q, p) == -o
