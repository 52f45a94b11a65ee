from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from streamhull.geometry import Point, canonical

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

grid_points = st.lists(st.builds(Point, st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=10, unique=True)

rational = st.fractions(min_value=-50, max_value=50, max_denominator=7).map(canonical)
rational_points = st.lists(st.builds(Point, rational, rational), min_size=1, max_size=40, unique=True)


def random_rational_points(rng: random.Random, n: int, span: int = 1000, den: int = 9) -> list[Point]:
    seen: dict[Point, None] = {}
    while len(seen) < n:
        x = canonical(Fraction(rng.randint(-span, span), rng.randint(1, den)))
        y = canonical(Fraction(rng.randint(-span, span), rng.randint(1, den)))
        seen[Point(x, y)] = None
    return list(seen)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


SQUARE = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]


# criterion -> (passed, detail); filled by test_acceptance and echoed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
