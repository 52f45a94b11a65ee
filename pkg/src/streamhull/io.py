"""Point files: one ``x y`` pair per line, exact numbers, ``#`` comments."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .geometry import Point, canonical


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_number(token: str):
    """Integer, decimal or ``num/den``; converted exactly."""
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact number: {token!r}") from exc
    return canonical(value)


def parse_points(lines: Iterable[str]) -> list[Point]:
    out = []
    for no, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        toks = text.split()
        if len(toks) != 2:
            raise ParseError(no, f"expected 2 coordinates, found {len(toks)}")
        try:
            out.append(Point(parse_number(toks[0]), parse_number(toks[1])))
        except ValueError as exc:
            raise ParseError(no, str(exc)) from None
    return out


def read_points(path) -> list[Point]:
    with open(path) as fh:
        return parse_points(fh)


def format_number(v) -> str:
    v = canonical(v)
    return str(v) if isinstance(v, int) else f"{v.numerator}/{v.denominator}"


def format_points(points: Iterable[Point]) -> str:
    return "".join(f"{format_number(p.x)} {format_number(p.y)}\n" for p in points)


def write_points(path, points: Iterable[Point]) -> None:
    Path(path).write_text(format_points(points))
