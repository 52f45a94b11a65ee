"""Metered tapes for the streaming and W-stream models.

A :class:`Tape` is scanned front to back by a :class:`PassReader`. Only a
pass that reaches the end counts; abandoning a reader mid-scan is an error
and leaves ``pass_count`` untouched. On a writable tape every record emitted
during pass ``i`` becomes the input of pass ``i + 1``; emitted records are
never visible to the pass that wrote them.

Space is counted in point-equivalents by :class:`SpaceMeter`: one unit per
resident point, summary tuple or subproblem descriptor.
"""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, NamedTuple

from .geometry import NEG_INF, POS_INF, Point, Slope, canonical

POINT = "point"
PARAM = "param"


class TapeError(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, peak: int, budget: int, phase: str) -> None:
        super().__init__(f"space budget {budget} exceeded: {peak} units during {phase or 'run'}")
        self.peak = peak
        self.budget = budget
        self.phase = phase


class TapeRecord(NamedTuple):
    tag: str
    subproblem_id: int
    payload: Any


@dataclass(frozen=True)
class SubproblemParams:
    """Parameter block persisted on a W-stream tape for one pending subproblem.

    ``routing`` is the parent's split (anchors and pruning windows), so that
    the parent's points can be routed to this subproblem and its siblings
    without the parent's own record. Sibling ids are ``first_sibling + k``.
    """

    id: int
    depth: int
    left: Point
    right: Point
    window: tuple[Slope, Slope]
    chain: str = "U"
    parent: int = -1
    first_sibling: int = 0
    routing: Any = None  # ram.Split


class PassReader:
    """Sequential reader over one pass; must be driven to exhaustion."""

    def __init__(self, tape: "Tape", records: Iterable[TapeRecord]) -> None:
        self._tape = tape
        self._records = records
        self._done = False
        self._closed = False
        self._out: list[TapeRecord] | None = [] if tape.writable else None
        if self._out is not None:
            self.emit = self._out.append

    def emit(self, record: TapeRecord) -> None:  # replaced on writable tapes
        raise TapeError("emit on a read-only tape")

    def __iter__(self) -> Iterator[TapeRecord]:
        yield from self._records
        self._done = True

    def __enter__(self) -> "PassReader":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.close()
        else:
            self.abort()

    def abort(self) -> None:
        if not self._closed:
            self._closed = True
            self._tape._finish(self, None, completed=False)

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        if not self._done:
            self._tape._finish(self, None, completed=False)
            raise TapeError("pass abandoned before the end of the tape")
        self._tape._finish(self, self._out, completed=True)


class Tape:
    """In-memory tape; ``writable=True`` gives W-stream rewrite semantics."""

    def __init__(self, records: Iterable[TapeRecord] = (), writable: bool = False) -> None:
        self._records: list[TapeRecord] = list(records)
        self.writable = writable
        self.pass_count = 0
        self._active: PassReader | None = None

    @classmethod
    def of_points(cls, points: Iterable[Point], writable: bool = False) -> "Tape":
        return cls((TapeRecord(POINT, 0, p) for p in points), writable=writable)

    def __len__(self) -> int:
        return len(self._records)

    @property
    def records(self) -> tuple[TapeRecord, ...]:
        """Inspection hook for tests; algorithms only read through passes."""
        return tuple(self._records)

    def begin_pass(self) -> PassReader:
        if self._active is not None:
            raise TapeError("a pass is already in progress on this tape")
        self._active = PassReader(self, self._source())
        return self._active

    def _source(self) -> Iterable[TapeRecord]:
        return self._records

    def _finish(self, reader: PassReader, out, completed: bool) -> None:
        if self._active is reader:
            self._active = None
        if completed:
            self.pass_count += 1
            if out is not None:
                self._replace(out)

    def _replace(self, out: list[TapeRecord]) -> None:
        self._records = out


def _fmt_num(v) -> str:
    v = canonical(v)
    return str(v) if isinstance(v, int) else f"{v.numerator}/{v.denominator}"


def _fmt_slope(s: Slope) -> str:
    if s == POS_INF:
        return "inf"
    if s == NEG_INF:
        return "-inf"
    return _fmt_num(s)


def _parse_slope(tok: str) -> Slope:
    if tok == "inf":
        return POS_INF
    if tok == "-inf":
        return NEG_INF
    return canonical(Fraction(tok))


def _parse_point(tx: str, ty: str) -> Point:
    return Point(canonical(Fraction(tx)), canonical(Fraction(ty)))


def encode_record(rec: TapeRecord) -> str:
    """One line of the file-backed tape format.

    ``P <id> <x> <y>`` for points; ``S <id> <depth> <ax> <ay> <bx> <by>
    <sigma_left> <sigma_right>`` followed by the chain flag, parent id, first
    sibling id and the parent's routing split for parameter records.
    """
    if rec.tag == POINT:
        p = rec.payload
        return f"P {rec.subproblem_id} {_fmt_num(p.x)} {_fmt_num(p.y)}"
    d: SubproblemParams = rec.payload
    toks = ["S", str(d.id), str(d.depth), _fmt_num(d.left.x), _fmt_num(d.left.y),
            _fmt_num(d.right.x), _fmt_num(d.right.y), _fmt_slope(d.window[0]),
            _fmt_slope(d.window[1]), d.chain, str(d.parent), str(d.first_sibling)]
    split = d.routing
    if split is None:
        toks.append("0")
    else:
        toks.append(str(len(split.anchors)))
        for a in split.anchors:
            toks += [_fmt_num(a.x), _fmt_num(a.y)]
        for lo, hi in split.windows:
            toks += [_fmt_slope(lo), _fmt_slope(hi)]
    return " ".join(toks)


def decode_record(line: str) -> TapeRecord:
    from .ram import Split

    toks = line.split()
    if toks[0] == "P":
        return TapeRecord(POINT, int(toks[1]), _parse_point(toks[2], toks[3]))
    if toks[0] != "S":
        raise ValueError(f"unknown tape record {line!r}")
    sid, depth = int(toks[1]), int(toks[2])
    left, right = _parse_point(toks[3], toks[4]), _parse_point(toks[5], toks[6])
    window = (_parse_slope(toks[7]), _parse_slope(toks[8]))
    chain, parent, first = toks[9], int(toks[10]), int(toks[11])
    m = int(toks[12])
    routing = None
    if m:
        pos = 13
        anchors = tuple(_parse_point(toks[pos + 2 * i], toks[pos + 2 * i + 1]) for i in range(m))
        pos += 2 * m
        windows = tuple((_parse_slope(toks[pos + 2 * i]), _parse_slope(toks[pos + 2 * i + 1])) for i in range(m - 1))
        routing = Split(anchors, windows)
    return TapeRecord(PARAM, sid, SubproblemParams(sid, depth, left, right, window, chain, parent, first, routing))


class FileTape(Tape):
    """Tape backed by a newline-delimited file; same pass semantics as :class:`Tape`."""

    def __init__(self, path, records: Iterable[TapeRecord] | None = None, writable: bool = False) -> None:
        self.path = Path(path)
        self.writable = writable
        self.pass_count = 0
        self._active = None
        if records is not None:
            with open(self.path, "w") as fh:
                for rec in records:
                    fh.write(encode_record(rec) + "\n")
        self._length = sum(1 for _ in open(self.path))

    def __len__(self) -> int:
        return self._length

    @property
    def records(self) -> tuple[TapeRecord, ...]:
        return tuple(self._source())

    def _source(self) -> Iterator[TapeRecord]:
        with open(self.path) as fh:
            for line in fh:
                if line.strip():
                    yield decode_record(line)

    def _replace(self, out: list[TapeRecord]) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".next")
        with os.fdopen(fd, "w") as fh:
            for rec in out:
                fh.write(encode_record(rec) + "\n")
        os.replace(tmp, self.path)
        self._length = len(out)


class SpaceMeter:
    """Tracks resident point-equivalents; raises :class:`BudgetExceeded` past ``budget``."""

    def __init__(self, budget: int | None = None) -> None:
        self.budget = budget
        self.current = 0
        self.peak = 0

    def charge(self, units: int, phase: str = "") -> None:
        self.current += units
        if self.current > self.peak:
            self.peak = self.current
            if self.budget is not None and self.current > self.budget:
                raise BudgetExceeded(self.current, self.budget, phase)

    def release(self, units: int) -> None:
        self.current -= units

    @contextmanager
    def scope(self, units: int, phase: str = ""):
        self.charge(units, phase)
        try:
            yield
        finally:
            self.release(units)


def meter_scope(meter: SpaceMeter, delta: int, phase: str = "") -> None:
    if delta >= 0:
        meter.charge(delta, phase)
    else:
        meter.release(-delta)


class ResultStream:
    """Write-only output stream of extreme points with optional downstream consumers."""

    def __init__(self) -> None:
        self._points: list[Point] = []
        self._consumers: list[Callable[[Point], None]] = []

    def attach(self, consumer: Callable[[Point], None]) -> None:
        self._consumers.append(consumer)

    def write(self, p: Point) -> None:
        self._points.append(p)
        for c in self._consumers:
            c(p)

    def extend(self, points: Iterable[Point]) -> None:
        for p in points:
            self.write(p)

    @property
    def points(self) -> list[Point]:
        return list(self._points)
