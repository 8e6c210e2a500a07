"""Piecewise lex-linear path certificates inside lex polyhedral complexes.

A segment is ``t -> start + direction * t`` for ``t`` in a lex interval ``[0, bound]``
of R^(k), with a rational scalar direction per point coordinate.  Each constraint
value along a segment is then ``<u, start> + <u, direction> * t``: an affine,
lex-monotone function of ``t``.  Checking a constraint at both ends of a segment
therefore checks it along the whole segment.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .lexgroup import LexValue, RankMismatch, parse_lexvalue
from .linsys import EQ, GT
from .polyhedra import LexComplex, LexHalfspace, Point

__all__ = [
    "OrientedInterval",
    "GeneralizedInterval",
    "Segment",
    "PLPath",
    "PathCheck",
    "PointNotInComplex",
    "Disconnected",
    "build_adjacency",
    "connect",
    "verify_path",
    "path_to_json",
    "path_from_json",
]


class PointNotInComplex(ValueError):
    pass


class Disconnected(ValueError):
    pass


@dataclass(frozen=True)
class OrientedInterval:
    """A closed lex interval [lo, hi]; traversed from hi to lo when ``descending``."""

    lo: LexValue
    hi: LexValue
    descending: bool = False

    def __post_init__(self):
        if self.lo.is_inf:
            raise ValueError("the lower endpoint of an interval must be finite")
        if not self.hi.is_inf and self.hi.rank != self.lo.rank:
            raise RankMismatch("interval endpoints have different ranks")
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def start(self) -> LexValue:
        return self.hi if self.descending else self.lo

    @property
    def end(self) -> LexValue:
        return self.lo if self.descending else self.hi

    def contains(self, t: LexValue) -> bool:
        return self.lo <= t <= self.hi

    def reversed(self) -> "OrientedInterval":
        return OrientedInterval(self.lo, self.hi, not self.descending)


@dataclass(frozen=True)
class GeneralizedInterval:
    """Oriented intervals glued end of one to start of the next."""

    segments: tuple[OrientedInterval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))

    def __len__(self) -> int:
        return len(self.segments)

    def is_empty(self) -> bool:
        return not self.segments

    def reversed(self) -> "GeneralizedInterval":
        return GeneralizedInterval(tuple(s.reversed() for s in reversed(self.segments)))


@dataclass(frozen=True)
class Segment:
    cell: int
    start: Point
    direction: tuple[Fraction, ...]
    bound: LexValue
    descending: bool = False

    @property
    def interval(self) -> OrientedInterval:
        return OrientedInterval(LexValue.zero(self.bound.rank), self.bound, self.descending)

    def at(self, t: LexValue) -> Point:
        return tuple(a + t.scale(v) for a, v in zip(self.start, self.direction))

    @property
    def first(self) -> Point:
        return self.at(self.interval.start)

    @property
    def last(self) -> Point:
        return self.at(self.interval.end)


@dataclass(frozen=True)
class PLPath:
    source: Point
    target: Point
    segments: tuple[Segment, ...] = ()

    @property
    def interval(self) -> GeneralizedInterval:
        return GeneralizedInterval(tuple(s.interval for s in self.segments))

    def points(self) -> list[Point]:
        """Source, then the far end of every segment."""
        return [self.source] + [s.last for s in self.segments]


@dataclass(frozen=True)
class PathCheck:
    ok: bool
    reason: str = ""
    segment: int | None = None
    constraint: LexHalfspace | None = None

    def __bool__(self) -> bool:
        return self.ok


def build_adjacency(C: LexComplex) -> nx.Graph:
    """Cells as nodes; an edge, carrying a common point as ``waypoint``, when two cells meet."""
    G = nx.Graph()
    G.add_nodes_from(range(len(C.cells)))
    for i in range(len(C.cells)):
        for j in range(i + 1, len(C.cells)):
            w = C.cells[i].intersect(C.cells[j]).witness()
            if w is not None:
                G.add_edge(i, j, waypoint=w)
    return G


def _leg(a: Point, b: Point, cell: int, k: int) -> list[Segment]:
    """Segments from a to b, both in the same cell, never leaving it."""
    if a == b:
        return []
    D = [[bc - ac for ac, bc in zip(ai.coords, bi.coords)] for ai, bi in zip(a, b)]
    lead = next(row for row in D if any(row))
    T = LexValue(lead)
    if T.sign() < 0:
        T = -T
    c = T.leading_level()
    v = tuple(row[c] / T.coords[c] for row in D)
    if all(row == [vi * x for x in T.coords] for row, vi in zip(D, v)):
        return [Segment(cell, a, v, T)]
    # staircase through the midpoint, one level at a time: every corner stays in the cell
    mid = [[(ac + bc) / 2 for ac, bc in zip(ai.coords, bi.coords)] for ai, bi in zip(a, b)]
    out = []
    cur = [list(ai.coords) for ai in a]
    for target, rng in ((mid, range(k)), ([list(bi.coords) for bi in b], reversed(range(k)))):
        for lvl in rng:
            step = tuple(target[i][lvl] - cur[i][lvl] for i in range(len(a)))
            if not any(step):
                continue
            start = tuple(LexValue(row) for row in cur)
            out.append(Segment(cell, start, step, LexValue.unit(k, lvl)))
            for i in range(len(a)):
                cur[i][lvl] = target[i][lvl]
    return out


def connect(C: LexComplex, w1: Sequence[LexValue], w2: Sequence[LexValue], adjacency: nx.Graph | None = None) -> PLPath:
    """Path certificate from w1 to w2 through the fewest cells (BFS on the adjacency graph)."""
    w1, w2 = tuple(w1), tuple(w2)
    for w in (w1, w2):
        if any(x.is_inf for x in w):
            raise PointNotInComplex("points with infinite coordinates cannot be connected")
    starts = C.cells_containing(w1)
    goals = set(C.cells_containing(w2))
    if not starts:
        raise PointNotInComplex(f"{_fmt(w1)} lies in no cell")
    if not goals:
        raise PointNotInComplex(f"{_fmt(w2)} lies in no cell")
    if w1 == w2:
        return PLPath(w1, w2)
    G = adjacency if adjacency is not None else build_adjacency(C)
    parent = {s: None for s in starts}
    queue = deque(starts)
    found = None
    while queue:
        node = queue.popleft()
        if node in goals:
            found = node
            break
        for nb in sorted(G.adj[node]):
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    if found is None:
        raise Disconnected(f"no chain of meeting cells joins {_fmt(w1)} to {_fmt(w2)}")
    route = [found]
    while parent[route[-1]] is not None:
        route.append(parent[route[-1]])
    route.reverse()
    stops = [w1] + [G.edges[u, v]["waypoint"] for u, v in zip(route, route[1:])] + [w2]
    segments = []
    for cell, a, b in zip(route, stops, stops[1:]):
        segments.extend(_leg(a, b, cell, C.k))
    return PLPath(w1, w2, tuple(segments))


def _fmt(w: Sequence[LexValue]) -> str:
    return "(" + ", ".join(str(x) for x in w) + ")"


def verify_path(path: PLPath, C: LexComplex, w1: Sequence[LexValue] | None = None, w2: Sequence[LexValue] | None = None) -> PathCheck:
    """Check endpoints, junction continuity and per-segment cell containment exactly."""
    if w1 is not None and tuple(w1) != path.source:
        return PathCheck(False, "source differs from the requested start point")
    if w2 is not None and tuple(w2) != path.target:
        return PathCheck(False, "target differs from the requested end point")
    if not path.segments:
        if path.source != path.target:
            return PathCheck(False, "empty path with distinct endpoints")
        if not C.contains(path.source):
            return PathCheck(False, "endpoint lies in no cell")
        return PathCheck(True)
    current = path.source
    for m, seg in enumerate(path.segments):
        if not 0 <= seg.cell < len(C.cells):
            return PathCheck(False, f"unknown cell index {seg.cell}", m)
        if seg.bound.is_inf or seg.bound.rank != C.k or seg.bound.sign() < 0:
            return PathCheck(False, "segment bound is not a finite lex-nonnegative value", m)
        if len(seg.start) != C.d or len(seg.direction) != C.d:
            return PathCheck(False, "segment has the wrong dimension", m)
        if seg.first != current:
            what = "source" if m == 0 else "junction"
            return PathCheck(False, f"{what} discontinuity before segment {m}", m)
        zero, T = LexValue.zero(C.k), seg.bound
        half = T.scale(Fraction(1, 2))
        for h in C.cells[seg.cell].constraints:
            at0, atT, atH = h.value(seg.at(zero)), h.value(seg.at(T)), h.value(seg.at(half))
            if (at0 + atT).scale(Fraction(1, 2)) != atH:
                return PathCheck(False, "constraint value is not affine along the segment", m, h)
            if not (_holds(h, at0) and _holds(h, atT)):
                return PathCheck(False, f"segment {m} leaves cell {seg.cell}", m, h)
        current = seg.last
    if current != path.target:
        return PathCheck(False, "path does not end at the target", len(path.segments) - 1)
    return PathCheck(True)


def _holds(h: LexHalfspace, value: LexValue) -> bool:
    if h.rel == EQ:
        return value == h.rhs
    if h.rel == GT:
        return value > h.rhs
    return value >= h.rhs


# JSON-ready forms --------------------------------------------------------------


def path_to_json(path: PLPath) -> dict:
    return {
        "source": [str(x) for x in path.source],
        "target": [str(x) for x in path.target],
        "segments": [
            {
                "cell": s.cell,
                "start": [str(x) for x in s.start],
                "direction": [str(v) for v in s.direction],
                "bound": str(s.bound),
                "descending": s.descending,
            }
            for s in path.segments
        ],
    }


def path_from_json(data: dict) -> PLPath:
    def point(xs):
        return tuple(parse_lexvalue(x) for x in xs)

    segs = tuple(
        Segment(
            int(s["cell"]),
            point(s["start"]),
            tuple(Fraction(v) for v in s["direction"]),
            parse_lexvalue(s["bound"]),
            bool(s.get("descending", False)),
        )
        for s in data.get("segments", [])
    )
    return PLPath(point(data["source"]), point(data["target"]), segs)
