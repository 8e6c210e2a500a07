"""Metric graphs with lengths in R^(k)_{>=0} and INF, and valuations along their edges.

An edge of finite length l is the lex interval [0, l].  The x-branch sits at
parameter 0 (the tail) and the y-branch at l (the head), so the coordinate
functions have val(x) = w and val(y) = l - w at parameter w.  A marked edge has
length INF and only a tail; its free end is the point at parameter INF.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .lexgroup import INF, LexValue, RankMismatch, integer_scale, lex_min
from .paths import GeneralizedInterval, OrientedInterval
from .tropicalize import ValuatedPolynomial

__all__ = [
    "Edge",
    "MetricGraph",
    "SkeletonPoint",
    "SkeletonPath",
    "InjectivityReport",
    "DisconnectedGraph",
    "MalformedChart",
    "edge_valuation",
    "marked_edge_valuation",
    "point_valuation",
    "skeleton_path",
    "sample_grid",
    "faithful_injectivity_check",
]


class DisconnectedGraph(ValueError):
    pass


class MalformedChart(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    tail: Hashable
    head: Hashable | None
    length: LexValue

    @property
    def marked(self) -> bool:
        return self.length.is_inf


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[Hashable, ...]
    edges: tuple[Edge, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex")
        for i, e in enumerate(self.edges):
            if e.tail not in known:
                raise ValueError(f"edge {i} starts at unknown vertex {e.tail!r}")
            if e.marked:
                if e.head is not None:
                    raise ValueError(f"marked edge {i} must have a single free endpoint")
            else:
                if e.head not in known:
                    raise ValueError(f"edge {i} ends at unknown vertex {e.head!r}")
                if e.length.rank != self.k:
                    raise RankMismatch(f"edge {i} has length of rank {e.length.rank}, graph rank is {self.k}")
                if e.length.sign() < 0:
                    raise ValueError(f"edge {i} has negative length {e.length}")

    def incident(self, v: Hashable) -> list[int]:
        return [i for i, e in enumerate(self.edges) if v in (e.tail, e.head)]


@dataclass(frozen=True)
class SkeletonPoint:
    edge: int
    param: LexValue

    def key(self, G: MetricGraph):
        """Identity of the underlying point of |G|: edge endpoints collapse to vertices."""
        e = G.edges[self.edge]
        if self.param.is_zero():
            return ("vertex", e.tail)
        if not e.marked and self.param == e.length:
            return ("vertex", e.head)
        return ("edge", self.edge, self.param)

    def check(self, G: MetricGraph) -> None:
        if not 0 <= self.edge < len(G.edges):
            raise ValueError(f"no edge {self.edge}")
        e = G.edges[self.edge]
        if not self.param.is_inf and self.param.rank != G.k:
            raise RankMismatch(f"parameter {self.param} does not have rank {G.k}")
        if not (LexValue.zero(G.k) <= self.param <= e.length):
            raise ValueError(f"parameter {self.param} outside [0, {e.length}]")


def _term_sum(g: ValuatedPolynomial, parts: Sequence[LexValue]) -> LexValue:
    best = INF
    for exps, nu in g.terms:
        total = nu
        for n, part in zip(exps, parts):
            total = total + integer_scale(n, part, g.k)
        best = lex_min((best, total))
    return best


def edge_valuation(g: ValuatedPolynomial, length: LexValue, omega: LexValue) -> LexValue:
    """min over terms a x^j y^m of nu(a) + j*omega + m*(length - omega)."""
    if g.d != 2:
        raise ValueError("edge charts take polynomials in two variables x, y")
    if length.is_inf:
        raise ValueError("use marked_edge_valuation on edges of infinite length")
    if omega.is_inf or not (LexValue.zero(g.k) <= omega <= length):
        raise ValueError(f"parameter {omega} outside [0, {length}]")
    return _term_sum(g, (omega, length - omega))


def marked_edge_valuation(g: ValuatedPolynomial, omega: LexValue) -> LexValue:
    """min over terms a x^j of nu(a) + j*omega, with omega allowed to be INF."""
    if g.d != 1:
        raise ValueError("marked edge charts take polynomials in one variable x")
    if not omega.is_inf and omega < LexValue.zero(g.k):
        raise ValueError(f"parameter {omega} is negative")
    return _term_sum(g, (omega,))


def point_valuation(G: MetricGraph, g: ValuatedPolynomial, p: SkeletonPoint) -> LexValue:
    e = G.edges[p.edge]
    if e.marked:
        return marked_edge_valuation(g, p.param)
    return edge_valuation(g, e.length, p.param)


# paths --------------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonPath:
    """A generalized interval together with the edge carrying each of its segments."""

    interval: GeneralizedInterval
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def endpoints(self) -> list[tuple[SkeletonPoint, SkeletonPoint]]:
        return [
            (SkeletonPoint(e, s.start), SkeletonPoint(e, s.end))
            for e, s in zip(self.edges, self.interval.segments)
        ]

    def is_continuous(self, G: MetricGraph) -> bool:
        ends = self.endpoints()
        return all(a[1].key(G) == b[0].key(G) for a, b in zip(ends, ends[1:]))


def _exits(G: MetricGraph, p: SkeletonPoint) -> list[tuple[Hashable, OrientedInterval | None]]:
    """Vertices reachable from p without passing another vertex, with the interval walked."""
    key = p.key(G)
    if key[0] == "vertex":
        return [(key[1], None)]
    e = G.edges[p.edge]
    zero = LexValue.zero(G.k)
    out = [(e.tail, OrientedInterval(zero, p.param, descending=True))]
    if not e.marked:
        out.append((e.head, OrientedInterval(p.param, e.length)))
    return out


def skeleton_path(G: MetricGraph, p: SkeletonPoint, q: SkeletonPoint) -> SkeletonPath:
    """Continuous path from p to q; BFS over vertices with lowest-edge-index tie-breaking."""
    p.check(G)
    q.check(G)
    if p.key(G) == q.key(G):
        return SkeletonPath(GeneralizedInterval(()), ())
    if p.edge == q.edge and p.key(G)[0] == "edge" and q.key(G)[0] == "edge":
        lo, hi = sorted((p.param, q.param))
        return SkeletonPath(GeneralizedInterval((OrientedInterval(lo, hi, p.param > q.param),)), (p.edge,))

    starts = _exits(G, p)
    goal_steps = {}
    for v, iv in _exits(G, q):
        goal_steps.setdefault(v, iv)
    # parent[v] = (previous vertex, edge index, interval) or a start marker
    parent: dict = {}
    queue: deque = deque()
    for v, iv in starts:
        if v not in parent:
            parent[v] = (None, p.edge if iv is not None else None, iv)
            queue.append(v)
    found = None
    while queue:
        v = queue.popleft()
        if v in goal_steps:
            found = v
            break
        for i in G.incident(v):
            e = G.edges[i]
            if e.marked:
                continue
            nb = e.head if e.tail == v else e.tail
            if nb in parent:
                continue
            zero = LexValue.zero(G.k)
            parent[nb] = (v, i, OrientedInterval(zero, e.length, descending=e.tail != v))
            queue.append(nb)
    if found is None:
        raise DisconnectedGraph("the two points lie in different components")

    steps = []
    v = found
    while True:
        prev, i, iv = parent[v]
        if iv is not None:
            steps.append((i, iv))
        if prev is None:
            break
        v = prev
    steps.reverse()
    tail_iv = goal_steps[found]
    if tail_iv is not None:
        steps.append((q.edge, tail_iv.reversed()))
    return SkeletonPath(GeneralizedInterval(tuple(iv for _, iv in steps)), tuple(i for i, _ in steps))


# faithful tropicalization -----------------------------------------------------------


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    witness: tuple[SkeletonPoint, SkeletonPoint] | None = None
    samples: int = 0
    images: dict = field(default_factory=dict, compare=False, repr=False)


def _edge_params(G: MetricGraph, idx: int, n: int) -> list[LexValue]:
    e = G.edges[idx]
    if e.marked:
        unit = LexValue.unit(G.k, 0)
        return [unit.scale(i) for i in range(n)] + [INF]
    return [e.length.scale(Fraction(i, n)) for i in range(n + 1)]


def sample_grid(G: MetricGraph, samples_per_edge: int) -> list[SkeletonPoint]:
    """Points i*l/n on finite edges, i*e_1 for i < n plus INF on marked edges.

    Vertices are listed once, at their first occurrence.
    """
    n = samples_per_edge
    if n < 1:
        raise ValueError("samples_per_edge must be positive")
    seen = set()
    out = []
    for idx in range(len(G.edges)):
        for t in _edge_params(G, idx, n):
            pt = SkeletonPoint(idx, t)
            key = pt.key(G)
            if key not in seen:
                seen.add(key)
                out.append(pt)
    return out


def _check_charts(G: MetricGraph, charts: Sequence[Mapping[str, ValuatedPolynomial]], fns: Sequence[str]) -> None:
    if len(charts) != len(G.edges):
        raise MalformedChart(f"{len(charts)} charts for {len(G.edges)} edges")
    for i, (e, chart) in enumerate(zip(G.edges, charts)):
        want = 1 if e.marked else 2
        for name in fns:
            if name not in chart:
                raise MalformedChart(f"edge {i} has no chart entry for {name!r}")
            g = chart[name]
            if g.d != want:
                raise MalformedChart(f"{name!r} on edge {i} has {g.d} variables, expected {want}")
            if g.k != G.k:
                raise MalformedChart(f"{name!r} on edge {i} has rank {g.k}, graph rank is {G.k}")
            if e.marked and any(u[0] < 0 for u in g.exponents):
                raise MalformedChart(f"{name!r} on marked edge {i} has a negative exponent")


def faithful_injectivity_check(
    G: MetricGraph,
    charts: Sequence[Mapping[str, ValuatedPolynomial]],
    samples_per_edge: int,
    fns: Sequence[str] | None = None,
) -> InjectivityReport:
    """Evaluate the chosen functions on a sample grid and look for two points with equal images.

    ``charts[i]`` maps function names to their expression in the x, y coordinates of
    edge i.  A vertex evaluated through two incident edges must get the same image,
    otherwise the charts are inconsistent and MalformedChart is raised.
    """
    if fns is None:
        names = sorted(set().union(*(c.keys() for c in charts))) if charts else []
    else:
        names = list(fns)
    _check_charts(G, charts, names)
    if samples_per_edge < 1:
        raise ValueError("samples_per_edge must be positive")
    images: dict = {}
    owner: dict = {}
    witness = None
    count = 0
    for idx in range(len(G.edges)):
        for t in _edge_params(G, idx, samples_per_edge):
            pt = SkeletonPoint(idx, t)
            img = tuple(point_valuation(G, charts[idx][name], pt) for name in names)
            key = pt.key(G)
            if key in images:
                if images[key] != img:
                    raise MalformedChart(f"charts disagree at {key}: {images[key]} vs {img}")
                continue
            images[key] = img
            count += 1
            other = owner.get(img)
            if other is None:
                owner[img] = pt
            elif witness is None:
                witness = (other, pt)
    return InjectivityReport(witness is None, witness, count, images)
