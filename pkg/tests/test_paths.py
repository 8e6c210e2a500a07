import random
from dataclasses import replace
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import lv, pt
from lextrop import (
    Disconnected,
    LexComplex,
    LexHalfspace,
    LexPolyhedron,
    LexValue,
    PLPath,
    PointNotInComplex,
    Segment,
    ValuatedPolynomial,
    build_adjacency,
    connect,
    trop_hypersurface,
    verify_path,
)
from lextrop.paths import path_from_json, path_to_json
from lextrop.suites import member_points, random_polynomial

LINE = trop_hypersurface(ValuatedPolynomial({e: lv("(0,0)") for e in [(1, 0), (0, 1), (0, 0)]}))


def h(slope, rhs, rel=">="):
    return LexHalfspace.make(slope, lv(rhs), rel)


def cell(*hs, k=2):
    return LexPolyhedron(hs, k, len(hs[0].slope))


def _random_t(rng, T):
    """A random parameter in the lex interval [0, T], found by rejection."""
    zero = LexValue.zero(T.rank)
    while True:
        s = Fraction(rng.randint(0, 8), 8)
        coords = [s * x for x in T.coords]
        lvl = rng.randrange(T.rank)
        for c in range(lvl, T.rank):
            coords[c] += rng.randint(-50, 50)
        t = LexValue(coords)
        if zero <= t <= T:
            return t


def _stays_inside(path, C, rng, tries=10):
    for seg in path.segments:
        P = C.cells[seg.cell]
        for t in [LexValue.zero(seg.bound.rank), seg.bound] + [_random_t(rng, seg.bound) for _ in range(tries)]:
            if not P.contains(seg.at(t)):
                return False
    return True


def test_adjacency_examples():
    G = build_adjacency(LINE)
    assert (G.number_of_nodes(), G.number_of_edges()) == (3, 3)
    origin = pt("(0,0)", "(0,0)")
    assert all(G.edges[e]["waypoint"] == origin for e in G.edges)
    single = LexComplex([cell(h((1,), "(0,0)"))], 2, 1)
    assert build_adjacency(single).number_of_edges() == 0
    parallel = LexComplex([cell(h((1, -1), "(0,0)", "=")), cell(h((1, -1), "(1,0)", "="))], 2, 2)
    G = build_adjacency(parallel)
    assert (G.number_of_nodes(), G.number_of_edges()) == (2, 0)


def test_line_path_through_origin():
    w1, w2 = pt("(0,0)", "(3,2)"), pt("(-1,0)", "(-1,0)")
    path = connect(LINE, w1, w2)
    assert len(path.segments) == 2
    assert path.points() == [w1, pt("(0,0)", "(0,0)"), w2]
    assert verify_path(path, LINE, w1, w2)
    assert _stays_inside(path, LINE, random.Random(0))
    assert path.segments[0].bound == lv("(3,2)")
    assert path.segments[0].direction == (0, -1)


def test_trivial_path():
    w = pt("(0,0)", "(0,7)")
    path = connect(LINE, w, w)
    assert path.segments == ()
    assert path.interval.is_empty()
    assert verify_path(path, LINE, w, w)


def test_points_outside_the_complex():
    with pytest.raises(PointNotInComplex):
        connect(LINE, pt("(1,0)", "(2,0)"), pt("(0,0)", "(0,0)"))
    with pytest.raises(PointNotInComplex):
        connect(LINE, pt("(0,0)", "(0,0)"), (lv("inf"), lv("(0,0)")))


def test_disconnected_complex():
    parallel = LexComplex([cell(h((1, -1), "(0,0)", "=")), cell(h((1, -1), "(1,0)", "="))], 2, 2)
    with pytest.raises(Disconnected):
        connect(parallel, pt("(0,0)", "(0,0)"), pt("(1,0)", "(0,0)"))


def test_junction_jump_is_rejected():
    path = connect(LINE, pt("(0,0)", "(3,2)"), pt("(-1,0)", "(-1,0)"))
    second = path.segments[1]
    moved = replace(second, start=(second.start[0] + lv("(0,1)"), second.start[1]))
    bad = PLPath(path.source, path.target, (path.segments[0], moved))
    check = verify_path(bad, LINE)
    assert not check
    assert "junction" in check.reason and check.segment == 1


def test_segment_leaving_its_cell_is_rejected():
    C = LexComplex([cell(h((1, 0), "(0,0)", "="), h((0, 1), "(0,0)"))], 2, 2)
    seg = Segment(0, pt("(0,0)", "(0,1)"), (Fraction(0), Fraction(-1)), lv("(0,2)"))
    path = PLPath(seg.first, seg.last, (seg,))
    check = verify_path(path, C)
    assert not check
    assert check.constraint == h((0, 1), "(0,0)")


def test_wrong_endpoints_are_rejected():
    path = connect(LINE, pt("(0,0)", "(3,2)"), pt("(-1,0)", "(-1,0)"))
    assert not verify_path(path, LINE, w2=pt("(-2,0)", "(-2,0)"))
    short = PLPath(path.source, path.target, path.segments[:1])
    assert "end at the target" in verify_path(short, LINE).reason


def test_staircase_inside_a_halfspace():
    C = LexComplex([cell(h((1, 0), "(0,0)"))], 2, 2)
    a, b = pt("(0,0)", "(0,0)"), pt("(0,5)", "(1,0)")
    path = connect(C, a, b)
    assert len(path.segments) > 1
    assert verify_path(path, C, a, b)
    assert _stays_inside(path, C, random.Random(1), tries=30)


def test_descending_segment():
    seg = Segment(0, pt("(0,0)"), (Fraction(1),), lv("(0,3)"), descending=True)
    assert seg.first == pt("(0,3)") and seg.last == pt("(0,0)")
    C = LexComplex([cell(h((1,), "(0,0)"))], 2, 1)
    assert verify_path(PLPath(seg.first, seg.last, (seg,)), C)


def test_json_round_trip():
    path = connect(LINE, pt("(0,0)", "(3,2)"), pt("(-1,0)", "(-1,0)"))
    assert path_from_json(path_to_json(path)) == path


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_connect_is_sound_on_random_complexes(seed):
    rng = random.Random(seed)
    p = random_polynomial(rng)
    C = trop_hypersurface(p)
    G = build_adjacency(C)
    assume(len(C) > 0 and nx.is_connected(G))
    pts = member_points(rng, C, 6)
    for w1, w2 in zip(pts, pts[1:]):
        path = connect(C, w1, w2, G)
        assert verify_path(path, C, w1, w2)
        assert path.points()[0] == w1 and path.points()[-1] == w2
        assert all(isinstance(v, Fraction) for s in path.segments for v in s.direction)
        assert _stays_inside(path, C, rng, tries=4)
