import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lv, pt
from lextrop import (
    EuclideanPiece,
    LexComplex,
    LexHalfspace,
    LexPolyhedron,
    ComplexError,
    contains,
    euclidean_closure,
    faces,
    flatten,

    intersect,
    is_empty,

)
from lextrop.linsys import EQ, GE
from lextrop.polyhedra import flatten_point, unflatten_point
from lextrop.suites import random_polyhedron

def half(slope, rhs, rel=">="):
    return LexHalfspace.make(slope, lv(rhs), rel)

def poly(*hs, k=2):
    return LexPolyhedron(hs, k, len(hs[0].slope))

H = poly(half((1,), "(0,0)"))

def piece(lines, n):
    return EuclideanPiece.from_lines(lines, n).canonical()

def test_halfspace_membership():
    assert not contains(H, pt("(0,-5)"))
    assert contains(H, pt("(0,5)"))
    assert not contains(H, pt("(-1,100)"))
    assert contains(H, pt("(0,0)"))

def test_halfspace_reversed_relations():
    h = half((1, -1), "(0,1)", "<")
    assert h.holds(pt("(0,0)", "(0,0)"))
    assert not h.holds(pt("(0,1)", "(0,0)"))
    assert LexHalfspace.parse("1,-1 < (0,1)") == h

def test_flatten_halfspace():
    got = {p.canonical() for p in flatten(H)}
    want = {piece(["1,0 > 0"], 2), piece(["1,0 = 0", "0,1 > 0"], 2), piece(["1,0 = 0", "0,1 = 0"], 2)}
    assert got == want

def test_flatten_equality_is_componentwise():
    pieces = flatten(poly(half((1, 2), "(1,-1,3)", "="), k=3))
    assert len(pieces) == 1
    assert len(pieces[0].rows) == 3
    assert all(rel == EQ for _, _, rel in pieces[0].rows)

def test_flatten_infeasible():
    assert flatten(poly(half((1,), "(1,0)"), half((1,), "(0,0)", "<="))) == []

def test_closure_examples():
    assert euclidean_closure(H) == [piece(["1,0 >= 0"], 2)]
    E = poly(half((1, 1), "(0,1)", "="))
    assert euclidean_closure(E) == [p.canonical() for p in flatten(E)]
    assert euclidean_closure(poly(half((1,), "(0,0)", ">"))) == [piece(["1,0 >= 0"], 2)]

def test_faces_of_halfspace():
    fs = faces(H)
    assert len(fs) == 2
    assert any(F.same_set(H) for F in fs)
    assert any(F.same_set(poly(half((1,), "(0,0)", "="))) for F in fs)

def test_intersection_and_emptiness():
    P = intersect(H, poly(half((1,), "(0,0)", "<=")))
    assert P.same_set(poly(half((1,), "(0,0)", "=")))
    assert is_empty(intersect(poly(half((1,), "(0,1)")), poly(half((1,), "(0,0)", "<"))))
    assert not is_empty(H)

def test_canonical_form_and_text_round_trip():
    P = poly(half((2, 2), "(2,4)", "="), half((-1, 0), "(3,0)"))
    C = P.canonical()
    assert C.same_set(P)
    assert C.canonical() == C
    assert LexPolyhedron.from_lines(C.lines(), 2, 2) == C
    assert C.lines()[0] == "1,1 = (1,2)"

def test_canonical_detects_implicit_equalities():
    P = poly(half((1,), "(0,1)"), half((1,), "(0,1)", "<="))
    assert P.canonical().lines() == ["1 = (0,1)"]

def test_infinite_constraint_needs_equality():
    with pytest.raises(ValueError):
        LexHalfspace((1,), lv("inf"), GE)

def test_dimension_checks():
    with pytest.raises(ValueError):
        LexPolyhedron((half((1, 0), "(0,0)"),), 2, 3)
    with pytest.raises(ValueError):
        H.contains(pt("(0,0)", "(0,0)"))

def test_point_flattening_round_trip():
    w = pt("(1,2,3)", "(4,5,6)")
    x = flatten_point(w, 3)
    assert x == (1, 2, 3, 4, 5, 6)
    assert unflatten_point(x, 3, 2) == w

def test_complex_rejects_bad_gluing():
    a = poly(half((1,), "(0,0)"))
    b = poly(half((1,), "(0,5)", "<="))
    with pytest.raises(ComplexError):
        LexComplex([a, b], 2, 1)
    good = LexComplex([a, poly(half((1,), "(0,0)", "<="))], 2, 1)
    assert good.violations() == []
    assert len(good.faces()) == 3

# properties --------------------------------------------------------------------------

polyhedra = st.tuples(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 2)).map(
    lambda t: random_polyhedron(random.Random(t[0]), t[1], t[2])
)

def _random_point(rng, k, d):
    return tuple(lv("(" + ",".join(str(Fraction(rng.randint(-6, 6), 2)) for _ in range(k)) + ")") for _ in range(d))

@given(polyhedra, st.integers(0, 10**6))
def test_pointwise_agreement(P, seed):
    rng = random.Random(seed)
    pieces = flatten(P)
    pts = [_random_point(rng, P.k, P.d) for _ in range(15)]
    for p in pieces:
        pts.append(unflatten_point(p.sample(rng, 4), P.k, P.d))
    for w in pts:
        x = flatten_point(w, P.k)
        hits = [p for p in pieces if p.contains(x)]
        assert P.contains(w) == bool(hits)
        assert len(hits) <= 1

@given(polyhedra)
def test_emptiness_two_routes(P):
    w = P.witness()
    assert (w is None) == (flatten(P) == [])
    if w is not None:
        assert P.contains(w)

@given(polyhedra, st.integers(0, 10**6))
def test_closure_contains_the_set(P, seed):
    rng = random.Random(seed)
    closure = euclidean_closure(P)
    for p in flatten(P):
        assert any(p.subset_of(c) for c in closure)
        x = p.sample(rng, 4)
        assert any(c.contains(x) for c in closure)
    for c in closure:
        assert c.is_closed_form()

@given(polyhedra)
def test_faces_are_consistent(P):
    fs = faces(P)
    if P.is_empty():
        assert fs == []
        return
    assert any(F.same_set(P) for F in fs)
    for F in fs:
        assert F.subset_of(P)
    for F, G in itertools.combinations(fs, 2):
        inter = F.intersect(G)
        if not inter.is_empty():
            assert any(inter.same_set(E) for E in fs)

@given(polyhedra)
def test_canonical_is_stable(P):
    C = P.canonical()
    assert C.same_set(P)
    assert C.canonical() == C

# exhaustive grid oracle for emptiness -----------------------------------------------------

GRID = sorted({Fraction(p, q) for q in range(1, 9) for p in range(-2 * q, 2 * q + 1)})
WIDE = sorted({Fraction(p, q) for q in range(1, 9) for p in range(-4 * q, 4 * q + 1)})

def _rank_one_instance(rng):
    cons = [half(s, f"({b})", r) for s, b, r in
            [((1, 0), 2, "<="), ((1, 0), -2, ">="), ((0, 1), 2, "<="), ((0, 1), -2, ">=")]]
    for _ in range(rng.randint(1, 4)):
        slope = (rng.choice((-1, 0, 1)), rng.choice((-1, 1)))
        cons.append(half(slope, f"({rng.randint(-2, 2)})", rng.choice((">=", ">", "="))))
    return LexPolyhedron(cons, 1, 2)

def _rank_two_instance(rng):
    cons = [half((1,), "(-2,0)", ">="), half((1,), "(2,0)", "<=")]
    for _ in range(rng.randint(1, 4)):
        rhs = f"({Fraction(rng.randint(-3, 3), 2)},{Fraction(rng.randint(-4, 4), 2)})"
        cons.append(half((rng.choice((-2, -1, 1, 2)),), rhs, rng.choice((">=", ">", "="))))
    return LexPolyhedron(cons, 2, 1)

def _grid_nonempty(P):
    # scaled by 840 = lcm(1..8) so every grid coordinate is an integer
    cons = [(h.slope, tuple(int(c * 840) for c in h.rhs.coords), h.rel) for h in P.constraints]
    if P.k == 1:
        cands = (((a,), (b,)) for a in GRID for b in GRID)
    else:
        cands = (((a, b),) for a in GRID for b in WIDE)
    for w in cands:
        w = [tuple(int(c * 840) for c in x) for x in w]
        ok = True
        for slope, rhs, rel in cons:
            v = tuple(sum(u * x[c] for u, x in zip(slope, w)) for c in range(P.k))
            if (rel == EQ and v != rhs) or (rel == GE and v < rhs) or (rel == ">" and v <= rhs):
                ok = False
                break
        if ok:
            return True
    return False


@pytest.mark.parametrize("maker", [_rank_one_instance, _rank_two_instance])
def test_is_empty_matches_grid_search(maker):
    rng = random.Random(2024)
    for _ in range(30):
        P = maker(rng)
        assert is_empty(P) == (not _grid_nonempty(P)), P
