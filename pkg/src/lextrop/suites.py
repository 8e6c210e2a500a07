"""Random instance generators and property suites shared by the tests and ``lextrop check``."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import networkx as nx

from .hahnseries import HahnSeries, nu_mon
from .lexgroup import LexValue, lex_min, project
from .linsys import EQ, GE, GT
from .paths import build_adjacency, connect, verify_path
from .polyhedra import LexComplex, LexHalfspace, LexPolyhedron, _rref, unflatten_point
from .skeleton import Edge, MetricGraph, edge_valuation, faithful_injectivity_check
from .tropicalize import ValuatedPolynomial, lift_point, trop_hypersurface, trop_membership

__all__ = [
    "SuiteResult",
    "random_lexvalue",
    "random_hahn",
    "random_polynomial",
    "random_polyhedron",
    "sample_points",
    "member_points",
    "valuation_axioms",
    "oracle_equivalence",
    "path_connectivity",
    "projection_tower",
    "closure_limit_points",
    "skeleton_suite",
    "two_cycle_fixture",
    "run_all",
]


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def line(self, timing: bool = True) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures"
        return text + f", {self.seconds:.2f}s" if timing else text


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def run(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# generators ------------------------------------------------------------------


def _small(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    if rng.random() < 0.2:
        return Fraction(rng.randint(2 * lo, 2 * hi), 2)
    return Fraction(rng.randint(lo, hi))


def random_lexvalue(rng: random.Random, k: int, lo: int = -3, hi: int = 3) -> LexValue:
    return LexValue(_small(rng, lo, hi) for _ in range(k))


def random_hahn(rng: random.Random, k: int, max_terms: int = 6) -> HahnSeries:
    """Nonzero series with 1..max_terms terms, coefficients in [-9, 9], small exponents."""
    while True:
        terms = [
            (LexValue(rng.randint(-2, 2) for _ in range(k)), rng.choice([c for c in range(-9, 10) if c]))
            for _ in range(rng.randint(1, max_terms))
        ]
        f = HahnSeries(terms, k)
        if not f.is_zero():
            return f


def random_polynomial(rng: random.Random, k: int | None = None, d: int | None = None, max_terms: int = 6) -> ValuatedPolynomial:
    k = k or rng.randint(1, 3)
    d = d or rng.randint(1, 3)
    n = rng.randint(2, max_terms)
    exps: set[tuple[int, ...]] = set()
    while len(exps) < n:
        exps.add(tuple(rng.randint(-2, 2) for _ in range(d)))
        if len(exps) == 5 ** d:
            break
    terms = {e: LexValue(rng.randint(-2, 2) for _ in range(k)) for e in sorted(exps)}
    return ValuatedPolynomial(terms, k, d)


def random_polyhedron(rng: random.Random, k: int, d: int, max_constraints: int = 3) -> LexPolyhedron:
    cons = []
    for _ in range(rng.randint(1, max_constraints)):
        slope = tuple(rng.randint(-2, 2) for _ in range(d))
        if not any(slope):
            slope = (1,) + slope[1:]
        rel = rng.choice([GE, GE, GT, GT, EQ])
        cons.append(LexHalfspace(slope, random_lexvalue(rng, k, -2, 2), rel))
    return LexPolyhedron(tuple(cons), k, d)


def member_points(rng: random.Random, C: LexComplex, n: int, box: int = 6) -> list[tuple[LexValue, ...]]:
    """Random points drawn from random flattened pieces of random cells."""
    if not C.cells:
        return []
    out = []
    for _ in range(n):
        w = rng.choice(C.cells).sample(rng, box)
        if w is not None:
            out.append(w)
    return out


def sample_points(rng: random.Random, C: LexComplex, n: int) -> list[tuple[LexValue, ...]]:
    """A mix of cell samples, their perturbations at a random level, and free random points."""
    pts = []
    members = member_points(rng, C, n)
    for i in range(n):
        r = i % 3
        if r == 0 and members:
            pts.append(members[i % len(members)])
        elif r == 1 and members:
            w = list(members[i % len(members)])
            j = rng.randrange(C.d)
            c = rng.randrange(C.k)
            delta = rng.choice([Fraction(1, 8), Fraction(-1, 8), Fraction(1), Fraction(-1)])
            w[j] = w[j] + LexValue.unit(C.k, c).scale(delta)
            pts.append(tuple(w))
        else:
            pts.append(tuple(random_lexvalue(rng, C.k, -4, 4) for _ in range(C.d)))
    return pts


# suites ------------------------------------------------------------------------


@_timed
def valuation_axioms(rng: random.Random, pairs: int = 1000) -> SuiteResult:
    """Multiplicativity and the ultrametric law of nu_mon on random series pairs."""
    res = SuiteResult("valuation axioms")
    for _ in range(pairs):
        k = rng.randint(1, 3)
        f, g = random_hahn(rng, k), random_hahn(rng, k)
        if rng.random() < 0.25:
            # equal valuations with cancelling leading terms
            lead, c = f.terms[0]
            g = HahnSeries([(lead, -c)] + [(e, a) for e, a in g.terms if e > lead], k)
        vf, vg = nu_mon(f), nu_mon(g)
        res.cases += 1
        if nu_mon(f * g) != vf + vg:
            res.fail(f"nu_mon({f} * {g}) = {nu_mon(f * g)} != {vf + vg}")
        vs = nu_mon(f + g)
        if vs < lex_min((vf, vg)):
            res.fail(f"nu_mon({f} + {g}) = {vs} below the minimum")
        if vf != vg and vs != lex_min((vf, vg)):
            res.fail(f"nu_mon({f} + {g}) = {vs} differs from the strict minimum")
    return res


@_timed
def oracle_equivalence(rng: random.Random, polys: int = 200, points: int = 50) -> SuiteResult:
    """Tie-criterion membership agrees with membership in some cell of the hypersurface."""
    res = SuiteResult("oracle equivalence")
    for _ in range(polys):
        p = random_polynomial(rng)
        C = trop_hypersurface(p)
        for w in sample_points(rng, C, points):
            res.cases += 1
            if trop_membership(p, w) != C.contains(w):
                res.fail(f"{p!r} at {[str(x) for x in w]}")
    return res


def connected_corpus(rng: random.Random, count: int, k_min: int = 1) -> list[tuple[ValuatedPolynomial, LexComplex, object]]:
    """Random polynomials whose hypersurface has a connected, nonempty adjacency graph."""
    out = []
    while len(out) < count:
        p = random_polynomial(rng, k=rng.randint(k_min, 3))
        C = trop_hypersurface(p)
        if not C.cells:
            continue
        G = build_adjacency(C)
        if nx.is_connected(G):
            out.append((p, C, G))
    return out


@_timed
def path_connectivity(rng: random.Random, polys: int = 50, pairs: int = 20) -> SuiteResult:
    """connect succeeds on connected complexes and every certificate verifies."""
    res = SuiteResult("path connectivity")
    for p, C, G in connected_corpus(rng, polys):
        pts = member_points(rng, C, 2 * pairs)
        for w1, w2 in zip(pts[::2], pts[1::2]):
            res.cases += 1
            try:
                path = connect(C, w1, w2, adjacency=G)
            except ValueError as exc:
                res.fail(f"{p!r}: connect raised {exc}")
                continue
            check = verify_path(path, C, w1, w2)
            if not check:
                res.fail(f"{p!r}: {check.reason}")
    return res


@_timed
def projection_tower(rng: random.Random, polys: int = 50, points: int = 20, lifts: int = 100) -> SuiteResult:
    """Projected members stay members; truncated members lift back to full rank."""
    res = SuiteResult("projection tower")
    corpus = connected_corpus(rng, polys, k_min=2)
    for p, C, _ in corpus:
        for w in member_points(rng, C, points):
            for j in range(1, p.k):
                res.cases += 1
                wj = tuple(project(x, j) for x in w)
                if not trop_membership(p.truncate(j), wj):
                    res.fail(f"{p!r}: projection to rank {j} of {[str(x) for x in w]} is not a member")
    done = 0
    while done < lifts:
        p, _, _ = corpus[done % len(corpus)]
        j = rng.randint(1, p.k - 1)
        Cj = trop_hypersurface(p.truncate(j))
        for wj in member_points(rng, Cj, 1):
            done += 1
            res.cases += 1
            w = lift_point(p, wj, j)
            if w is None or not trop_membership(p, w) or tuple(project(x, j) for x in w) != wj:
                res.fail(f"{p!r}: no lift of {[str(x) for x in wj]} from rank {j}")
    return res


def _null_basis(eq_rows: list[tuple[Fraction, ...]], n: int) -> list[tuple[Fraction, ...]]:
    """Integer-scaled basis of the null space of the given rows."""
    basis, pivots = _rref([list(r) + [Fraction(0)] for r in eq_rows], n)
    free = [j for j in range(n) if j not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(basis, pivots):
            v[pc] = -row[f]
        out.append(tuple(v))
    return out


def approximable(P: LexPolyhedron, x: tuple[Fraction, ...], eps: Fraction, directions: list[tuple[Fraction, ...]]) -> bool:
    """Some point of P lies within Euclidean distance eps of x, found among x + s*v."""
    k, d = P.k, P.d
    for v in directions:
        norm2 = sum(c * c for c in v)
        if not norm2:
            continue
        # s*|v| <= eps using an integer upper bound for |v|
        bound = 1
        while bound * bound < norm2:
            bound += 1
        for s in (eps / bound, eps / (2 * bound), eps / (8 * bound)):
            y = tuple(a + s * b for a, b in zip(x, v))
            if sum((a - b) ** 2 for a, b in zip(x, y)) <= eps * eps and P.contains(unflatten_point(y, k, d)):
                return True
    return False


def _grid_directions(piece_rows, n: int) -> list[tuple[Fraction, ...]]:
    """Null-space basis vectors of the equalities, with signs and pairwise sums."""
    nb = _null_basis([c for c, _, rel in piece_rows if rel == EQ], n)
    dirs = []
    for b in nb:
        dirs += [b, tuple(-x for x in b)]
    for b1, b2 in itertools.combinations(nb, 2):
        for s1, s2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            dirs.append(tuple(s1 * x + s2 * y for x, y in zip(b1, b2)))
    return dirs


@_timed
def closure_limit_points(rng: random.Random, polys: int = 20, points: int = 30) -> SuiteResult:
    """Every sampled closure point is approached by points of P at every scale down to 2^-10.

    Candidate approximants are x + s*v for null-space grid directions v and for
    directions towards sampled points of a flattened piece whose closure holds x;
    membership of each candidate is decided by lex comparison, not by flattening.
    """
    res = SuiteResult("closure limit points")
    made = 0
    while made < polys:
        P = random_polyhedron(rng, rng.randint(1, 2), rng.randint(1, 2))
        if P.is_empty():
            continue
        made += 1
        closure = P.euclidean_closure()
        pieces = P.flatten()
        for _ in range(points):
            x = rng.choice(closure).sample(rng, 4)
            res.cases += 1
            if P.contains(unflatten_point(x, P.k, P.d)):
                continue
            sources = [Q for Q in pieces if Q.closure().contains(x)]
            if not sources:
                res.fail(f"{P}: closure point {x} lies in no relaxed piece")
                continue
            dirs = _grid_directions(sources[0].rows, sources[0].n)
            for Q in sources:
                for _ in range(3):
                    q = Q.sample(rng, 4)
                    dirs.append(tuple(b - a for a, b in zip(x, q)))
            for i in range(11):
                eps = Fraction(1, 2**i)
                if not approximable(P, x, eps, dirs):
                    res.fail(f"{P}: closure point {x} not approached within {eps}")
                    break
    return res


def two_cycle_fixture() -> tuple[MetricGraph, list[dict[str, ValuatedPolynomial]]]:
    """Two vertices joined by edges of lengths (1,0) and (2,0), with compatible charts.

    Edge 0 carries x0, y0 as coordinates; edge 1 carries x1, y1.  Across charts
    x1 = x0^2 and y1 = y0^2 on edge 0, and x0 = x1 + c, y0 = y1 + c on edge 1 with
    val(c) = (1,0); these agree at both vertices.
    """
    z, one = LexValue((0, 0)), LexValue((1, 0))

    def vp(terms):
        return ValuatedPolynomial(terms, 2, 2)

    G = MetricGraph(("v0", "v1"), (Edge("v0", "v1", one), Edge("v0", "v1", LexValue((2, 0)))), 2)
    charts = [
        {"x0": vp({(1, 0): z}), "y0": vp({(0, 1): z}), "x1": vp({(2, 0): z}), "y1": vp({(0, 2): z})},
        {"x0": vp({(1, 0): z, (0, 0): one}), "y0": vp({(0, 1): z, (0, 0): one}), "x1": vp({(1, 0): z}), "y1": vp({(0, 1): z})},
    ]
    return G, charts


def _random_xy(rng: random.Random, k: int) -> ValuatedPolynomial:
    n = rng.randint(1, 4)
    terms = {(rng.randint(0, 3), rng.randint(0, 3)): random_lexvalue(rng, k, -2, 2) for _ in range(n)}
    return ValuatedPolynomial(terms, k, 2)


@_timed
def skeleton_suite(rng: random.Random, pairs: int = 200) -> SuiteResult:
    """Valuation laws along edges, and the injectivity fixtures."""
    res = SuiteResult("skeleton")
    G, charts = two_cycle_fixture()
    triangle = MetricGraph((0, 1, 2), tuple(Edge(i, (i + 1) % 3, LexValue((1, 0))) for i in range(3)), 2)
    for graph in (G, triangle):
        for _ in range(pairs):
            e = rng.choice(graph.edges)
            i = rng.randint(0, 8)
            omega = e.length.scale(Fraction(i, 8))
            if 0 < i < 8:
                omega = omega + LexValue((0, rng.randint(-3, 3)))
            g, h = _random_xy(rng, 2), _random_xy(rng, 2)
            vg, vh = edge_valuation(g, e.length, omega), edge_valuation(h, e.length, omega)
            res.cases += 1
            if edge_valuation(g * h, e.length, omega) != vg + vh:
                res.fail(f"product law fails for {g!r}, {h!r} at {omega}")
            if edge_valuation(g + h, e.length, omega) < lex_min((vg, vh)):
                res.fail(f"sum law fails for {g!r}, {h!r} at {omega}")
    res.cases += 1
    if not faithful_injectivity_check(G, charts, 4).injective:
        res.fail("two-cycle fixture is not injective")
    res.cases += 1
    if faithful_injectivity_check(G, charts, 4, fns=["x1", "y1"]).witness is None:
        res.fail("degenerate collection produced no collision witness")
    return res


def run_all(seed: int = 0, limit: int | None = None) -> list[SuiteResult]:
    """Every suite at its default size, each with its own seeded generator.

    ``limit`` caps the number of random instances per suite.
    """

    def n(x: int) -> int:
        return x if limit is None else max(1, min(x, limit))

    return [
        valuation_axioms(random.Random(seed), n(1000)),
        oracle_equivalence(random.Random(seed + 1), n(200), 50),
        path_connectivity(random.Random(seed + 2), n(50), 20),
        projection_tower(random.Random(seed + 3), n(50), 20, n(100)),
        closure_limit_points(random.Random(seed + 4), n(20), 30),
        skeleton_suite(random.Random(seed + 5), n(200)),
    ]
