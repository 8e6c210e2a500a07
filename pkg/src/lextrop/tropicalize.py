"""Tropical hypersurfaces of valuated Laurent polynomials over R^(k)."""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .hahnseries import HahnSeries, nu_mon
from .lexgroup import INF, LexValue, RankMismatch, lex_min, pair, project
from .linsys import EQ, GE
from .polyhedra import EuclideanPiece, LexComplex, LexHalfspace, LexPolyhedron, _drop_subsumed

__all__ = [
    "ValuatedPolynomial",
    "trop_membership",
    "trop_hypersurface",
    "banerjee_trop",
    "trop_project",
    "lift_point",
    "extended_trop_membership",
    "monomial_valuation",
    "tie_cell",
]

Exponent = tuple[int, ...]


class ValuatedPolynomial:
    """Laurent polynomial known through the valuations of its coefficients.

    When built from Hahn series coefficients the series are kept, and products and
    sums are computed in the ring; otherwise they follow min-plus rules.
    """

    def __init__(
        self,
        terms: Mapping[Sequence[int], LexValue],
        k: int | None = None,
        d: int | None = None,
        coefficients: Mapping[Exponent, HahnSeries] | None = None,
    ):
        items = [(tuple(int(x) for x in e), v) for e, v in terms.items()]
        if k is None:
            if not items:
                raise ValueError("rank of the zero polynomial must be given")
            k = items[0][1].rank
        if d is None:
            if not items:
                raise ValueError("dimension of the zero polynomial must be given")
            d = len(items[0][0])
        for e, v in items:
            if len(e) != d:
                raise ValueError(f"exponent {e} does not have dimension {d}")
            if v.is_inf:
                raise ValueError(f"term {e} has infinite valuation; drop zero coefficients instead")
            if v.rank != k:
                raise RankMismatch(f"valuation {v} of term {e} does not have rank {k}")
        self.k = k
        self.d = d
        self.terms: tuple[tuple[Exponent, LexValue], ...] = tuple(sorted(items))
        self.coefficients = dict(coefficients) if coefficients is not None else None

    @classmethod
    def from_hahn(cls, coefficients: Mapping[Sequence[int], HahnSeries], k: int | None = None, d: int | None = None):
        coeffs = {tuple(e): c for e, c in coefficients.items() if not c.is_zero()}
        if k is None and coefficients:
            k = next(iter(coefficients.values())).rank
        return cls({e: nu_mon(c) for e, c in coeffs.items()}, k, d, coefficients=coeffs)

    @property
    def exponents(self) -> tuple[Exponent, ...]:
        return tuple(e for e, _ in self.terms)

    def valuation(self, u: Exponent) -> LexValue:
        return dict(self.terms).get(tuple(u), INF)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ValuatedPolynomial):
            return NotImplemented
        return (self.k, self.d, self.terms) == (other.k, other.d, other.terms)

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {v}" for e, v in self.terms)
        return f"ValuatedPolynomial({{{body}}}, k={self.k}, d={self.d})"

    def weights(self, w: Sequence[LexValue]) -> list[tuple[Exponent, LexValue]]:
        if len(w) != self.d:
            raise ValueError(f"point has dimension {len(w)}, polynomial has {self.d}")
        return [(e, v + pair(e, w, self.k)) for e, v in self.terms]

    def truncate(self, j: int) -> "ValuatedPolynomial":
        """Same support with every valuation projected to rank j."""
        if not 0 < j <= self.k:
            raise ValueError(f"projection rank must be in 1..{self.k}, got {j}")
        return ValuatedPolynomial({e: project(v, j) for e, v in self.terms}, j, self.d)

    def tail(self, j: int) -> "ValuatedPolynomial":
        """Same support keeping only the valuation coordinates after the first j."""
        return ValuatedPolynomial({e: LexValue(v.coords[j:]) for e, v in self.terms}, self.k - j, self.d)

    def restrict(self, exponents: Iterable[Exponent]) -> "ValuatedPolynomial":
        keep = set(exponents)
        coeffs = None
        if self.coefficients is not None:
            coeffs = {e: c for e, c in self.coefficients.items() if e in keep}
        return ValuatedPolynomial({e: v for e, v in self.terms if e in keep}, self.k, self.d, coeffs)

    def _check(self, other: "ValuatedPolynomial") -> None:
        if (self.k, self.d) != (other.k, other.d):
            raise RankMismatch("polynomials live over different ranks or dimensions")

    def __add__(self, other: "ValuatedPolynomial") -> "ValuatedPolynomial":
        self._check(other)
        if self.coefficients is not None and other.coefficients is not None:
            acc = dict(self.coefficients)
            for e, c in other.coefficients.items():
                acc[e] = acc[e] + c if e in acc else c
            return ValuatedPolynomial.from_hahn(acc, self.k, self.d)
        acc = dict(self.terms)
        for e, v in other.terms:
            acc[e] = min(acc[e], v) if e in acc else v
        return ValuatedPolynomial(acc, self.k, self.d)

    def __mul__(self, other: "ValuatedPolynomial") -> "ValuatedPolynomial":
        self._check(other)
        if self.coefficients is not None and other.coefficients is not None:
            acc: dict[Exponent, HahnSeries] = {}
            for (e1, c1), (e2, c2) in itertools.product(self.coefficients.items(), other.coefficients.items()):
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
            return ValuatedPolynomial.from_hahn(acc, self.k, self.d)
        acc2: dict[Exponent, LexValue] = {}
        for (e1, v1), (e2, v2) in itertools.product(self.terms, other.terms):
            e = tuple(a + b for a, b in zip(e1, e2))
            acc2[e] = min(acc2[e], v1 + v2) if e in acc2 else v1 + v2
        return ValuatedPolynomial(acc2, self.k, self.d)


def trop_membership(p: ValuatedPolynomial, w: Sequence[LexValue]) -> bool:
    """True iff the lex-minimal term weight is attained by at least two terms."""
    ws = [v for _, v in p.weights(w)]
    if len(ws) < 2:
        return False
    m = lex_min(ws)
    return sum(1 for v in ws if v == m) >= 2


def tie_cell(p: ValuatedPolynomial, u: Exponent, v: Exponent) -> LexPolyhedron:
    """Points where terms u and v tie and no term is smaller."""
    nu_u, nu_v = p.valuation(u), p.valuation(v)
    cons = [LexHalfspace(tuple(a - b for a, b in zip(u, v)), nu_v - nu_u, EQ)]
    for m, nu_m in p.terms:
        if m in (u, v):
            continue
        cons.append(LexHalfspace(tuple(a - b for a, b in zip(m, u)), nu_u - nu_m, GE))
    return LexPolyhedron(tuple(cons), p.k, p.d)


def _maximal(cells: list[LexPolyhedron]) -> list[LexPolyhedron]:
    unique: list[LexPolyhedron] = []
    for c in cells:
        if c not in unique:
            unique.append(c)
    keep = []
    for i, P in enumerate(unique):
        dominated = False
        for j, Q in enumerate(unique):
            if i != j and P.subset_of(Q) and (j < i or not Q.subset_of(P)):
                dominated = True
                break
        if not dominated:
            keep.append(P)
    return sorted(keep, key=lambda P: P.lines())


def trop_hypersurface(p: ValuatedPolynomial, check: bool = False) -> LexComplex:
    """Maximal cells of trop(V(p)), one per tying term pair, canonical and sorted.

    Pairwise intersections are faces by construction (they are cut out by making
    more term inequalities tight); pass ``check=True`` to verify that structurally.
    """
    cells = []
    for u, v in itertools.combinations(p.exponents, 2):
        cell = tie_cell(p, u, v)
        if not cell.is_empty():
            cells.append(cell.canonical())
    return LexComplex(_maximal(cells), p.k, p.d, check=check)


def banerjee_trop(p: ValuatedPolynomial) -> list[EuclideanPiece]:
    """Euclidean closure of the flattened hypersurface, as canonical closed pieces."""
    pieces: list[EuclideanPiece] = []
    for cell in trop_hypersurface(p).cells:
        pieces.extend(cell.euclidean_closure())
    return _drop_subsumed(pieces)


def trop_project(p: ValuatedPolynomial, j: int) -> tuple[LexComplex, LexComplex]:
    if not 0 < j <= p.k:
        raise ValueError(f"projection rank must be in 1..{p.k}, got {j}")
    return trop_hypersurface(p), trop_hypersurface(p.truncate(j))


def lift_point(p: ValuatedPolynomial, w: Sequence[LexValue], j: int) -> tuple[LexValue, ...] | None:
    """Extend a member point of the rank-j truncation to a rank-k member point of p.

    Only the terms attaining the projected minimum matter; among them a tail point
    is found where two of them tie with no smaller tail weight.
    """
    pj = p.truncate(j)
    if not trop_membership(pj, w):
        return None
    if j == p.k:
        return tuple(w)
    weights = pj.weights(w)
    low = lex_min(v for _, v in weights)
    tied = [e for e, v in weights if v == low]
    tail = p.restrict(tied).tail(j)
    for u, v in itertools.combinations(tail.exponents, 2):
        t = tie_cell(tail, u, v).witness()
        if t is not None:
            lifted = tuple(LexValue(wi.coords + ti.coords) for wi, ti in zip(w, t))
            return lifted
    return None


def _check_orthant(p: ValuatedPolynomial) -> None:
    for e in p.exponents:
        if any(x < 0 for x in e):
            raise ValueError(f"negative exponent {e} outside the orthant patch")


def extended_trop_membership(p: ValuatedPolynomial, w: Sequence[LexValue]) -> bool:
    """Membership for points with INF coordinates, evaluated on their stratum.

    Terms with a positive exponent on an INF coordinate vanish on the stratum; the
    finite tie criterion is applied to the terms that remain.
    """
    _check_orthant(p)
    if len(p) == 0:
        raise ValueError("the zero polynomial has no tropicalization")
    if len(w) != p.d:
        raise ValueError(f"point has dimension {len(w)}, polynomial has {p.d}")
    infinite = [i for i, x in enumerate(w) if x.is_inf]
    alive = [e for e in p.exponents if all(e[i] == 0 for i in infinite)]
    if not alive:
        return True
    ws = [p.valuation(e) + pair(e, w, p.k) for e in alive]
    if len(ws) < 2:
        return False
    m = lex_min(ws)
    return sum(1 for v in ws if v == m) >= 2


def monomial_valuation(p: ValuatedPolynomial, omega: Sequence[LexValue]) -> LexValue:
    """min over terms of valuation + <u, omega>, INF-absorbing; INF for the zero polynomial."""
    _check_orthant(p)
    if len(omega) != p.d:
        raise ValueError(f"point has dimension {len(omega)}, polynomial has {p.d}")
    return lex_min(v + pair(e, omega, p.k) for e, v in p.terms)
