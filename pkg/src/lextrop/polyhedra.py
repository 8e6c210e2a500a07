"""Rational lex polyhedra in (R^(k))^d, their flattenings to R^(k*d), and complexes.

The c-th coordinate of the pairing <w, u> only involves the c-th coordinates of the
points w_i, so a lex constraint splits into one ordinary linear row per level: the
rows at level c apply only to the constraints that were tight at every level before c.
Feasibility is decided level by level on d-variable systems.

A point w = (w_1, ..., w_d) flattens to R^(k*d) with w_i[c] at index i*k + c.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linsys
from .linsys import EQ, GE, GT, Row
from .lexgroup import LexValue, ParseError, RankMismatch, pair, parse_lexvalue

__all__ = [
    "LexHalfspace",
    "LexPolyhedron",
    "LexComplex",
    "EuclideanPiece",
    "ComplexError",
    "contains",
    "flatten",
    "euclidean_closure",
    "intersect",
    "faces",
    "is_empty",
    "flatten_point",
    "unflatten_point",
]

Point = tuple[LexValue, ...]

_REL_ORDER = {EQ: 0, GE: 1, GT: 2}


class ComplexError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _primitive_factor(vals: Sequence[Fraction]) -> Fraction:
    """Positive factor turning ``vals`` into coprime integers (1 for the zero vector)."""
    den = 1
    for v in vals:
        den = _lcm(den, v.denominator)
    g = 0
    for v in vals:
        g = math.gcd(g, int(v * den))
    return Fraction(den, g) if g else Fraction(1)


def flatten_point(w: Sequence[LexValue], k: int) -> tuple[Fraction, ...]:
    out = []
    for wi in w:
        if wi.is_inf or wi.rank != k:
            raise RankMismatch(f"point coordinate {wi} is not a finite rank-{k} value")
        out.extend(wi.coords)
    return tuple(out)


def unflatten_point(x: Sequence[Fraction], k: int, d: int) -> Point:
    return tuple(LexValue(x[i * k : (i + 1) * k]) for i in range(d))


@dataclass(frozen=True)
class LexHalfspace:
    """The set of w with <w, slope> REL rhs, compared lexicographically."""

    slope: tuple[int, ...]
    rhs: LexValue
    rel: str = GE

    def __post_init__(self):
        if self.rel not in linsys.RELATIONS:
            raise ValueError(f"relation must be one of {linsys.RELATIONS}, got {self.rel!r}")
        if self.rhs.is_inf and self.rel != EQ:
            raise ValueError("an infinite constraint is only allowed with '='")
        object.__setattr__(self, "slope", tuple(int(u) for u in self.slope))

    @classmethod
    def make(cls, slope: Sequence[int], rhs: LexValue, rel: str = ">=") -> "LexHalfspace":
        """Like the constructor, but also accepts '<=' and '<' by negating both sides."""
        if rel in ("<=", "<"):
            return cls(tuple(-u for u in slope), -rhs, GE if rel == "<=" else GT)
        if rel == "==":
            rel = EQ
        return cls(tuple(slope), rhs, rel)

    @property
    def dim(self) -> int:
        return len(self.slope)

    def value(self, w: Sequence[LexValue]) -> LexValue:
        k = self.rhs.rank if not self.rhs.is_inf else next(x.rank for x in w if not x.is_inf)
        return pair(self.slope, w, k)

    def holds(self, w: Sequence[LexValue]) -> bool:
        if len(w) != len(self.slope):
            raise ValueError(f"point has dimension {len(w)}, constraint has {len(self.slope)}")
        v = self.value(w)
        if self.rel == EQ:
            return v == self.rhs
        if self.rel == GT:
            return v > self.rhs
        return v >= self.rhs

    def boundary(self) -> "LexHalfspace":
        return LexHalfspace(self.slope, self.rhs, EQ)

    def strict(self) -> "LexHalfspace":
        return LexHalfspace(self.slope, self.rhs, GT)

    def complement(self) -> list["LexHalfspace"]:
        """Halfspaces whose union is the complement of this one."""
        neg = LexHalfspace(tuple(-u for u in self.slope), -self.rhs, GT)
        if self.rel == EQ:
            return [self.strict(), neg]
        if self.rel == GT:
            return [LexHalfspace(neg.slope, neg.rhs, GE)]
        return [neg]

    def level_row(self, c: int, rel: str | None = None) -> Row:
        return (
            tuple(Fraction(u) for u in self.slope),
            self.rhs.coords[c],
            self.rel if rel is None else rel,
        )

    def canonical(self) -> "LexHalfspace":
        """Primitive integer slope; equalities get a positive leading slope entry."""
        if self.rhs.is_inf:
            return self
        vals = [Fraction(u) for u in self.slope]
        f = _primitive_factor(vals)
        if self.rel == EQ and any(self.slope) and next(u for u in self.slope if u) < 0:
            f = -f
        return LexHalfspace(tuple(int(u * f) for u in vals), self.rhs.scale(f), self.rel)

    def sort_key(self):
        return (_REL_ORDER[self.rel], self.slope, () if self.rhs.is_inf else self.rhs.coords)

    def __str__(self) -> str:
        return ",".join(str(u) for u in self.slope) + f" {self.rel} {self.rhs}"

    @classmethod
    def parse(cls, text: str) -> "LexHalfspace":
        for rel in (">=", "<=", "==", "=", ">", "<"):
            idx = text.find(rel)
            if idx >= 0:
                break
        else:
            raise ParseError("expected a relation", text, 0)
        lhs, rhs = text[:idx], text[idx + len(rel) :]
        try:
            slope = tuple(int(s) for s in lhs.split(","))
        except ValueError:
            raise ParseError("expected comma-separated integer slope", text, 0) from None
        return cls.make(slope, parse_lexvalue(rhs), rel)


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce pivoting only within the first ``ncols`` entries."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def _reduce(vec: list[Fraction], basis: list[list[Fraction]], pivots: list[int]) -> list[Fraction]:
    for row, col in zip(basis, pivots):
        f = vec[col]
        if f:
            vec = [a - f * b for a, b in zip(vec, row)]
    return vec


# ---------------------------------------------------------------------------
# Euclidean pieces


@dataclass(frozen=True)
class EuclideanPiece:
    """A convex subset of R^n cut out by exact rational rows, each strict or not."""

    rows: tuple[Row, ...]
    n: int

    def is_feasible(self) -> bool:
        return linsys.solve(self.rows, self.n) is not None

    def witness(self) -> tuple[Fraction, ...] | None:
        x = linsys.solve(self.rows, self.n)
        return None if x is None else tuple(x)

    def sample(self, rng: random.Random, box: int = 6) -> tuple[Fraction, ...] | None:
        x = linsys.solve(self.rows, self.n, linsys.random_chooser(rng, box))
        return None if x is None else tuple(x)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(linsys.holds(r, x) for r in self.rows)

    def closure(self) -> "EuclideanPiece":
        return EuclideanPiece(tuple(linsys.relax(r) for r in self.rows), self.n)

    def is_closed_form(self) -> bool:
        return all(r[2] != GT for r in self.rows)

    def subset_of(self, other: "EuclideanPiece") -> bool:
        return linsys.contained(self.rows, other.rows, self.n)

    def same_set(self, other: "EuclideanPiece") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def canonical(self) -> "EuclideanPiece":
        """Implicit equalities made explicit, equalities in reduced row echelon form,
        inequalities reduced modulo equalities, redundant rows dropped, rows sorted."""
        n = self.n
        if not self.is_feasible():
            return EuclideanPiece(((tuple(Fraction(0) for _ in range(n)), Fraction(0), GT),), n)
        rows = list(self.rows)
        for i, (c, b, rel) in enumerate(rows):
            if rel == GE and linsys.solve(rows[:i] + [(c, b, GT)] + rows[i + 1 :], n) is None:
                rows[i] = (c, b, EQ)
        eqs = [list(c) + [b] for c, b, rel in rows if rel == EQ]
        basis, pivots = _rref(eqs, n)
        ineqs = []
        for c, b, rel in rows:
            if rel == EQ:
                continue
            vec = _reduce(list(c) + [b], basis, pivots)
            if any(vec[:n]):
                ineqs.append((tuple(vec[:n]), vec[n], rel))
        ineqs = linsys._dedupe(linsys._normalize(*r) for r in ineqs)
        eq_rows = [(tuple(r[:n]), r[n], EQ) for r in basis]
        i = 0
        while i < len(ineqs):
            others = eq_rows + ineqs[:i] + ineqs[i + 1 :]
            if linsys.implies(others, ineqs[i], n):
                ineqs.pop(i)
            else:
                i += 1
        out = []
        for c, b, rel in eq_rows + ineqs:
            f = _primitive_factor(list(c))
            if rel == EQ and next(x for x in c if x) < 0:
                f = -f
            out.append((tuple(x * f for x in c), b * f, rel))
        out.sort(key=lambda r: (_REL_ORDER[r[2]], tuple(-x for x in r[0]), r[1]))
        return EuclideanPiece(tuple(out), n)

    def lines(self) -> list[str]:
        return [",".join(str(x) for x in c) + f" {rel} {b}" for c, b, rel in self.rows]

    def __str__(self) -> str:
        return "{" + "; ".join(self.lines()) + "}"

    @classmethod
    def from_lines(cls, lines: Iterable[str], n: int) -> "EuclideanPiece":
        rows = []
        for line in lines:
            for rel in (">=", ">", "="):
                idx = line.find(rel)
                if idx >= 0:
                    break
            else:
                raise ParseError("expected a relation", line, 0)
            try:
                coeffs = [Fraction(s) for s in line[:idx].split(",")]
                rhs = Fraction(line[idx + len(rel) :].strip())
            except ValueError:
                raise ParseError("malformed linear row", line, 0) from None
            if len(coeffs) != n:
                raise ParseError(f"expected {n} coefficients", line, 0)
            rows.append((tuple(coeffs), rhs, rel))
        return cls(tuple(rows), n)


# ---------------------------------------------------------------------------
# lex polyhedra


def _level_rows(cons: Sequence[LexHalfspace], active: Sequence[int], c: int, last: bool, strict=()) -> list[Row]:
    rows = []
    for m in active:
        h = cons[m]
        if h.rel == EQ:
            rel = EQ
        elif m in strict or (last and h.rel == GT):
            rel = GT
        else:
            rel = GE
        rows.append(h.level_row(c, rel))
    return rows


def _lex_solve(cons: Sequence[LexHalfspace], k: int, d: int) -> Point | None:
    """Decide feasibility exactly and return a witness.

    At each level a relative-interior point of the level system is chosen, which
    keeps tight only the constraints that are tight on the whole level system;
    any other choice can only carry more constraints down to the next level.
    """
    active = list(range(len(cons)))
    levels: list[list[Fraction]] = []
    for c in range(k):
        last = c == k - 1
        base = linsys.solve(_level_rows(cons, active, c, last), d)
        if base is None:
            return None
        if last:
            levels.append(base)
            break
        tight = [m for m in active if cons[m].rel == EQ]
        pts = [base]
        for m in active:
            if cons[m].rel == EQ:
                continue
            x = linsys.solve(_level_rows(cons, active, c, last, strict=(m,)), d)
            if x is None:
                tight.append(m)
            else:
                pts.append(x)
        levels.append([sum(col, Fraction(0)) / len(pts) for col in zip(*pts)])
        active = sorted(tight)
        if not active:
            levels.extend([Fraction(0)] * d for _ in range(k - c - 1))
            break
    return tuple(LexValue(levels[c][i] for c in range(k)) for i in range(d))


def _lift_rows(rows: Sequence[Row], c: int, k: int, d: int) -> list[Row]:
    out = []
    for coeffs, rhs, rel in rows:
        full = [Fraction(0)] * (k * d)
        for i, a in enumerate(coeffs):
            full[i * k + c] = a
        out.append((tuple(full), rhs, rel))
    return out


@dataclass(frozen=True)
class LexPolyhedron:
    """Intersection of finitely many lex halfspaces in (R^(k))^d."""

    constraints: tuple[LexHalfspace, ...]
    k: int
    d: int
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.k < 1 or self.d < 1:
            raise ValueError("rank and dimension must be positive")
        for h in self.constraints:
            if h.dim != self.d:
                raise ValueError(f"constraint {h} does not have dimension {self.d}")
            if not h.rhs.is_inf and h.rhs.rank != self.k:
                raise RankMismatch(f"constraint {h} does not have rank {self.k}")

    @classmethod
    def whole(cls, k: int, d: int) -> "LexPolyhedron":
        return cls((), k, d)

    @classmethod
    def empty(cls, k: int, d: int) -> "LexPolyhedron":
        return cls((LexHalfspace((0,) * d, LexValue.zero(k), GT),), k, d)

    def _finite(self) -> None:
        if any(h.rhs.is_inf for h in self.constraints):
            raise ValueError("infinite constraints must be resolved before flattening")

    def with_constraints(self, extra: Iterable[LexHalfspace]) -> "LexPolyhedron":
        return LexPolyhedron(self.constraints + tuple(extra), self.k, self.d)

    # membership and feasibility ----------------------------------------------

    def contains(self, w: Sequence[LexValue]) -> bool:
        if len(w) != self.d:
            raise ValueError(f"point has dimension {len(w)}, polyhedron has {self.d}")
        return all(h.holds(w) for h in self.constraints)

    def witness(self) -> Point | None:
        if "witness" not in self._cache:
            self._finite()
            self._cache["witness"] = _lex_solve(self.constraints, self.k, self.d)
        return self._cache["witness"]

    def is_empty(self) -> bool:
        return self.witness() is None

    def subset_of(self, other: "LexPolyhedron") -> bool:
        w = self.witness()
        if w is None:
            return True
        if not other.contains(w):
            return False
        own = set(self.constraints)
        for h in other.constraints:
            if h in own or (h.rel == GE and (h.boundary() in own or h.strict() in own)):
                continue
            for comp in h.complement():
                if not self.with_constraints([comp]).is_empty():
                    return False
        return True

    def same_set(self, other: "LexPolyhedron") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def intersect(self, other: "LexPolyhedron") -> "LexPolyhedron":
        if (self.k, self.d) != (other.k, other.d):
            raise ValueError("polyhedra live in different ambient spaces")
        return self.with_constraints(other.constraints)

    # flattening ----------------------------------------------------------------

    def _level_pieces(self):
        """Yield per-level row lists of every nonempty flattened piece."""
        cons, k, d = self.constraints, self.k, self.d

        def rec(c, active, acc):
            last = c == k - 1
            eqs = [m for m in active if cons[m].rel == EQ]
            choosable = [m for m in active if cons[m].rel != EQ and not (last and cons[m].rel == GT)]
            for size in range(len(choosable) + 1):
                for chosen in itertools.combinations(choosable, size):
                    tied = set(eqs) | set(chosen)
                    rows = []
                    for m in active:
                        rows.append(cons[m].level_row(c, EQ if m in tied else GT))
                    if linsys.solve(rows, d) is None:
                        continue
                    if last or not tied:
                        yield acc + [(c, rows)]
                    else:
                        yield from rec(c + 1, sorted(tied), acc + [(c, rows)])

        if k == 0:
            return
        yield from rec(0, list(range(len(cons))), [])

    def flatten(self) -> list[EuclideanPiece]:
        if "flatten" not in self._cache:
            self._finite()
            k, d = self.k, self.d
            pieces = []
            for levels in self._level_pieces():
                rows = []
                for c, level_rows in levels:
                    rows.extend(_lift_rows(level_rows, c, k, d))
                pieces.append(EuclideanPiece(tuple(rows), k * d))
            self._cache["flatten"] = pieces
        return list(self._cache["flatten"])

    def euclidean_closure(self) -> list[EuclideanPiece]:
        closed = [p.closure().canonical() for p in self.flatten()]
        return _drop_subsumed(closed)

    def sample(self, rng: random.Random, box: int = 6) -> Point | None:
        pieces = self.flatten()
        if not pieces:
            return None
        x = rng.choice(pieces).sample(rng, box)
        return unflatten_point(x, self.k, self.d)

    # faces and canonical form ----------------------------------------------------

    def faces(self) -> list["LexPolyhedron"]:
        # a strict constraint is never attained on the set, so only ">=" rows can be tightened
        ineq = [i for i, h in enumerate(self.constraints) if h.rel == GE]
        found: list[LexPolyhedron] = []
        for size in range(len(ineq) + 1):
            for chosen in itertools.combinations(ineq, size):
                cons = tuple(h.boundary() if i in chosen else h for i, h in enumerate(self.constraints))
                face = LexPolyhedron(cons, self.k, self.d)
                if face.is_empty():
                    continue
                face = face.canonical()
                if any(face == f or face.same_set(f) for f in found):
                    continue
                found.append(face)
        return found

    def canonical(self) -> "LexPolyhedron":
        if "canonical" in self._cache:
            return self._cache["canonical"]
        k, d = self.k, self.d
        if self.is_empty():
            out = LexPolyhedron.empty(k, d)
            self._cache["canonical"] = out
            return out
        cons = list(self.constraints)
        for i, h in enumerate(cons):
            if h.rel == GE and LexPolyhedron(cons[:i] + [h.strict()] + cons[i + 1 :], k, d).is_empty():
                cons[i] = h.boundary()
        eqs = [[Fraction(u) for u in h.slope] + list(h.rhs.coords) for h in cons if h.rel == EQ]
        basis, pivots = _rref(eqs, d)
        result = []
        for row in basis:
            result.append(_halfspace_from_rational(row[:d], row[d:], EQ))
        for h in cons:
            if h.rel == EQ:
                continue
            vec = _reduce([Fraction(u) for u in h.slope] + list(h.rhs.coords), basis, pivots)
            if not any(vec[:d]):
                continue
            result.append(_halfspace_from_rational(vec[:d], vec[d:], h.rel))
        best: dict = {}
        for h in result:
            key = (h.slope, h.rel == EQ)
            prev = best.get(key)
            if h.rel == EQ or prev is None or h.rhs > prev.rhs or (h.rhs == prev.rhs and h.rel == GT):
                best[key] = h
        out = LexPolyhedron(tuple(sorted(set(best.values()), key=LexHalfspace.sort_key)), k, d)
        out._cache["canonical"] = out
        self._cache["canonical"] = out
        return out

    def lines(self) -> list[str]:
        return [str(h) for h in self.constraints]

    def __str__(self) -> str:
        return "{" + "; ".join(self.lines()) + "}"

    @classmethod
    def from_lines(cls, lines: Iterable[str], k: int, d: int) -> "LexPolyhedron":
        return cls(tuple(LexHalfspace.parse(s) for s in lines), k, d)


def _halfspace_from_rational(slope: Sequence[Fraction], rhs: Sequence[Fraction], rel: str) -> LexHalfspace:
    f = _primitive_factor(list(slope))
    if rel == EQ and next(u for u in slope if u) < 0:
        f = -f
    return LexHalfspace(tuple(int(u * f) for u in slope), LexValue(r * f for r in rhs), rel)


def _drop_subsumed(pieces: list[EuclideanPiece]) -> list[EuclideanPiece]:
    pieces = sorted(set(pieces), key=lambda p: p.lines())
    keep = []
    for i, p in enumerate(pieces):
        dominated = False
        for j, q in enumerate(pieces):
            if i == j or not p.subset_of(q):
                continue
            if not q.subset_of(p) or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(p)
    return keep


# ---------------------------------------------------------------------------
# complexes


class LexComplex:
    """A finite collection of maximal cells; faces are derived on demand."""

    def __init__(self, cells: Iterable[LexPolyhedron], k: int, d: int, check: bool = True):
        self.cells = tuple(cells)
        self.k = k
        self.d = d
        for P in self.cells:
            if (P.k, P.d) != (k, d):
                raise ValueError("cell lives in a different ambient space")
        if check:
            bad = self.violations()
            if bad:
                raise ComplexError(bad[0])

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other):
        if not isinstance(other, LexComplex):
            return NotImplemented
        return (self.k, self.d, self.cells) == (other.k, other.d, other.cells)

    def cells_containing(self, w: Sequence[LexValue]) -> list[int]:
        return [i for i, P in enumerate(self.cells) if P.contains(w)]

    def contains(self, w: Sequence[LexValue]) -> bool:
        return any(P.contains(w) for P in self.cells)

    def faces(self) -> list[LexPolyhedron]:
        out: list[LexPolyhedron] = []
        for P in self.cells:
            for F in P.faces():
                if not any(F == G for G in out):
                    out.append(F)
        return out

    def violations(self) -> list[str]:
        """Pairs of cells whose intersection is not a face of both."""
        bad = []
        for i, j in itertools.combinations(range(len(self.cells)), 2):
            P, Q = self.cells[i], self.cells[j]
            inter = P.intersect(Q)
            if inter.is_empty():
                continue
            for a, (A, B) in ((i, (P, Q)), (j, (Q, P))):
                if not _smallest_face(A, inter).subset_of(B):
                    bad.append(f"intersection of cells {i} and {j} is not a face of cell {a}")
        return bad


def _smallest_face(P: LexPolyhedron, S: LexPolyhedron) -> LexPolyhedron:
    """Smallest face of P containing the nonempty subset S of P."""
    cons = []
    for h in P.constraints:
        if h.rel == GE and S.with_constraints([h.strict()]).is_empty():
            cons.append(h.boundary())
        else:
            cons.append(h)
    return LexPolyhedron(tuple(cons), P.k, P.d)


# module-level operations --------------------------------------------------


def contains(P: LexPolyhedron, w: Sequence[LexValue]) -> bool:
    return P.contains(w)


def flatten(P: LexPolyhedron) -> list[EuclideanPiece]:
    return P.flatten()


def euclidean_closure(P: LexPolyhedron) -> list[EuclideanPiece]:
    return P.euclidean_closure()


def intersect(P: LexPolyhedron, Q: LexPolyhedron) -> LexPolyhedron:
    return P.intersect(Q)


def faces(P: LexPolyhedron) -> list[LexPolyhedron]:
    return P.faces()


def is_empty(P: LexPolyhedron) -> bool:
    return P.is_empty()
