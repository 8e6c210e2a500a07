"""Exact feasibility of rational linear systems with strict inequalities.

A row is ``(coeffs, rhs, rel)`` meaning ``sum(coeffs[i] * x[i]) rel rhs`` with
``rel`` one of ``">="``, ``">"``, ``"="``.  Equalities are removed by Gaussian
substitution, inequalities by Fourier-Motzkin elimination; a witness point is
recovered by back-substitution through the stored elimination stages.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

GE, GT, EQ = ">=", ">", "="
RELATIONS = (GE, GT, EQ)

Row = tuple[tuple[Fraction, ...], Fraction, str]

# (lo, lo_strict, hi, hi_strict) -> value; None bounds are absent
Chooser = Callable[[Fraction | None, bool, Fraction | None, bool], Fraction]


def make_row(coeffs: Sequence, rhs, rel: str) -> Row:
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    return tuple(Fraction(c) for c in coeffs), Fraction(rhs), rel


def negate(row: Row) -> Row:
    """Complement of an inequality row (a.x >= b  ->  -a.x > -b)."""
    coeffs, rhs, rel = row
    if rel == EQ:
        raise ValueError("the complement of an equality is not a single row")
    return tuple(-c for c in coeffs), -rhs, GT if rel == GE else GE


def relax(row: Row) -> Row:
    coeffs, rhs, rel = row
    return (coeffs, rhs, GE) if rel == GT else row


def holds(row: Row, x: Sequence[Fraction]) -> bool:
    coeffs, rhs, rel = row
    val = sum((c * xi for c, xi in zip(coeffs, x) if c), Fraction(0))
    if rel == EQ:
        return val == rhs
    if rel == GT:
        return val > rhs
    return val >= rhs


def _normalize(coeffs, rhs, rel):
    for c in coeffs:
        if c:
            s = abs(c)
            if rel == EQ and c < 0:
                s = -s
            if s != 1:
                coeffs = tuple(a / s for a in coeffs)
                rhs = rhs / s
            break
    return coeffs, rhs, rel


def _dedupe(rows):
    best = {}
    for coeffs, rhs, rel in rows:
        prev = best.get(coeffs)
        if prev is None or rhs > prev[0] or (rhs == prev[0] and rel == GT):
            best[coeffs] = (rhs, rel)
    return [(c, r, rel) for c, (r, rel) in best.items()]


def default_chooser(lo, lo_strict, hi, hi_strict) -> Fraction:
    zero = Fraction(0)
    if (lo is None or zero > lo or (zero == lo and not lo_strict)) and (
        hi is None or zero < hi or (zero == hi and not hi_strict)
    ):
        return zero
    if lo is not None and not lo_strict:
        return lo
    if hi is not None and not hi_strict:
        return hi
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    return hi - 1


def random_chooser(rng: random.Random, box: int = 6) -> Chooser:
    """Chooser drawing boundary or interior values; unbounded sides are capped by ``box``."""

    def choose(lo, lo_strict, hi, hi_strict):
        cands = []
        if lo is not None and not lo_strict:
            cands.append(lo)
        if hi is not None and not hi_strict:
            cands.append(hi)
        a = lo if lo is not None else min(Fraction(-box), hi - 1 if hi is not None else Fraction(-box))
        b = hi if hi is not None else max(Fraction(box), a + 1)
        if a < b:
            t = Fraction(rng.randint(1, 15), 16)
            cands.append(a + (b - a) * t)
        elif not cands:
            cands.append(a)
        return rng.choice(cands)

    return choose


def _combine(pos: list[Row], neg: list[Row], j: int) -> list[Row]:
    """Fourier-Motzkin combinations cancelling variable j."""
    out = []
    for pc, pr, prel in pos:
        for nc, nr, nrel in neg:
            a, b = pc[j], -nc[j]
            coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
            rel = GT if GT in (prel, nrel) else GE
            out.append(_normalize(coeffs, b * pr + a * nr, rel))
    return out


def _substitute_equalities(rows: Sequence[Row], keep=()) -> tuple[list[Row], list] | None:
    """Eliminate equalities by substitution, never pivoting on variables in ``keep``
    unless nothing else is available.  Returns (remaining rows, substitutions)."""
    eqs = [r for r in rows if r[2] == EQ]
    rest = [r for r in rows if r[2] != EQ]
    subs = []  # (var, coeffs, rhs): x_var = rhs - sum(coeffs * x)
    while eqs:
        coeffs, rhs, _ = eqs.pop()
        nz = [i for i, c in enumerate(coeffs) if c]
        if not nz:
            if rhs != 0:
                return None
            continue
        free = [i for i in nz if i not in keep]
        if not free:
            rest.append((coeffs, rhs, EQ))
            continue
        j = free[0]
        a = coeffs[j]
        e_coeffs = tuple(c / a for c in coeffs)
        e_rhs = rhs / a
        subs.append((j, e_coeffs[:j] + (Fraction(0),) + e_coeffs[j + 1 :], e_rhs))

        def substitute(row, j=j, e_coeffs=e_coeffs, e_rhs=e_rhs):
            c, r, rel = row
            f = c[j]
            if not f:
                return row
            return tuple(ci - f * ei for ci, ei in zip(c, e_coeffs)), r - f * e_rhs, rel

        eqs = [substitute(r) for r in eqs]
        rest = [substitute(r) for r in rest]
    return rest, subs


def project_rows(rows: Sequence[Row], n: int, keep: Sequence[int]) -> list[Row] | None:
    """Rows over the same n variables describing the projection onto ``keep``.

    Returned rows only involve variables in ``keep``; None if the system is infeasible.
    """
    keep = set(keep)
    res = _substitute_equalities(rows, keep)
    if res is None:
        return None
    rows2, _ = res
    eqs = [r for r in rows2 if r[2] == EQ]
    ineqs = _dedupe(_normalize(*r) for r in rows2 if r[2] != EQ)
    for j in range(n):
        if j in keep:
            continue
        pos = [r for r in ineqs if r[0][j] > 0]
        neg = [r for r in ineqs if r[0][j] < 0]
        rest = [r for r in ineqs if not r[0][j]]
        ineqs = _dedupe(rest + _combine(pos, neg, j))
    out = []
    for coeffs, rhs, rel in eqs + ineqs:
        if any(coeffs):
            out.append((coeffs, rhs, rel))
        elif (rel == EQ and rhs != 0) or (rel == GE and rhs > 0) or (rel == GT and rhs >= 0):
            return None
    return out


def solve(rows: Sequence[Row], n: int, chooser: Chooser | None = None) -> list[Fraction] | None:
    """Return a rational point satisfying every row, or None if the system is infeasible."""
    choose = chooser or default_chooser
    res = _substitute_equalities(rows)
    if res is None:
        return None
    ineqs, subs = res
    ineqs = _dedupe(_normalize(*r) for r in ineqs)
    stages = []
    while True:
        live = []
        for coeffs, rhs, rel in ineqs:
            if any(coeffs):
                live.append((coeffs, rhs, rel))
            elif rhs > 0 or (rhs == 0 and rel == GT):
                return None
        ineqs = live
        if not ineqs:
            break
        counts = {}
        for coeffs, _, _ in ineqs:
            for i, c in enumerate(coeffs):
                if c:
                    p, q = counts.get(i, (0, 0))
                    counts[i] = (p + 1, q) if c > 0 else (p, q + 1)
        j = min(counts, key=lambda i: (counts[i][0] * counts[i][1] - sum(counts[i]), i))
        pos = [r for r in ineqs if r[0][j] > 0]
        neg = [r for r in ineqs if r[0][j] < 0]
        rest = [r for r in ineqs if not r[0][j]]
        stages.append((j, pos + neg))
        ineqs = _dedupe(rest + _combine(pos, neg, j))

    x: list[Fraction | None] = [None] * n
    for j, stage_rows in reversed(stages):
        for coeffs, _, _ in stage_rows:
            for i, c in enumerate(coeffs):
                if c and i != j and x[i] is None:
                    x[i] = choose(None, False, None, False)
        lo = hi = None
        lo_s = hi_s = False
        for coeffs, rhs, rel in stage_rows:
            a = coeffs[j]
            bound = (rhs - sum(c * x[i] for i, c in enumerate(coeffs) if c and i != j)) / a
            strict = rel == GT
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
        x[j] = choose(lo, lo_s, hi, hi_s)
    for i in range(n):
        if x[i] is None and all(s[0] != i for s in subs):
            x[i] = choose(None, False, None, False)
    for j, e_coeffs, e_rhs in reversed(subs):
        x[j] = e_rhs - sum(c * x[i] for i, c in enumerate(e_coeffs) if c)
    return x  # type: ignore[return-value]


def feasible(rows: Sequence[Row], n: int) -> bool:
    return solve(rows, n) is not None


def implies(rows: Sequence[Row], target: Row, n: int) -> bool:
    """True iff every solution of ``rows`` satisfies ``target``."""
    if target[2] == EQ:
        coeffs, rhs, _ = target
        return implies(rows, (coeffs, rhs, GE), n) and implies(
            rows, (tuple(-c for c in coeffs), -rhs, GE), n
        )
    return solve(list(rows) + [negate(target)], n) is None


def contained(inner: Sequence[Row], outer: Sequence[Row], n: int) -> bool:
    return all(implies(inner, r, n) for r in outer)
