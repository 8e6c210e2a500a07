"""Finite-support elements of the group ring Q[t^R^(k)] and their monomial valuation.

Rational coefficients are trivially valued, so the valuation of a nonzero series is
simply its lex-smallest exponent.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .lexgroup import INF, LexValue, ParseError, RankMismatch, parse_lexvalue, project

__all__ = ["HahnSeries", "hs_add", "hs_mul", "nu_mon", "parse_hahn"]


class HahnSeries:
    """Immutable map from rank-k exponents to nonzero rational coefficients.

    Terms are stored sorted by exponent, so the first key is the valuation.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, terms: Mapping[LexValue, object] | Iterable[tuple[LexValue, object]], rank: int):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[LexValue, Fraction] = {}
        for exp, coeff in items:
            if exp.is_inf:
                raise ValueError("exponents must be finite")
            if exp.rank != rank:
                raise RankMismatch(f"exponent {exp} does not have rank {rank}")
            acc[exp] = acc.get(exp, Fraction(0)) + Fraction(coeff)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", tuple(sorted(((e, c) for e, c in acc.items() if c), key=lambda t: t[0])))

    def __setattr__(self, name, value):
        raise AttributeError("HahnSeries is immutable")

    @classmethod
    def zero(cls, rank: int) -> "HahnSeries":
        return cls((), rank)

    @classmethod
    def monomial(cls, exponent: LexValue, coeff=1) -> "HahnSeries":
        return cls([(exponent, coeff)], exponent.rank)

    @classmethod
    def constant(cls, c, rank: int) -> "HahnSeries":
        return cls([(LexValue.zero(rank), c)], rank)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> tuple[LexValue, ...]:
        return tuple(e for e, _ in self.terms)

    def _check(self, other: "HahnSeries") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} series combined with rank {other.rank}")

    def __add__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        return HahnSeries(self.terms + other.terms, self.rank)

    def __neg__(self) -> "HahnSeries":
        return HahnSeries(((e, -c) for e, c in self.terms), self.rank)

    def __sub__(self, other: "HahnSeries") -> "HahnSeries":
        return self + (-other)

    def __mul__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        return HahnSeries(
            ((e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms), self.rank
        )

    def __eq__(self, other):
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, self.terms))

    def valuation(self) -> LexValue:
        return self.terms[0][0] if self.terms else INF

    def truncate(self, j: int) -> "HahnSeries":
        """Project every exponent to rank j and collect like terms (cancellation allowed)."""
        return HahnSeries(((project(e, j), c) for e, c in self.terms), j)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms:
            s = f"{c}*t^{e}"
            if out and not s.startswith("-"):
                s = "+" + s
            out.append(s)
        return "".join(out)

    def __repr__(self) -> str:
        return f"HahnSeries({self})"

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> "HahnSeries":
        return parse_hahn(text, rank)


def hs_add(f: HahnSeries, g: HahnSeries) -> HahnSeries:
    return f + g


def hs_mul(f: HahnSeries, g: HahnSeries) -> HahnSeries:
    return f * g


def nu_mon(f: HahnSeries) -> LexValue:
    """min over the support of (coefficient valuation + exponent); INF for zero."""
    return f.valuation()


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*)?)?(?:t\s*\^\s*(\([^)]*\)))?\s*"
)


def parse_hahn(text: str, rank: int | None = None) -> HahnSeries:
    """Parse sums like ``3*t^(0,1)+5*t^(1,0)``; bare numbers are constants."""
    if text.strip() == "0":
        if rank is None:
            raise ParseError("rank of the zero series is ambiguous", text, 0)
        return HahnSeries.zero(rank)
    pos = 0
    terms = []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError("expected a term c*t^(e1,...,ek)", text, pos)
        if terms and m.group(1) is None:
            raise ParseError("expected '+' or '-' between terms", text, pos)
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3) is not None:
            exp = parse_lexvalue(m.group(3))
            if exp.is_inf:
                raise ParseError("exponents must be finite", text, m.start(3))
        else:
            exp = None
        terms.append((exp, sign * coeff, m.start()))
        pos = m.end()
    if not terms:
        raise ParseError("empty series", text, 0)
    ranks = {e.rank for e, _, _ in terms if e is not None}
    if rank is not None:
        ranks.add(rank)
    if len(ranks) != 1:
        raise ParseError("inconsistent or unknown exponent rank", text, 0)
    (k,) = ranks
    return HahnSeries(((e if e is not None else LexValue.zero(k), c) for e, c, _ in terms), k)
