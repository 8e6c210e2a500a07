"""Exact arithmetic on the lexicographically ordered group R^(k), extended by +inf.

Values are immutable.  Finite values carry a tuple of ``Fraction`` coordinates;
the single infinite value ``INF`` is rank-agnostic and compares above every
finite value.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "INF",
    "LexValue",
    "Ordering",
    "RankContext",
    "CoefficientField",
    "RankMismatch",
    "ParseError",
    "lex_cmp",
    "lex_add",
    "integer_scale",
    "project",
    "lex_min",
    "pair",
    "parse_lexvalue",
]


class RankMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Raised on malformed text input; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, text: str = "", offset: int = 0):
        super().__init__(f"{message} at offset {offset}: {text!r}")
        self.text = text
        self.offset = offset


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not accepted; use Fraction or str")
    return Fraction(x)


class LexValue:
    """An element of R^(k) with rational coordinates, or the global maximum INF."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Iterable | None):
        if coords is None:
            object.__setattr__(self, "_coords", None)
        else:
            object.__setattr__(self, "_coords", tuple(_to_fraction(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("LexValue is immutable")

    @classmethod
    def zero(cls, k: int) -> "LexValue":
        return cls((0,) * k)

    @classmethod
    def unit(cls, k: int, level: int) -> "LexValue":
        return cls(1 if c == level else 0 for c in range(k))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        if self._coords is None:
            raise ValueError("INF has no coordinates")
        return self._coords

    @property
    def is_inf(self) -> bool:
        return self._coords is None

    @property
    def rank(self) -> int | None:
        return None if self._coords is None else len(self._coords)

    def is_zero(self) -> bool:
        return self._coords is not None and not any(self._coords)

    def sign(self) -> int:
        """Lex sign of a finite value: -1, 0 or 1."""
        for c in self.coords:
            if c:
                return 1 if c > 0 else -1
        return 0

    def leading_level(self) -> int | None:
        """Index of the first nonzero coordinate, None for zero."""
        for i, c in enumerate(self.coords):
            if c:
                return i
        return None

    # ordering -----------------------------------------------------------

    def _cmp(self, other: "LexValue") -> int:
        if not isinstance(other, LexValue):
            return NotImplemented
        if self._coords is None or other._coords is None:
            return (self._coords is None) - (other._coords is None)
        if len(self._coords) != len(other._coords):
            raise RankMismatch(f"cannot compare ranks {len(self._coords)} and {len(other._coords)}")
        for a, b in zip(self._coords, other._coords):
            if a != b:
                return -1 if a < b else 1
        return 0

    def __eq__(self, other):
        if not isinstance(other, LexValue):
            return NotImplemented
        return self._coords == other._coords

    def __hash__(self):
        return hash(self._coords)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # group law ------------------------------------------------------------

    def __add__(self, other: "LexValue") -> "LexValue":
        if not isinstance(other, LexValue):
            return NotImplemented
        if self._coords is None or other._coords is None:
            return INF
        if len(self._coords) != len(other._coords):
            raise RankMismatch(f"cannot add ranks {len(self._coords)} and {len(other._coords)}")
        return LexValue(a + b for a, b in zip(self._coords, other._coords))

    def __neg__(self) -> "LexValue":
        if self._coords is None:
            raise ValueError("INF has no additive inverse")
        return LexValue(-a for a in self._coords)

    def __sub__(self, other: "LexValue") -> "LexValue":
        return self + (-other)

    def scale(self, q) -> "LexValue":
        """Multiply by a rational scalar; INF only admits positive factors."""
        q = _to_fraction(q)
        if self._coords is None:
            if q > 0:
                return INF
            raise ValueError("INF can only be scaled by a positive factor")
        return LexValue(q * a for a in self._coords)

    def __mul__(self, q):
        if isinstance(q, LexValue):
            return NotImplemented
        return self.scale(q)

    __rmul__ = __mul__

    def project(self, j: int) -> "LexValue":
        return project(self, j)

    # text form ------------------------------------------------------------

    def __str__(self) -> str:
        if self._coords is None:
            return "inf"
        return "(" + ",".join(str(c) for c in self._coords) + ")"

    def __repr__(self) -> str:
        return f"LexValue({self})"

    @classmethod
    def parse(cls, text: str) -> "LexValue":
        return parse_lexvalue(text)


INF = LexValue(None)

_NUM = re.compile(r"\s*([+-]?\d+(?:/\d+)?)\s*")


def parse_lexvalue(text: str) -> LexValue:
    """Parse ``inf`` or ``(p1/q1,...,pk/qk)``."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if s in ("inf", "∞"):
        return INF
    if not s.startswith("("):
        raise ParseError("expected '(' or 'inf'", text, lead)
    if not s.endswith(")"):
        raise ParseError("expected ')'", text, lead + len(s))
    body = s[1:-1]
    if not body.strip():
        return LexValue(())
    coords = []
    pos = lead + 1
    for part in body.split(","):
        m = _NUM.fullmatch(part)
        if m is None:
            raise ParseError("expected rational coordinate", text, pos)
        try:
            coords.append(Fraction(m.group(1)))
        except ZeroDivisionError:
            raise ParseError("zero denominator", text, pos) from None
        pos += len(part) + 1
    return LexValue(coords)


def lex_cmp(a: LexValue, b: LexValue) -> Ordering:
    return Ordering(a._cmp(b))


def lex_add(a: LexValue, b: LexValue) -> LexValue:
    return a + b


def integer_scale(n: int, a: LexValue, k: int | None = None) -> LexValue:
    """n-fold sum of ``a``; negative n allowed for finite a only.

    ``0 * INF`` is the empty sum, which needs the ambient rank ``k``.
    """
    if isinstance(n, bool) or int(n) != n:
        raise TypeError("integer_scale needs an integer multiplier")
    n = int(n)
    if a.is_inf:
        if n < 0:
            raise ValueError("negative scaling of INF")
        if n == 0:
            if k is None:
                raise ValueError("0 * INF needs an explicit rank")
            return LexValue.zero(k)
        return INF
    return LexValue(n * c for c in a.coords)


def pair(u: Sequence[int], w: Sequence[LexValue], k: int) -> LexValue:
    """The pairing sum u_i * w_i, with 0 * INF = 0 and positive multiples of INF absorbing."""
    total = LexValue.zero(k)
    for ui, wi in zip(u, w):
        if ui == 0:
            continue
        if wi.is_inf:
            if ui < 0:
                raise ValueError("negative exponent paired with INF")
            return INF
        total = total + wi.scale(ui)
    return total


def project(a: LexValue, j: int) -> LexValue:
    """Truncate to the first j coordinates; j = 0 lands in the doubleton {(), INF}."""
    if j < 0:
        raise ValueError(f"projection index must be non-negative, got {j}")
    if a.is_inf:
        return INF
    if j > len(a.coords):
        raise ValueError(f"cannot project rank {len(a.coords)} to rank {j}")
    return LexValue(a.coords[:j])


def lex_min(values: Iterable[LexValue]) -> LexValue:
    best = INF
    for v in values:
        if v < best:
            best = v
    return best


class CoefficientField(enum.Enum):
    TRIVIALLY_VALUED_RATIONALS = "rationals"
    HAHN_COEFFICIENTS = "hahn"


@dataclass(frozen=True)
class RankContext:
    k: int
    coefficient_field: CoefficientField = CoefficientField.TRIVIALLY_VALUED_RATIONALS

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("rank must be positive")

    def zero(self) -> LexValue:
        return LexValue.zero(self.k)

    def check(self, *values: LexValue) -> None:
        for v in values:
            if not v.is_inf and v.rank != self.k:
                raise RankMismatch(f"value {v} has rank {v.rank}, context rank is {self.k}")

    def value(self, *coords) -> LexValue:
        v = LexValue(coords)
        self.check(v)
        return v
