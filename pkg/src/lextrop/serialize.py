"""Canonical JSON forms for values, polynomials, complexes, pieces, paths and graphs."""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from .hahnseries import HahnSeries, parse_hahn
from .lexgroup import LexValue, ParseError, parse_lexvalue
from .paths import PLPath, path_from_json, path_to_json
from .polyhedra import EuclideanPiece, LexComplex, LexPolyhedron
from .skeleton import Edge, MetricGraph
from .tropicalize import ValuatedPolynomial

__all__ = [
    "dumps",
    "loads",
    "parse_point",
    "point_to_json",
    "parse_polynomial",
    "polynomial_to_json",
    "complex_to_json",
    "complex_from_json",
    "pieces_to_json",
    "pieces_from_json",
    "graph_from_json",
    "graph_to_json",
    "path_to_json",
    "path_from_json",
]


def dumps(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, text, len(text[: exc.pos].encode("utf-8"))) from None


def parse_point(items: Sequence[str]) -> tuple[LexValue, ...]:
    if isinstance(items, str) or not isinstance(items, Sequence):
        raise ParseError("a point is a list of values", str(items), 0)
    return tuple(parse_lexvalue(str(x)) for x in items)


def point_to_json(w: Sequence[LexValue]) -> list[str]:
    return [str(x) for x in w]


def _parse_exponent(key: str) -> tuple[int, ...]:
    pos = 0
    out = []
    for part in key.split(","):
        try:
            out.append(int(part))
        except ValueError:
            raise ParseError("expected an integer exponent", key, pos) from None
        pos += len(part.encode("utf-8")) + 1
    return tuple(out)


def parse_polynomial(data: str | Mapping[str, str], k: int | None = None, d: int | None = None) -> ValuatedPolynomial:
    """Polynomial from a JSON map ``{"1,0": "(0,0)", ...}`` (or its text).

    A value written as a LexValue (``(...)`` or ``inf``) is the coefficient valuation; anything else is
    parsed as a Hahn series coefficient.  If any coefficient is a series, plain
    valuations v become the monomials t^v so the ring structure is kept.
    """
    if isinstance(data, str):
        data = loads(data)
    if not isinstance(data, Mapping):
        raise ParseError("a polynomial is a JSON object", str(data), 0)
    if not data and (k is None or d is None):
        raise ParseError("the zero polynomial needs explicit rank and dimension", "{}", 0)
    vals: dict[tuple[int, ...], LexValue] = {}
    series: dict[tuple[int, ...], HahnSeries] = {}
    for key, value in data.items():
        e = _parse_exponent(str(key))
        text = str(value)
        if e in vals or e in series:
            raise ParseError("repeated exponent", str(key), 0)
        if text.strip().startswith("(") or text.strip() in ("inf", "∞"):
            vals[e] = parse_lexvalue(text)
        else:
            series[e] = parse_hahn(text, k)
    for e, v in vals.items():
        if v.is_inf:
            raise ParseError("coefficient valuation must be finite", str(v), 0)
    if series:
        ranks = {s.rank for s in series.values()} | {v.rank for v in vals.values()}
        if len(ranks) != 1:
            raise ParseError("coefficients have inconsistent ranks", str(sorted(map(str, ranks))), 0)
        for e, v in vals.items():
            series[e] = HahnSeries.monomial(v)
        return ValuatedPolynomial.from_hahn(series, k, d)
    return ValuatedPolynomial(vals, k, d)


def polynomial_to_json(p: ValuatedPolynomial) -> dict[str, str]:
    if p.coefficients is not None:
        return {",".join(map(str, e)): str(c) for e, c in sorted(p.coefficients.items())}
    return {",".join(map(str, e)): str(v) for e, v in p.terms}


def complex_to_json(C: LexComplex) -> dict:
    return {"rank": C.k, "dim": C.d, "cells": [P.canonical().lines() for P in C.cells]}


def complex_from_json(data: Mapping, check: bool = False) -> LexComplex:
    k, d = int(data["rank"]), int(data["dim"])
    cells = [LexPolyhedron.from_lines(lines, k, d) for lines in data["cells"]]
    return LexComplex(cells, k, d, check=check)


def pieces_to_json(pieces: Sequence[EuclideanPiece], k: int, d: int) -> dict:
    return {"rank": k, "dim": d, "pieces": [p.lines() for p in pieces]}


def pieces_from_json(data: Mapping) -> list[EuclideanPiece]:
    n = int(data["rank"]) * int(data["dim"])
    return [EuclideanPiece.from_lines(lines, n) for lines in data["pieces"]]


def graph_from_json(data: Mapping) -> tuple[MetricGraph, list[dict[str, ValuatedPolynomial]]]:
    """Graph with optional per-edge charts ``{"name": polynomial map}``."""
    k = int(data["rank"])
    vertices = tuple(data["vertices"])
    edges = []
    charts = []
    for item in data["edges"]:
        length = parse_lexvalue(str(item["length"]))
        head = None if length.is_inf else item["head"]
        edges.append(Edge(item["tail"], head, length))
        dim = 1 if length.is_inf else 2
        charts.append({name: parse_polynomial(p, k, dim) for name, p in item.get("chart", {}).items()})
    return MetricGraph(vertices, tuple(edges), k), charts


def graph_to_json(G: MetricGraph, charts: Sequence[Mapping[str, ValuatedPolynomial]] | None = None) -> dict:
    edges = []
    for i, e in enumerate(G.edges):
        item: dict[str, Any] = {"tail": e.tail, "length": str(e.length)}
        if not e.marked:
            item["head"] = e.head
        if charts is not None:
            item["chart"] = {name: polynomial_to_json(p) for name, p in charts[i].items()}
        edges.append(item)
    return {"rank": G.k, "vertices": list(G.vertices), "edges": edges, "orientation": "x-branch at parameter 0"}


def path_certificate(path: PLPath) -> dict:
    out = path_to_json(path)
    out["orientation"] = "ascending unless flagged"
    return out
