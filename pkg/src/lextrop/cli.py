"""Command-line entry point: ``lextrop <command> --in FILE [--out FILE] ...``.

Exit status: 0 success, 1 unreadable input, 2 violated precondition (a JSON
diagnostic goes to stderr), 3 failed property suite or rejected certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import serialize
from .lexgroup import ParseError, RankMismatch, parse_lexvalue
from .paths import connect, verify_path
from .polyhedra import LexComplex
from .render import render_svg
from .skeleton import SkeletonPoint, faithful_injectivity_check, point_valuation
from .suites import run_all
from .tropicalize import banerjee_trop, trop_hypersurface

COMMANDS = ("trop", "closure", "path", "verify", "skeleton", "check", "render")
DEFAULT_SEED = 0


@dataclass(frozen=True)
class JobSpec:
    command: str
    input: str | None = None
    rank: int | None = None
    dim: int | None = None
    output: str | None = None
    seed: int = DEFAULT_SEED
    samples: int | None = None
    bbox: int = 4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.rank is not None and self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.dim is not None and self.dim < 1:
            raise ValueError("dimension must be at least 1")


class InputError(Exception):
    """Input could not be read or parsed."""


class Precondition(Exception):
    """Input parsed, but violates the requirements of the command."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# input helpers -----------------------------------------------------------------


def _read(spec: JobSpec) -> str:
    if spec.input is None or spec.input == "-":
        return sys.stdin.read()
    try:
        with open(spec.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {spec.input}: {exc.strerror}") from None


def _load_json(spec: JobSpec) -> Any:
    try:
        return serialize.loads(_read(spec))
    except ParseError as exc:
        raise InputError(str(exc)) from None


def _parsing(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ParseError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RankMismatch):
            raise Precondition("rank-mismatch", str(exc)) from None
        raise InputError(f"{type(exc).__name__}: {exc}") from None


def _polynomial(spec: JobSpec, data: Any):
    p = _parsing(serialize.parse_polynomial, data, spec.rank, spec.dim)
    if spec.rank is not None and p.k != spec.rank:
        raise Precondition("rank-mismatch", f"polynomial has rank {p.k}, --rank is {spec.rank}")
    if spec.dim is not None and p.d != spec.dim:
        raise Precondition("dimension-mismatch", f"polynomial has dimension {p.d}, --dim is {spec.dim}")
    return p


def _complex(spec: JobSpec, data: Any) -> LexComplex:
    if isinstance(data, dict) and "cells" in data:
        C = _parsing(serialize.complex_from_json, data)
        if spec.rank is not None and C.k != spec.rank:
            raise Precondition("rank-mismatch", f"complex has rank {C.k}, --rank is {spec.rank}")
        return C
    return trop_hypersurface(_polynomial(spec, data))


def _write(spec: JobSpec, text: str) -> None:
    if spec.output is None or spec.output == "-":
        sys.stdout.write(text)
    else:
        with open(spec.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# commands ----------------------------------------------------------------------


def _cmd_trop(spec: JobSpec) -> int:
    C = trop_hypersurface(_polynomial(spec, _load_json(spec)))
    _write(spec, serialize.dumps(serialize.complex_to_json(C)))
    return 0


def _cmd_closure(spec: JobSpec) -> int:
    p = _polynomial(spec, _load_json(spec))
    _write(spec, serialize.dumps(serialize.pieces_to_json(banerjee_trop(p), p.k, p.d)))
    return 0


def _cmd_path(spec: JobSpec) -> int:
    data = _load_json(spec)
    if not isinstance(data, dict) or "from" not in data or "to" not in data:
        raise InputError("path input needs 'from', 'to' and a 'complex' or 'polynomial'")
    source = data.get("complex", data.get("polynomial"))
    if source is None:
        raise InputError("path input needs a 'complex' or a 'polynomial'")
    C = _complex(spec, source)
    w1 = _parsing(serialize.parse_point, data["from"])
    w2 = _parsing(serialize.parse_point, data["to"])
    for w in (w1, w2):
        if len(w) != C.d or any(not x.is_inf and x.rank != C.k for x in w):
            raise Precondition("dimension-mismatch", "endpoint does not live in the ambient space of the complex")
    try:
        path = connect(C, w1, w2)
    except ValueError as exc:
        raise Precondition(type(exc).__name__, str(exc)) from None
    out = {"complex": serialize.complex_to_json(C), "path": serialize.path_certificate(path)}
    _write(spec, serialize.dumps(out))
    return 0


def _cmd_verify(spec: JobSpec) -> int:
    data = _load_json(spec)
    try:
        C = serialize.complex_from_json(data["complex"])
        path = serialize.path_from_json(data["path"])
    except (ParseError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    check = verify_path(path, C)
    report = {"ok": check.ok, "reason": check.reason, "segment": check.segment,
              "constraint": None if check.constraint is None else str(check.constraint)}
    _write(spec, serialize.dumps(report))
    return 0 if check.ok else 3


def _cmd_skeleton(spec: JobSpec) -> int:
    data = _load_json(spec)
    G, charts = _parsing(serialize.graph_from_json, data)
    if spec.rank is not None and G.k != spec.rank:
        raise Precondition("rank-mismatch", f"graph has rank {G.k}, --rank is {spec.rank}")
    fns = data.get("functions")
    n = spec.samples if spec.samples is not None else 4
    out: dict[str, Any] = {"orientation": "x-branch at parameter 0"}
    try:
        points = [SkeletonPoint(int(q["edge"]), parse_lexvalue(str(q["param"]))) for q in data.get("points", [])]
    except (ParseError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed point: {exc}") from None
    try:
        names = list(fns) if fns is not None else sorted(set().union(*(c.keys() for c in charts)))
        vals = []
        for q in points:
            q.check(G)
            vals.append({"edge": q.edge, "param": str(q.param),
                         "values": {name: str(point_valuation(G, charts[q.edge][name], q)) for name in names}})
        out["valuations"] = vals
        if names:
            report = faithful_injectivity_check(G, charts, n, fns=names)
            out["functions"] = names
            out["samples"] = report.samples
            out["injective"] = report.injective
            out["witness"] = None if report.witness is None else [
                {"edge": q.edge, "param": str(q.param)} for q in report.witness
            ]
    except (KeyError, IndexError) as exc:
        raise Precondition("MalformedChart", f"missing chart entry {exc}") from None
    except ValueError as exc:
        raise Precondition(type(exc).__name__, str(exc)) from None
    _write(spec, serialize.dumps(out))
    return 0


def _cmd_check(spec: JobSpec) -> int:
    results = run_all(spec.seed, limit=spec.samples)
    # timings go to stderr so the summary itself is reproducible
    for r in results:
        print(f"{r.name}: {r.seconds:.2f}s", file=sys.stderr)
    lines = [f"seed {spec.seed}"] + [r.line(timing=False) for r in results]
    failed = [r for r in results if not r.ok]
    for r in failed:
        lines.extend("  " + msg for msg in r.failures[:5])
    lines.append("all suites passed" if not failed else f"{len(failed)} suite(s) failed")
    _write(spec, "\n".join(lines) + "\n")
    return 0 if not failed else 3


def _cmd_render(spec: JobSpec) -> int:
    data = _load_json(spec)
    if isinstance(data, dict) and "pieces" in data:
        pieces = _parsing(serialize.pieces_from_json, data)
        k, d = int(data["rank"]), int(data["dim"])
    else:
        C = _complex(spec, data)
        k, d = C.k, C.d
        pieces = [piece for cell in C.cells for piece in cell.flatten()]
    if k != 2 or d > 2:
        raise Precondition("unsupported", "rendering needs rank 2 and at most two point coordinates")
    _write(spec, render_svg(pieces, d, spec.bbox))
    return 0


HANDLERS = {
    "trop": _cmd_trop,
    "closure": _cmd_closure,
    "path": _cmd_path,
    "verify": _cmd_verify,
    "skeleton": _cmd_skeleton,
    "check": _cmd_check,
    "render": _cmd_render,
}


def run(spec: JobSpec) -> int:
    try:
        return HANDLERS[spec.command](spec)
    except InputError as exc:
        print(f"lextrop: {exc}", file=sys.stderr)
        return 1
    except Precondition as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lextrop", description="Tropical geometry over lexicographically ordered value groups.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="input", help="input JSON file ('-' or omitted for stdin)")
    parser.add_argument("--out", dest="output", help="output file (stdout when omitted)")
    parser.add_argument("--rank", type=int, help="expected rank k")
    parser.add_argument("--dim", type=int, help="expected dimension d")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for the property suites")
    parser.add_argument("--samples", type=int, help="samples per edge (skeleton) or instance cap per suite (check)")
    parser.add_argument("--bbox", type=int, default=4, help="half-width of the rendered box")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = JobSpec(args.command, args.input, args.rank, args.dim, args.output, args.seed, args.samples, args.bbox)
    except ValueError as exc:
        print(json.dumps({"error": "bad-arguments", "message": str(exc)}), file=sys.stderr)
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
