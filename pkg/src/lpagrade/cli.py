"""``lpagrade``: command-line front end.

Exit codes: 0 success (or strongly graded), 2 not strongly graded, 3 unknown,
1 corpus mismatch, 64 usage error, 65 bad input, 70 depth cap exceeded.
Errors go to stderr prefixed with ``error:``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path as FsPath
from typing import Sequence, TextIO

from . import __version__
from .corpus import load_corpus
from .graph_model import FiniteGraph, GraphError, LadderSpec, export_dot, materialize_window
from .grading_checker import (
    DEFAULT_DEPTH_CAP,
    DepthCapExceeded,
    WitnessError,
    verdict_json,
    strong_grading_verdict,
    verify_decomposition,
    vertex_in_Sm1S1,
)
from .lpa_engine import ElementParseError, LeavittPathAlgebra
from .lpg import LpgError, load_graph

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_NOT_GRADED = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70

_VERDICT_EXIT = {"yes": EXIT_OK, "no": EXIT_NOT_GRADED, "unknown": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lpagrade", description="Strong Z-gradedness of Leavitt path algebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="verdict and witnesses for a graph file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")

    w = sub.add_parser("witness", help="S_-1 S_1 decomposition of one vertex")
    w.add_argument("file")
    w.add_argument("--vertex", required=True)
    w.add_argument("--verify", action="store_true")
    w.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    w.add_argument("--json", action="store_true")

    c = sub.add_parser("corpus", help="run the built-in examples")
    c.add_argument("--json", action="store_true")

    d = sub.add_parser("dot", help="export Graphviz DOT")
    d.add_argument("file")
    d.add_argument("--window", type=int, default=4, help="ladder columns to draw")
    d.add_argument("-o", "--output")

    m = sub.add_parser("mult", help="normal form of a product")
    m.add_argument("file")
    m.add_argument("--lhs", required=True)
    m.add_argument("--rhs", required=True)
    m.add_argument("--window", type=int, default=4, help="ladder columns to work in")
    return p


def _load(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _cmd_analyze(args, out: TextIO, err: TextIO) -> int:
    g = _load(args.file)
    report = strong_grading_verdict(g, FsPath(args.file).stem)
    out.write((report.dumps() if args.json else report.render()) + "\n")
    return _VERDICT_EXIT[report.strongly_graded]


def _cmd_witness(args, out: TextIO, err: TextIO) -> int:
    g = _load(args.file)
    if not g.has_vertex(args.vertex):
        raise GraphError(f"unknown vertex {args.vertex!r}")
    dec = vertex_in_Sm1S1(g, args.vertex, args.depth_cap)
    verified = verify_decomposition(g, dec) if args.verify else None
    if args.json:
        doc = dec.to_json()
        if verified is not None:
            doc["verified"] = verified
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"{dec.vertex} = sum of alpha beta* beta alpha* over (k = {dec.k}):\n")
        for a, b in dec.pairs:
            out.write(f"  alpha = {a}    beta = {b}\n")
        if verified is not None:
            out.write(f"verified: {'yes' if verified else 'NO'}\n")
    return EXIT_OK if verified is not False else EXIT_SOFTWARE


def _cmd_corpus(args, out: TextIO, err: TextIO) -> int:
    rows = []
    for entry in load_corpus():
        r = strong_grading_verdict(entry.spec, entry.name)
        ladder = isinstance(entry.spec, LadderSpec)
        got_y = r.condition_Y.status == "holds"
        match = got_y == entry.expected_Y and (r.strongly_graded == "yes") == entry.expected_graded
        rows.append((entry, r, ladder, match))
    ladders = [row for row in rows if row[2]]
    fixtures = [row for row in rows if not row[2]]
    if args.json:
        doc = [
            {
                "name": e.name,
                "expected_Y": e.expected_Y,
                "condition_Y": verdict_json(r.condition_Y),
                "strongly_graded": r.strongly_graded,
                "match": match,
            }
            for e, r, _, match in rows
        ]
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"{'graph':<13} {'expect Y':<9} {'got Y':<6} {'graded':<7} detail\n")
        for e, r, _, match in rows:
            y = r.condition_Y
            detail = y.reason if y.counterexample is None else f"k={y.counterexample.k} from {y.counterexample.start}"
            if r.strongly_graded == "no" and y.status == "holds":
                detail = r.reasons[0]
            flag = "" if match else "   MISMATCH"
            out.write(
                f"{e.name:<13} {'holds' if e.expected_Y else 'fails':<9} {y.status:<6} "
                f"{r.strongly_graded:<7} {detail}{flag}\n"
            )
        out.write(f"ladders: {sum(m for *_, m in ladders)}/{len(ladders)} match\n")
        out.write(f"fixtures: {sum(m for *_, m in fixtures)}/{len(fixtures)} match\n")
    return EXIT_OK if all(m for *_, m in rows) else EXIT_MISMATCH


def _cmd_dot(args, out: TextIO, err: TextIO) -> int:
    g = _load(args.file)
    if args.window < 1:
        raise UsageError("--window must be at least 1")
    text = export_dot(g, args.window, FsPath(args.file).stem)
    if args.output:
        FsPath(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _cmd_mult(args, out: TextIO, err: TextIO) -> int:
    g = _load(args.file)
    if isinstance(g, LadderSpec):
        g = materialize_window(g, args.window)
    assert isinstance(g, FiniteGraph)
    alg = LeavittPathAlgebra(g)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        x = alg.parse_element(args.lhs)
        y = alg.parse_element(args.rhs)
    for w in caught:
        err.write(f"warning: {w.message}\n")
    out.write(f"{x * y}\n")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "witness": _cmd_witness,
    "corpus": _cmd_corpus,
    "dot": _cmd_dot,
    "mult": _cmd_mult,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"error: usage: {exc}\n")
        return EXIT_USAGE
    except LpgError as exc:
        err.write(f"error: parse: {exc}\n")
        return EXIT_DATAERR
    except ElementParseError as exc:
        err.write(f"error: parse: {exc}\n")
        return EXIT_DATAERR
    except DepthCapExceeded as exc:
        err.write(f"error: cap: {exc}\n")
        return EXIT_SOFTWARE
    except (WitnessError, GraphError) as exc:
        err.write(f"error: input: {exc}\n")
        return EXIT_DATAERR


def main() -> None:
    sys.exit(run())
