"""Reader and writer for the ``.lpg`` graph description format.

Finite graphs::

    vertex v; vertex w;
    edge e: v -> w;
    infedges w -> v;        # countably many parallel edges

Ladders (one block per file)::

    ladder {
        spine nat;                       # or: spine int;
        loops from 1 step 2;             # all | none | cols 0, 3 | from i step m
        tail start 1 step 1 length 2*t+2;
        tail_exception col 4 length 1;
    }
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph_model import (
    ColumnPattern,
    Edge,
    FiniteGraph,
    GraphError,
    GraphSpec,
    LadderSpec,
    TailFamily,
)


class LpgError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class LpgSyntaxError(LpgError):
    pass


class LpgSemanticError(LpgError):
    pass


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)|(?P<int>[+-]?\d+(?![A-Za-z_]))"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[;:{},*+])"
)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise LpgSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "punct":
            toks.append(_Tok(m.group(), m.group(), line, pos - line_start + 1))
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _fail(self, msg: str, tok: _Tok | None = None) -> LpgSyntaxError:
        t = tok or self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        return LpgSyntaxError(f"{msg}, got {got}", t.line, t.col)

    def take(self, kind: str, what: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise self._fail(f"expected {what or kind}")
        self.i += 1
        return t

    def keyword(self, word: str) -> _Tok:
        t = self.tok
        if t.kind != "id" or t.text != word:
            raise self._fail(f"expected {word!r}")
        self.i += 1
        return t

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "id" and self.tok.text == word

    def integer(self) -> int:
        return int(self.take("int", "an integer").text)

    # -- top level ---------------------------------------------------------

    def parse(self) -> GraphSpec:
        vertices: list[tuple[str, _Tok]] = []
        edges: list[tuple[Edge, _Tok]] = []
        ladder: LadderSpec | None = None
        ladder_tok: _Tok | None = None
        while self.tok.kind != "eof":
            t = self.tok
            if self.at_keyword("vertex"):
                self.i += 1
                vertices.append((self.take("id", "a vertex name").text, t))
                self.take(";", "';'")
            elif self.at_keyword("edge"):
                self.i += 1
                eid = self.take("id", "an edge name").text
                self.take(":", "':'")
                src = self.take("id", "a vertex name").text
                self.take("arrow", "'->'")
                dst = self.take("id", "a vertex name").text
                self.take(";", "';'")
                edges.append((Edge(eid, src, dst), t))
            elif self.at_keyword("infedges"):
                self.i += 1
                src = self.take("id", "a vertex name").text
                self.take("arrow", "'->'")
                dst = self.take("id", "a vertex name").text
                self.take(";", "';'")
                edges.append((Edge(family_id(src, dst), src, dst, True), t))
            elif self.at_keyword("ladder"):
                if ladder is not None:
                    raise LpgSemanticError("only one ladder block is allowed per file", t.line, t.col)
                self.i += 1
                ladder = self.ladder_block(t)
                ladder_tok = t
            else:
                raise self._fail("expected 'vertex', 'edge', 'infedges' or 'ladder'")
        if ladder is not None:
            if vertices or edges:
                raise LpgSemanticError(
                    "a file holds either finite statements or one ladder block, not both",
                    ladder_tok.line, ladder_tok.col,
                )
            return ladder
        return _build_finite(vertices, edges)

    def ladder_block(self, start: _Tok) -> LadderSpec:
        self.take("{", "'{'")
        spine: str | None = None
        loops = ColumnPattern()
        tails: list[TailFamily] = []
        exceptions: list[tuple[int, int]] = []
        while self.tok.kind != "}":
            t = self.tok
            if self.at_keyword("spine"):
                self.i += 1
                kind = self.take("id", "'nat' or 'int'")
                if kind.text not in ("nat", "int"):
                    raise self._fail("expected 'nat' or 'int'", kind)
                if spine is not None:
                    raise LpgSemanticError("spine declared twice", t.line, t.col)
                spine = kind.text
            elif self.at_keyword("loops"):
                self.i += 1
                loops = loops.union(self.pattern())
            elif self.at_keyword("tail"):
                self.i += 1
                tails.append(self.tail(t))
            elif self.at_keyword("tail_exception"):
                self.i += 1
                self.keyword("col")
                col = self.integer()
                self.keyword("length")
                ltok = self.tok
                length = self.integer()
                if length <= 0:
                    raise LpgSemanticError(f"tail exception length must be positive, got {length}",
                                           ltok.line, ltok.col)
                exceptions.append((col, length))
            else:
                raise self._fail("expected 'spine', 'loops', 'tail', 'tail_exception' or '}'")
            self.take(";", "';'")
        self.take("}", "'}'")
        try:
            return LadderSpec(spine or "nat", loops, tuple(tails), tuple(exceptions))
        except GraphError as exc:
            raise LpgSemanticError(str(exc), start.line, start.col) from None

    def pattern(self) -> ColumnPattern:
        if self.at_keyword("all"):
            self.i += 1
            return ColumnPattern(all=True)
        if self.at_keyword("none"):
            self.i += 1
            return ColumnPattern()
        if self.at_keyword("cols"):
            self.i += 1
            cols = {self.integer()}
            while self.tok.kind == ",":
                self.i += 1
                cols.add(self.integer())
            return ColumnPattern(cols=frozenset(cols))
        if self.at_keyword("from"):
            self.i += 1
            start = self.integer()
            self.keyword("step")
            stok = self.tok
            step = self.integer()
            if step <= 0:
                raise LpgSemanticError(f"loop step must be positive, got {step}", stok.line, stok.col)
            return ColumnPattern(progressions=((start, step),))
        raise self._fail("expected 'all', 'none', 'cols' or 'from'")

    def tail(self, t: _Tok) -> TailFamily:
        self.keyword("start")
        start = self.integer()
        self.keyword("step")
        stok = self.tok
        step = self.integer()
        if step <= 0:
            raise LpgSemanticError(f"tail step must be positive, got {step}", stok.line, stok.col)
        self.keyword("length")
        ltok = self.tok
        first = self.integer()
        if self.tok.kind == "*":
            self.i += 1
            self.keyword("t")
            slope, offset = first, 0
            if self.tok.kind == "+":
                self.i += 1
                offset = self.integer()
            elif self.tok.kind == "int" and self.tok.text[0] in "+-":
                offset = self.integer()
        else:
            slope, offset = 0, first
        if slope < 0:
            raise LpgSemanticError(f"tail slope must be non-negative, got {slope}", ltok.line, ltok.col)
        if offset <= 0:
            raise LpgSemanticError(
                f"tail length must be positive for every t, but is {offset} at t=0", ltok.line, ltok.col
            )
        return TailFamily(start, step, slope, offset)


def family_id(src: str, dst: str) -> str:
    return f"{src}_to_{dst}_inf"


def _build_finite(vertices: list[tuple[str, _Tok]], edges: list[tuple[Edge, _Tok]]) -> FiniteGraph:
    declared: dict[str, _Tok] = {}
    for name, tok in vertices:
        if name in declared:
            raise LpgSemanticError(f"vertex {name!r} declared twice", tok.line, tok.col)
        declared[name] = tok
    ids: set[str] = set()
    for e, tok in edges:
        if e.id in ids:
            raise LpgSemanticError(f"edge {e.id!r} declared twice", tok.line, tok.col)
        ids.add(e.id)
        for end in (e.src, e.dst):
            if end not in declared:
                raise LpgSemanticError(
                    f"edge {e.id!r} references undeclared vertex {end!r}", tok.line, tok.col
                )
    return FiniteGraph(tuple(n for n, _ in vertices), tuple(e for e, _ in edges))


def parse_graph(text: str) -> GraphSpec:
    """Parse ``.lpg`` source into a :class:`FiniteGraph` or :class:`LadderSpec`."""
    return _Parser(text).parse()


def load_graph(path) -> GraphSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(g: GraphSpec) -> str:
    """Print ``g`` in ``.lpg`` syntax; ``parse_graph(format_graph(g)) == g``."""
    if isinstance(g, LadderSpec):
        lines = ["ladder {", f"    spine {g.spine};"]
        p = g.loops
        if p.all:
            lines.append("    loops all;")
        if p.cols:
            lines.append("    loops cols " + ", ".join(str(c) for c in sorted(p.cols)) + ";")
        for a, m in p.progressions:
            lines.append(f"    loops from {a} step {m};")
        for f in g.tails:
            lines.append(f"    tail start {f.start} step {f.step} length {f.slope}*t+{f.offset};")
        for col, length in g.tail_exceptions:
            lines.append(f"    tail_exception col {col} length {length};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines = [f"vertex {v};" for v in g.vertices]
    for e in g.edges:
        if e.infinite_family:
            lines.append(f"infedges {e.src} -> {e.dst};")
        else:
            lines.append(f"edge {e.id}: {e.src} -> {e.dst};")
    return "\n".join(lines) + "\n"
