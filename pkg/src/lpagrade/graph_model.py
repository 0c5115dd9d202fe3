"""Directed graphs: explicit finite multigraphs and the infinite "ladder" family.

A ladder is a spine ``u_i -> u_{i+1}`` (``i >= 0`` for a ``nat`` spine, all
integers for an ``int`` spine), optional self-loops on selected columns, and
finite line "tails" that feed into spine vertices.  Every ladder is row-finite
and has no sink.

Vertex and edge names of a ladder are generated from their position::

    u3      spine vertex at column 3          un2   spine vertex at column -2
    t3_2    tail vertex, column 3, depth 2    s3    spine edge u3 -> u4
    l3      loop at u3                        e3_2  tail edge t3_2 -> t3_1

Depth 0 of a tail is the spine vertex itself, so ``e3_1`` ends at ``u3`` and
the tail top ``t3_L`` is a source.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Union

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_FAMILY_MEMBER = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]\Z")


class GraphError(ValueError):
    """Malformed graph data or a reference to something the graph lacks."""


class UnknownVertexError(GraphError, KeyError):
    def __str__(self) -> str:
        return ValueError.__str__(self)


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    # Countably many parallel edges src -> dst; members are named ``id[i]``.
    infinite_family: bool = False


def family_members(edge: Edge) -> Iterator[Edge]:
    """Yield the indexed members ``id[0], id[1], ...`` of an infinite family."""
    if not edge.infinite_family:
        raise GraphError(f"edge {edge.id} is not an infinite family")
    return (Edge(f"{edge.id}[{i}]", edge.src, edge.dst) for i in itertools.count())


# ---------------------------------------------------------------------------
# finite graphs


@dataclass(frozen=True)
class FiniteGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    # Artificial truncation ends of a ladder window; they are not real sinks/sources.
    boundary: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise GraphError(f"duplicate vertex {v!r}")
            seen.add(v)
        ids = set()
        for e in self.edges:
            if e.id in ids:
                raise GraphError(f"duplicate edge {e.id!r}")
            ids.add(e.id)
            for end in (e.src, e.dst):
                if end not in seen:
                    raise GraphError(f"edge {e.id!r} references undeclared vertex {end!r}")
        if not self.boundary <= seen:
            raise GraphError("boundary marks must name vertices of the graph")

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _adjacency(self) -> tuple[dict[str, tuple[Edge, ...]], dict[str, tuple[Edge, ...]]]:
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
            inc[e.dst].append(e)
        key = lambda e: e.id  # noqa: E731
        return (
            {v: tuple(sorted(es, key=key)) for v, es in out.items()},
            {v: tuple(sorted(es, key=key)) for v, es in inc.items()},
        )

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def _check(self, v: str) -> None:
        if v not in self._vertex_set:
            raise UnknownVertexError(f"unknown vertex {v!r}")

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        """Edges with source ``v`` sorted by id; infinite families appear as one marker edge."""
        self._check(v)
        return self._adjacency[0][v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        self._check(v)
        return self._adjacency[1][v]

    def edge(self, eid: str) -> Edge:
        """Look up an edge by id, resolving infinite-family members ``F[i]``."""
        e = self._edge_index.get(eid)
        if e is not None:
            return e
        m = _FAMILY_MEMBER.match(eid)
        if m:
            fam = self._edge_index.get(m.group(1))
            if fam is not None and fam.infinite_family:
                return Edge(eid, fam.src, fam.dst)
        raise GraphError(f"unknown edge {eid!r}")

    def is_row_finite(self) -> bool:
        return not any(e.infinite_family for e in self.edges)

    def infinite_emitters(self) -> tuple[str, ...]:
        srcs = {e.src for e in self.edges if e.infinite_family}
        return tuple(v for v in self.vertices if v in srcs)

    def is_infinite_emitter(self, v: str) -> bool:
        return any(e.infinite_family for e in self.out_edges(v))

    def sinks(self) -> tuple[str, ...]:
        out = self._adjacency[0]
        return tuple(v for v in self.vertices if not out[v] and v not in self.boundary)

    def sources(self) -> tuple[str, ...]:
        inc = self._adjacency[1]
        return tuple(v for v in self.vertices if not inc[v] and v not in self.boundary)

    def is_sink(self, v: str) -> bool:
        return not self.out_edges(v)

    def is_source(self, v: str) -> bool:
        return not self.in_edges(v)

    def is_induced_subgraph_of(self, other: FiniteGraph) -> bool:
        if not set(self.vertices) <= set(other.vertices):
            return False
        mine = set(self.edges)
        keep = set(self.vertices)
        induced = {e for e in other.edges if e.src in keep and e.dst in keep}
        return mine == induced


# ---------------------------------------------------------------------------
# ladders


class LadderVertex(NamedTuple):
    role: str  # "spine" or "tail"
    column: int
    depth: int  # 0 on the spine

    @property
    def name(self) -> str:
        if self.role == "spine":
            return f"u{col_token(self.column)}"
        return f"t{col_token(self.column)}_{self.depth}"


def col_token(c: int) -> str:
    return str(c) if c >= 0 else f"n{-c}"


_LADDER_ID = re.compile(r"([utsle])(n?)(\d+)(?:_(\d+))?\Z")


def _split_ladder_id(name: str) -> tuple[str, int, int | None] | None:
    m = _LADDER_ID.match(name)
    if not m:
        return None
    kind, neg, num, depth = m.groups()
    if neg and num == "0":
        return None
    col = -int(num) if neg else int(num)
    return kind, col, (int(depth) if depth is not None else None)


@dataclass(frozen=True)
class ColumnPattern:
    """A set of integer columns: everything, a finite list, and/or arithmetic progressions."""

    all: bool = False
    cols: frozenset[int] = frozenset()
    progressions: tuple[tuple[int, int], ...] = ()  # (start, step): start, start+step, ...

    def __contains__(self, c: int) -> bool:
        if self.all or c in self.cols:
            return True
        return any(c >= a and (c - a) % m == 0 for a, m in self.progressions)

    @property
    def is_empty(self) -> bool:
        return not (self.all or self.cols or self.progressions)

    @property
    def is_infinite(self) -> bool:
        return self.all or bool(self.progressions)

    def union(self, other: ColumnPattern) -> ColumnPattern:
        return ColumnPattern(
            self.all or other.all,
            self.cols | other.cols,
            self.progressions + tuple(p for p in other.progressions if p not in self.progressions),
        )


@dataclass(frozen=True)
class TailFamily:
    """At column ``start + step*t`` attach a line of ``slope*t + offset`` edges."""

    start: int
    step: int
    slope: int
    offset: int

    def length_at(self, col: int) -> int:
        if col < self.start or (col - self.start) % self.step:
            return 0
        t = (col - self.start) // self.step
        return self.slope * t + self.offset


@dataclass(frozen=True)
class LadderSpec:
    spine: str = "nat"
    loops: ColumnPattern = ColumnPattern()
    tails: tuple[TailFamily, ...] = ()
    # (column, length): overrides whatever the families attach at that column.
    tail_exceptions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.spine not in ("nat", "int"):
            raise GraphError(f"spine must be 'nat' or 'int', not {self.spine!r}")
        nat = self.spine == "nat"
        for fam in self.tails:
            if fam.step <= 0:
                raise GraphError(f"tail step must be positive, got {fam.step}")
            if fam.slope < 0:
                raise GraphError(f"tail slope must be non-negative, got {fam.slope}")
            if fam.offset <= 0:
                raise GraphError(f"tail length must be positive, got {fam.offset} at t=0")
            if nat and fam.start < 0:
                raise GraphError(f"tail start {fam.start} is left of column 0 on a nat spine")
        for col, length in self.tail_exceptions:
            if length <= 0:
                raise GraphError(f"tail exception length must be positive, got {length}")
            if nat and col < 0:
                raise GraphError(f"tail exception column {col} is left of column 0 on a nat spine")
        if nat:
            if any(c < 0 for c in self.loops.cols) or any(a < 0 for a, _ in self.loops.progressions):
                raise GraphError("loop columns must be non-negative on a nat spine")
        if any(m <= 0 for _, m in self.loops.progressions):
            raise GraphError("loop progression step must be positive")

    @cached_property
    def _exceptions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for col, length in self.tail_exceptions:
            out[col] = max(length, out.get(col, 0))
        return out

    def has_column(self, c: int) -> bool:
        return self.spine == "int" or c >= 0

    def tail_length(self, col: int) -> int:
        """Length of the tail feeding into ``u_col`` (0 when there is none)."""
        if not self.has_column(col):
            return 0
        if col in self._exceptions:
            return self._exceptions[col]
        return max((f.length_at(col) for f in self.tails), default=0)

    def has_loop(self, col: int) -> bool:
        return self.has_column(col) and col in self.loops

    def locate(self, name: str) -> LadderVertex:
        parts = _split_ladder_id(name)
        if parts is not None:
            kind, col, depth = parts
            if kind == "u" and depth is None and self.has_column(col):
                return LadderVertex("spine", col, 0)
            if kind == "t" and depth is not None and 1 <= depth <= self.tail_length(col):
                return LadderVertex("tail", col, depth)
        raise UnknownVertexError(f"unknown vertex {name!r}")

    def has_vertex(self, name: str) -> bool:
        try:
            self.locate(name)
        except UnknownVertexError:
            return False
        return True

    def edge(self, eid: str) -> Edge:
        parts = _split_ladder_id(eid)
        if parts is not None:
            kind, c, d = parts
            u = LadderVertex("spine", c, 0).name
            if kind == "s" and d is None and self.has_column(c):
                return Edge(eid, u, LadderVertex("spine", c + 1, 0).name)
            if kind == "l" and d is None and self.has_loop(c):
                return Edge(eid, u, u)
            if kind == "e" and d is not None and 1 <= d <= self.tail_length(c):
                below = u if d == 1 else LadderVertex("tail", c, d - 1).name
                return Edge(eid, LadderVertex("tail", c, d).name, below)
        raise GraphError(f"unknown edge {eid!r}")

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        lv = self.locate(v)
        c = col_token(lv.column)
        if lv.role == "tail":
            return (self.edge(f"e{c}_{lv.depth}"),)
        es = [self.edge(f"s{c}")]
        if self.has_loop(lv.column):
            es.append(self.edge(f"l{c}"))
        return tuple(sorted(es, key=lambda e: e.id))

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        lv = self.locate(v)
        c = col_token(lv.column)
        if lv.role == "tail":
            if lv.depth < self.tail_length(lv.column):
                return (self.edge(f"e{c}_{lv.depth + 1}"),)
            return ()
        es = []
        if self.has_column(lv.column - 1):
            es.append(self.edge(f"s{col_token(lv.column - 1)}"))
        if self.has_loop(lv.column):
            es.append(self.edge(f"l{c}"))
        if self.tail_length(lv.column):
            es.append(self.edge(f"e{c}_1"))
        return tuple(sorted(es, key=lambda e: e.id))

    def is_row_finite(self) -> bool:
        return True

    def is_infinite_emitter(self, v: str) -> bool:
        self.locate(v)
        return False

    def is_sink(self, v: str) -> bool:
        self.locate(v)
        return False

    def is_source(self, v: str) -> bool:
        return not self.in_edges(v)

    def column_range(self, cols: int) -> range:
        lo = -cols if self.spine == "int" else 0
        return range(lo, cols + 1)


GraphSpec = Union[FiniteGraph, LadderSpec]


# ---------------------------------------------------------------------------
# module-level operations


def out_edges(g: GraphSpec, v: str) -> tuple[Edge, ...]:
    return g.out_edges(v)


def detect_sinks(g: GraphSpec) -> tuple[str, ...]:
    """Exact sink set of a finite graph; always empty for a ladder.

    Ladder spine vertices emit their spine edge and tail vertices emit toward
    the spine, so no ladder vertex is a sink.  Window boundary marks are not
    reported either.
    """
    if isinstance(g, LadderSpec):
        return ()
    return g.sinks()


def is_row_finite(g: GraphSpec) -> bool:
    return g.is_row_finite()


def materialize_window(g: LadderSpec, cols: int) -> FiniteGraph:
    """Induced finite subgraph on spine columns ``0..cols`` (``-cols..cols`` for int spines).

    Every tail and loop at those columns is included.  The truncated spine
    ends are recorded in ``boundary``.
    """
    if cols < 1:
        raise GraphError("window must contain at least one column")
    colrange = g.column_range(cols)
    vertices: list[str] = []
    edges: list[Edge] = []
    for c in colrange:
        vertices.append(LadderVertex("spine", c, 0).name)
        for d in range(1, g.tail_length(c) + 1):
            vertices.append(LadderVertex("tail", c, d).name)
    for c in colrange:
        tok = col_token(c)
        if g.has_loop(c):
            edges.append(g.edge(f"l{tok}"))
        for d in range(1, g.tail_length(c) + 1):
            edges.append(g.edge(f"e{tok}_{d}"))
        if c < colrange[-1]:
            edges.append(g.edge(f"s{tok}"))
    boundary = {LadderVertex("spine", colrange[-1], 0).name}
    if g.spine == "int":
        boundary.add(LadderVertex("spine", colrange[0], 0).name)
    return FiniteGraph(tuple(vertices), tuple(edges), frozenset(boundary))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: GraphSpec, cols: int = 4, name: str = "E") -> str:
    """Render ``g`` (or a ``cols``-column window of a ladder) as a DOT digraph."""
    fg = materialize_window(g, cols) if isinstance(g, LadderSpec) else g
    lines = [f"digraph {_dot_id(name)} {{", "  node [shape=circle];"]
    for v in fg.vertices:
        if v in fg.boundary:
            lines.append(f"  {_dot_id(v)} [style=dashed, color=gray40];")
        else:
            lines.append(f"  {_dot_id(v)};")
    for e in fg.edges:
        if e.infinite_family:
            attrs = f"label={_dot_id(e.id + ' (inf)')}, style=bold"
        else:
            attrs = f"label={_dot_id(e.id)}"
        lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.dst)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
