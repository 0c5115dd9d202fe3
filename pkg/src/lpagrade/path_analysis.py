"""Paths, in-path length sets, turning nodes and the Condition (Y)/(Y1) deciders.

Condition (Y): for every ``k >= 1`` and every infinite path ``p`` there is an
initial subpath ``alpha`` of ``p`` and a finite path ``beta`` with
``r(beta) = r(alpha)`` and ``|beta| - |alpha| = k``.  Condition (Y1) is the
``k = 1`` case.  ``r(alpha)`` is a *turning node* for ``alpha`` when some path
of length ``|alpha| + 1`` also ends there.

Finite graphs always satisfy both conditions: every infinite path visits a
vertex on a cycle, and a vertex on a cycle is the range of paths of every
positive length.  For ladders the conditions are decided in closed form from
the spine kind, the loop columns and the growth of the tails.  The deciders
are cross-checked by :func:`bounded_y_oracle`, a brute-force search on a
finite window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from . import koenig
from .graph_model import (
    Edge,
    FiniteGraph,
    GraphError,
    GraphSpec,
    LadderSpec,
    LadderVertex,
    materialize_window,
)
from .periodic import EventuallyPeriodicSet

VECTOR_CYCLE_CAP = 1 << 16


class PathError(GraphError):
    pass


@dataclass(frozen=True, order=True)
class Path:
    """A finite path; the empty path at ``v`` has ``start == end == v``."""

    edges: tuple[str, ...]
    start: str
    end: str

    @classmethod
    def trivial(cls, v: str) -> Path:
        return cls((), v, v)

    @classmethod
    def of(cls, g: GraphSpec, edge_ids: Iterable[str], start: str | None = None) -> Path:
        """Build and validate a path from edge ids (``start`` is needed only when empty)."""
        ids = tuple(edge_ids)
        if not ids:
            if start is None:
                raise PathError("an empty path needs a base vertex")
            if not g.has_vertex(start):
                raise PathError(f"unknown vertex {start!r}")
            return cls.trivial(start)
        es = [g.edge(i) for i in ids]
        for a, b in zip(es, es[1:]):
            if a.dst != b.src:
                raise PathError(f"edges {a.id} and {b.id} do not compose: r({a.id}) != s({b.id})")
        if start is not None and es[0].src != start:
            raise PathError(f"path does not start at {start!r}")
        return cls(ids, es[0].src, es[-1].dst)

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        return " ".join(self.edges) if self.edges else f"@{self.start}"

    def startswith(self, prefix: Path) -> bool:
        n = len(prefix.edges)
        return prefix.start == self.start and self.edges[:n] == prefix.edges

    def after(self, prefix: Path) -> Path:
        """The path ``q`` with ``prefix q == self``."""
        if not self.startswith(prefix):
            raise PathError(f"{prefix} is not an initial subpath of {self}")
        return Path(self.edges[len(prefix.edges):], prefix.end, self.end)

    def __add__(self, other: Path) -> Path:
        if self.end != other.start:
            raise PathError(f"cannot concatenate {self} (ends at {self.end}) and {other} (starts at {other.start})")
        return Path(self.edges + other.edges, self.start, other.end)

    def extend(self, e: Edge) -> Path:
        if e.src != self.end:
            raise PathError(f"edge {e.id} does not start at {self.end}")
        return Path(self.edges + (e.id,), self.start, e.dst)


def drop_last(g: GraphSpec, p: Path) -> Path:
    if not p.edges:
        raise PathError("the empty path has no last edge")
    return Path(p.edges[:-1], p.start, g.edge(p.edges[-1]).src)


def paths_up_to(g: FiniteGraph, n: int) -> list[Path]:
    """All paths of length ``<= n`` (empty paths included), shortest first.

    Infinite families contribute their member ``[0]`` only.
    """
    layer = [Path.trivial(v) for v in g.vertices]
    out = list(layer)
    for _ in range(n):
        layer = [p.extend(_concrete(e)) for p in layer for e in g.out_edges(p.end)]
        out.extend(layer)
    return out


def _concrete(e: Edge) -> Edge:
    return Edge(f"{e.id}[0]", e.src, e.dst) if e.infinite_family else e


def _memo(g: GraphSpec, key: str, build):
    cache = g.__dict__.setdefault("_analysis_cache", {})
    if key not in cache:
        cache[key] = build()
    return cache[key]


# ---------------------------------------------------------------------------
# in-path length sets


def in_path_length_table(g: FiniteGraph) -> dict[str, EventuallyPeriodicSet]:
    """``{v: {l >= 1 : some path of length l ends at v}}`` for every vertex of ``g``.

    Iterates the vertex bit-vector ``b_l`` ("some length-l path ends here")
    until the sequence repeats; the repeat gives threshold and period.
    """
    return _memo(g, "in_lengths", lambda: _compute_in_lengths(g))


def _compute_in_lengths(g: FiniteGraph) -> dict[str, EventuallyPeriodicSet]:
    index = {v: i for i, v in enumerate(g.vertices)}
    succ = [0] * len(g.vertices)
    for e in g.edges:
        succ[index[e.src]] |= 1 << index[e.dst]

    def step(b: int) -> int:
        out = 0
        while b:
            low = b & -b
            out |= succ[low.bit_length() - 1]
            b ^= low
        return out

    seen: dict[int, int] = {}
    vectors: list[int] = [0]  # l = 0 is not recorded (lengths start at 1)
    b = step((1 << len(g.vertices)) - 1)
    length = 1
    while b not in seen:
        if length > VECTOR_CYCLE_CAP:
            raise RuntimeError("in-path length vector did not cycle within the iteration cap")
        seen[b] = length
        vectors.append(b)
        b = step(b)
        length += 1
    mu = seen[b]
    period = length - mu
    table = {}
    for v, i in index.items():
        bit = 1 << i
        exc = frozenset(l for l in range(1, mu) if vectors[l] & bit)
        res = frozenset(l % period for l in range(mu, length) if vectors[l] & bit)
        table[v] = EventuallyPeriodicSet(exc, mu, period, res)
    return table


def _excess_prefix_max(spec: LadderSpec, n: int) -> int:
    """``max(0, max_{0 <= j <= n} (L(j) - j))`` for a nat spine (L = tail length)."""
    run: list[int] = _memo(spec, "excess_run", list)
    while len(run) <= n:
        j = len(run)
        prev = run[-1] if run else 0
        run.append(max(prev, spec.tail_length(j) - j))
    return run[n]


def ladder_in_path_lengths(spec: LadderSpec, v: str) -> EventuallyPeriodicSet:
    """Closed-form in-path lengths of a ladder vertex.

    A tail vertex at depth ``d`` of a tail of length ``L`` is reached only from
    above: lengths ``1..L-d``.  A spine vertex ``u_n`` is reached by every
    length when the spine is bi-infinite or a loop sits at some column
    ``<= n``.  Otherwise the spine contributes ``1..n`` and the tail at column
    ``j`` contributes ``n-j+1..n-j+L(j)``, which together form the interval
    ``1..n + max(0, max_j (L(j) - j))``.
    """
    lv = spec.locate(v)
    if lv.role == "tail":
        return EventuallyPeriodicSet.interval(1, spec.tail_length(lv.column) - lv.depth)
    n = lv.column
    if spec.spine == "int" or _first_loop_at_or_before(spec, n):
        return EventuallyPeriodicSet.at_least(1)
    return EventuallyPeriodicSet.interval(1, n + _excess_prefix_max(spec, n))


def _first_loop_at_or_before(spec: LadderSpec, n: int) -> bool:
    p = spec.loops
    if p.all:
        return True
    if any(c <= n for c in p.cols):
        return True
    return any(a <= n for a, _ in p.progressions)


def in_path_lengths(g: GraphSpec, v: str) -> EventuallyPeriodicSet:
    if isinstance(g, LadderSpec):
        return ladder_in_path_lengths(g, v)
    g.in_edges(v)  # validates v
    return in_path_length_table(g)[v]


# ---------------------------------------------------------------------------
# turning nodes and witnesses


def is_turning_node(g: GraphSpec, alpha: Path) -> bool:
    """True iff some path of length ``|alpha| + 1`` ends at ``r(alpha)``."""
    if not alpha.edges:
        raise PathError("turning nodes are defined for non-empty paths")
    Path.of(g, alpha.edges)
    return len(alpha) + 1 in in_path_lengths(g, alpha.end)


def lex_least_path_into(g: GraphSpec, w: str, length: int) -> Path | None:
    """Lexicographically least (by edge ids) path of the given length ending at ``w``."""
    if length == 0:
        return Path.trivial(w)
    # layers[i] = vertices from which some path of length i reaches w
    layers = [{w}]
    for _ in range(length):
        prev = layers[-1]
        layers.append({e.src for x in prev for e in g.in_edges(x)})
        if not layers[-1]:
            return None
    first = min(
        (e for x in layers[length - 1] for e in g.in_edges(x)),
        key=lambda e: e.id,
    )
    path = Path.trivial(first.src).extend(_concrete(first))
    for i in range(length - 2, -1, -1):
        nxt = min((e for e in g.out_edges(path.end) if e.dst in layers[i]), key=lambda e: e.id)
        path = path.extend(_concrete(nxt))
    return path


def find_turning_witness(g: GraphSpec, alpha: Path, k: int) -> Path | None:
    """Least path ``beta`` with ``r(beta) = r(alpha)`` and ``|beta| = |alpha| + k``."""
    if k < 1:
        raise ValueError("k must be positive")
    return lex_least_path_into(g, alpha.end, len(alpha) + k)


# ---------------------------------------------------------------------------
# Condition (Y) / (Y1)


@dataclass(frozen=True)
class Counterexample:
    start: str
    k: int
    tag: str = "follow spine"

    def describe(self) -> str:
        return f"infinite path from {self.start} ({self.tag}) fails for k={self.k}"


@dataclass(frozen=True)
class YVerdict:
    status: str  # holds | fails | unknown
    reason: str  # finite-graph-theorem | cycle-cover | int-spine | loop-reachable | slope-criterion | counterexample
    counterexample: Counterexample | None = None

    def __post_init__(self) -> None:
        if self.status == "fails" and self.counterexample is None:
            raise ValueError("a failing verdict needs a counterexample")


def cycle_cover_holds(g: FiniteGraph) -> bool:
    """Every infinite path meets a vertex lying on a cycle.

    Equivalently, the subgraph induced on vertices that lie on no cycle is
    acyclic, which is checked with Kahn's algorithm.
    """
    on_cycle = _vertices_on_cycles(g)
    rest = [v for v in g.vertices if v not in on_cycle]
    keep = set(rest)
    indeg = {v: 0 for v in rest}
    for e in g.edges:
        if e.src in keep and e.dst in keep:
            indeg[e.dst] += 1
    queue = [v for v in rest if indeg[v] == 0]
    removed = 0
    while queue:
        v = queue.pop()
        removed += 1
        for e in g.out_edges(v):
            if e.dst in keep:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    queue.append(e.dst)
    return removed == len(rest)


def _vertices_on_cycles(g: FiniteGraph) -> set[str]:
    """Vertices in a strongly connected component carrying at least one edge."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    result: set[str] = set()
    counter = 0
    for root in g.vertices:
        if root in index:
            continue
        work: list[tuple[str, Iterator[Edge]]] = [(root, iter(g.out_edges(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for e in it:
                w = e.dst
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.out_edges(w))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    if len(comp) > 1 or any(e.dst == v for e in g.out_edges(v)):
                        result.update(comp)
    return result


def ladder_holding_reason(spec: LadderSpec) -> str | None:
    """Why a ladder satisfies Condition (Y), or None when it does not.

    * ``int-spine``: every spine vertex is the range of paths of every length.
    * ``cycle-cover``: infinitely many loops, so every infinite path meets one.
    * ``loop-reachable``: a single loop at column ``c`` already makes every
      ``u_n`` with ``n >= c`` the range of paths of every length, and every
      infinite path eventually passes such a vertex.
    * ``slope-criterion``: some tail family grows faster than its step
      (``slope > step``), so ``L(j) - j`` is unbounded.

    Otherwise ``L(j) - j`` is bounded by some ``D`` and the spine path from
    ``u_0`` fails for ``k = D + 1``.
    """
    if spec.spine == "int":
        return "int-spine"
    if spec.loops.is_infinite:
        return "cycle-cover"
    if not spec.loops.is_empty:
        return "loop-reachable"
    if any(f.slope > f.step for f in spec.tails):
        return "slope-criterion"
    return None


def _stable_column(spec: LadderSpec) -> int:
    """A column past which ``max_{j<=n}(L(j) - j)`` no longer changes (bounded ladders only)."""
    cols = [f.start for f in spec.tails] + [c for c, _ in spec.tail_exceptions] + [0]
    steps = [f.step for f in spec.tails] + [1]
    return max(cols) + max(steps) * (len(spec.tail_exceptions) + 2)


def canonical_walk(spec: LadderSpec, start: str) -> Iterator[str]:
    """Vertices of the loop-free infinite path from ``start``: down its tail, then along the spine."""
    v = start
    while True:
        yield v
        v = next(e.dst for e in spec.out_edges(v) if e.dst != v)


def _walk_fails(spec: LadderSpec, start: str, k: int, stop_col: int) -> bool:
    """True iff no initial subpath of the canonical path from ``start`` admits a witness for ``k``.

    Past ``stop_col`` the answer no longer changes, so the scan stops there.
    """
    for i, w in enumerate(canonical_walk(spec, start)):
        if i + k in ladder_in_path_lengths(spec, w):
            return False
        lv = spec.locate(w)
        if lv.role == "spine" and lv.column > stop_col:
            return True
    raise AssertionError("unreachable")


def check_condition_Y(g: GraphSpec) -> YVerdict:
    if isinstance(g, FiniteGraph):
        if not cycle_cover_holds(g):
            raise AssertionError("a finite graph failed the cycle-cover test")
        return YVerdict("holds", "finite-graph-theorem")
    reason = ladder_holding_reason(g)
    if reason is not None:
        return YVerdict("holds", reason)
    stop = _stable_column(g)
    bound = _excess_prefix_max(g, stop) + 1
    k = next(k for k in range(1, bound + 1) if _walk_fails(g, "u0", k, stop))
    return YVerdict("fails", "counterexample", Counterexample("u0", k))


def check_condition_Y1(g: GraphSpec) -> YVerdict:
    if isinstance(g, FiniteGraph):
        if not cycle_cover_holds(g):
            raise AssertionError("a finite graph failed the cycle-cover test")
        return YVerdict("holds", "finite-graph-theorem")
    reason = ladder_holding_reason(g)
    if reason is not None:
        return YVerdict("holds", reason)
    stop = _stable_column(g)
    candidates = ["u0"] + [
        LadderVertex("tail", j, g.tail_length(j)).name for j in range(stop + 1) if g.tail_length(j)
    ]
    for start in candidates:
        if _walk_fails(g, start, 1, stop):
            return YVerdict("fails", "counterexample", Counterexample(start, 1))
    raise AssertionError("bounded ladder without a Y1 counterexample")


# ---------------------------------------------------------------------------
# the bad-path level system and bounded refutation of (Y1)


def bad_path_levels(g: GraphSpec, start: str, n_max: int) -> koenig.LevelSystem:
    """Level ``n``: paths of length ``n`` from ``start`` none of whose non-empty
    initial subpaths ends at a turning node; ``g_n`` drops the last edge."""
    levels: list[list[Path]] = []

    def level(n: int) -> list[Path]:
        while len(levels) < n:
            prev = levels[-1] if levels else [Path.trivial(start)]
            nxt = []
            for alpha in prev:
                for e in g.out_edges(alpha.end):
                    if e.infinite_family:
                        raise GraphError(f"{alpha.end} is an infinite emitter")
                    p = alpha.extend(e)
                    if not is_turning_node(g, p):
                        nxt.append(p)
            levels.append(nxt)
        return levels[n - 1]

    def step(n: int, p: Path) -> Path:
        return drop_last(g, p)

    g.out_edges(start)
    return koenig.LevelSystem(level, step, n_max, key=lambda p: p.edges)


def refute_Y1_bounded(g: GraphSpec, start: str, depth: int, lookahead: int | None = None) -> Path | None:
    """A length-``depth`` path from ``start`` all of whose non-empty initial
    subpaths end at non-turning nodes, chosen through the inverse-limit
    construction over ``depth + lookahead`` levels; None if there is none."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    sys = bad_path_levels(g, start, depth + (depth if lookahead is None else lookahead))
    try:
        thread = koenig.extract_thread(sys, depth)
    except koenig.EmptyLevelError:
        return None
    return thread.items[-1]


# ---------------------------------------------------------------------------
# brute-force window oracle for ladders


def oracle_window_cols(spec: LadderSpec, k_max: int = 6) -> int:
    """Window size for :func:`bounded_y_oracle`.

    At least ``4 * (k + largest exceptional column + |b| + 4)``, scaled up by the
    largest tail step and the other finite data so that fast-growing tails have
    room to overtake every start in the left half.
    """
    exc_col = max((abs(c) for c, _ in spec.tail_exceptions), default=0)
    exc_len = max((n for _, n in spec.tail_exceptions), default=0)
    b = max((abs(f.offset) for f in spec.tails), default=0)
    i0 = max((abs(f.start) for f in spec.tails), default=0)
    m = max((f.step for f in spec.tails), default=1)
    loop = min(
        [abs(c) for c in spec.loops.cols] + [abs(a) for a, _ in spec.loops.progressions], default=0
    )
    documented = 4 * (k_max + exc_col + b + 4)
    return max(documented, 4 * m * (k_max + exc_col + exc_len + b + i0 + loop + 4))


def _topological(g: FiniteGraph) -> list[str] | None:
    indeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        if e.src != e.dst:
            indeg[e.dst] += 1
    order = [v for v in g.vertices if indeg[v] == 0]
    i = 0
    while i < len(order):
        for e in g.out_edges(order[i]):
            if e.src != e.dst:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    order.append(e.dst)
        i += 1
    return order if len(order) == len(g.vertices) else None


def length_bitsets(g: FiniteGraph, cap: int) -> dict[str, int]:
    """Bit ``l`` of ``out[v]`` is set iff a path of length ``l <= cap`` ends at ``v`` (``l = 0`` included)."""
    mask = (1 << (cap + 1)) - 1
    order = _topological(g)
    bits = {v: 1 for v in g.vertices}
    if order is not None:
        for v in order:
            acc = 1
            for e in g.in_edges(v):
                if e.src != v:
                    acc |= bits[e.src] << 1
            if any(e.src == v for e in g.in_edges(v)):
                acc = mask  # a loop at v; 0 is always present so every length is reachable
            bits[v] = acc & mask
        return bits
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            acc = bits[v]
            for e in g.in_edges(v):
                acc |= bits[e.src] << 1
            acc &= mask
            if acc != bits[v]:
                bits[v], changed = acc, True
    return bits


def _failure_bitsets(g: FiniteGraph, lengths: dict[str, int], exits: set[str], cap: int) -> dict[str, int]:
    """Bit ``s`` of ``out[v]``: some path from ``v`` to an exit has, for every
    initial subpath of length ``i``, no path of length ``s + i`` into its range."""
    mask = (1 << (cap + 1)) - 1
    order = _topological(g)
    fail = {v: 0 for v in g.vertices}
    sweep = list(reversed(order)) if order is not None else list(g.vertices)
    changed = True
    while changed:
        changed = False
        for v in sweep:
            cont = mask if v in exits else 0
            for e in g.out_edges(v):
                cont |= fail[e.dst] >> 1
            new = ~lengths[v] & mask & cont
            if new != fail[v]:
                fail[v], changed = new, True
        if order is not None:
            break
    return fail


def bounded_y_oracle(spec: LadderSpec, k_max: int = 6, cols: int | None = None) -> tuple[bool, tuple[str, int] | None]:
    """Brute-force Condition (Y) check on a finite window of a ladder.

    For each start vertex in the left part of the window and each
    ``k <= k_max``, searches the window for a path from the start to the
    truncation boundary whose every initial subpath lacks a witness of length
    ``|alpha| + k``.  Returns ``(True, None)`` if no such path exists and
    ``(False, (start, k))`` for the first one found.
    """
    n = cols or oracle_window_cols(spec, k_max)
    w = materialize_window(spec, n)
    order = _topological(w)
    longest = {v: 0 for v in w.vertices}
    for v in order or ():
        for e in w.in_edges(v):
            if e.src != v:
                longest[v] = max(longest[v], longest[e.src] + 1)
    cap = max(longest.values(), default=0) + k_max + 2 if order else len(w.vertices) + k_max + 2
    lengths = length_bitsets(w, cap)
    exits = {v for v in w.boundary if not w.out_edges(v)}
    fail = _failure_bitsets(w, lengths, exits, cap)
    lo = -(n // 2) if spec.spine == "int" else 0
    for v in w.vertices:
        if not lo <= spec.locate(v).column <= n // 2:
            continue
        for k in range(1, k_max + 1):
            if fail[v] >> k & 1:
                return False, (v, k)
    return True, None
