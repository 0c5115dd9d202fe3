"""Strong Z-gradedness of Leavitt path algebras, with checkable witnesses.

``L(E)`` is strongly graded exactly when ``E`` is row-finite, has no sink and
satisfies Condition (Y).  Each clause is checked separately so a failing graph
gets a named obstruction.  For passing graphs every vertex ``v`` is certified
twice in the algebra:

* ``v = sum_{s(f)=v} f f*`` puts ``v`` in ``S_1 S_-1``;
* a :class:`TurningDecomposition` ``v = sum_i alpha_i beta_i* beta_i alpha_i*``
  with ``|beta_i| = |alpha_i| + 1`` puts ``v`` in ``S_-1 S_1``.

For a non-source the decomposition is the single pair ``(v, f)`` with ``f``
the least in-edge, i.e. ``v = f* f``.  For a source it comes from expanding
``v = sum f f*`` along out-edges until every branch ends at a turning node.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any

from . import koenig
from .graph_model import FiniteGraph, GraphError, GraphSpec, LadderSpec, LadderVertex, materialize_window
from .lpa_engine import Element, LeavittPathAlgebra, Monomial
from .path_analysis import (
    Path,
    YVerdict,
    bad_path_levels,
    check_condition_Y,
    check_condition_Y1,
    find_turning_witness,
    is_turning_node,
    paths_up_to,
)

DEFAULT_DEPTH_CAP = 64
LADDER_WITNESS_COLUMNS = 3


class WitnessError(GraphError):
    pass


class SinkError(WitnessError):
    """A sink has no witness: ``v = v^2`` would lie in ``v S_1 S_-1 = 0``."""


class InfiniteEmitterError(WitnessError):
    """``sum_{s(f)=v} f f*`` is not a finite sum at an infinite emitter."""


class DepthCapExceeded(WitnessError):
    """Expansion did not reach turning nodes in time; suspect a Condition (Y1) failure."""

    def __init__(self, vertex: str, depth_cap: int):
        self.vertex = vertex
        self.depth_cap = depth_cap
        super().__init__(
            f"no decomposition for {vertex} within depth {depth_cap} (suspected Condition (Y1) failure)"
        )


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class S1Sm1Witness:
    vertex: str
    edges: tuple[str, ...]  # v = sum over these of f f*


@dataclass(frozen=True)
class TurningDecomposition:
    vertex: str
    pairs: tuple[tuple[Path, Path], ...]
    k: int

    def max_alpha(self) -> int:
        return max((len(a) for a, _ in self.pairs), default=0)

    def to_json(self) -> dict[str, Any]:
        return {
            "vertex": self.vertex,
            "pairs": [{"alpha": str(a), "beta": str(b)} for a, b in self.pairs],
            "k": self.k,
        }


def _check_emitter(g: GraphSpec, v: str) -> None:
    if isinstance(g, FiniteGraph) and v in g.boundary:
        raise WitnessError(f"{v} is a window boundary vertex; widen the window")
    if g.is_infinite_emitter(v):
        raise InfiniteEmitterError(f"{v} is an infinite emitter")
    if g.is_sink(v):
        raise SinkError(f"{v} is a sink")


def vertex_in_S1Sm1(g: GraphSpec, v: str) -> S1Sm1Witness:
    _check_emitter(g, v)
    return S1Sm1Witness(v, tuple(e.id for e in g.out_edges(v)))


def decompose_source(g: GraphSpec, v: str, depth_cap: int = DEFAULT_DEPTH_CAP) -> TurningDecomposition:
    """Expand ``v = sum f f*`` breadth-first, least edge first, until every
    branch ``alpha`` ends at a turning node; then pair it with the least path
    ``beta`` into ``r(alpha)`` that is one edge longer."""
    _check_emitter(g, v)
    pairs: list[tuple[Path, Path]] = []
    frontier = [Path.trivial(v)]
    depth = 0
    while frontier:
        depth += 1
        if depth > depth_cap:
            raise DepthCapExceeded(v, depth_cap)
        nxt: list[Path] = []
        for alpha in frontier:
            _check_emitter(g, alpha.end)
            for e in g.out_edges(alpha.end):
                p = alpha.extend(e)
                if is_turning_node(g, p):
                    beta = find_turning_witness(g, p, 1)
                    assert beta is not None
                    pairs.append((p, beta))
                else:
                    nxt.append(p)
        frontier = nxt
    k = koenig.emptiness_index(bad_path_levels(g, v, depth_cap + 1))
    assert k is not None
    return TurningDecomposition(v, tuple(pairs), k)


def vertex_in_Sm1S1(g: GraphSpec, v: str, depth_cap: int = DEFAULT_DEPTH_CAP) -> TurningDecomposition:
    _check_emitter(g, v)
    ins = g.in_edges(v)
    if ins:
        return TurningDecomposition(v, ((Path.trivial(v), Path.of(g, [ins[0].id])),), 0)
    return decompose_source(g, v, depth_cap)


# ---------------------------------------------------------------------------
# symbolic verification


def _window_for(spec: LadderSpec, names) -> FiniteGraph:
    cols = [abs(spec.locate(n).column) for n in names]
    return materialize_window(spec, max(cols, default=0) + 1)


def algebra_for(g: GraphSpec, vertices=()) -> LeavittPathAlgebra:
    """The algebra of ``g``, or of a ladder window containing the given vertices."""
    if isinstance(g, LadderSpec):
        return LeavittPathAlgebra(_window_for(g, vertices))
    return LeavittPathAlgebra(g)


def _path_vertices(g: GraphSpec, p: Path) -> list[str]:
    return [p.start] + [g.edge(e).dst for e in p.edges]


def decomposition_sum(alg: LeavittPathAlgebra, dec: TurningDecomposition) -> Element:
    return alg.sum(alg.mono(a, b) * alg.mono(b, a) for a, b in dec.pairs)


def verify_decomposition(g: GraphSpec, dec: TurningDecomposition, alg: LeavittPathAlgebra | None = None) -> bool:
    """True iff ``v - sum alpha_i beta_i* beta_i alpha_i*`` is zero.

    Shapes are checked first: equal ranges and ``|beta_i| = |alpha_i| + 1``.
    """
    for a, b in dec.pairs:
        if a.end != b.end or len(b) != len(a) + 1 or a.start != dec.vertex:
            return False
    if alg is None:
        names = [dec.vertex] + [x for a, b in dec.pairs for p in (a, b) for x in _path_vertices(g, p)]
        alg = algebra_for(g, names)
    for a, b in dec.pairs:
        if alg.mono(a, b).is_homogeneous() != -1 or alg.mono(b, a).is_homogeneous() != 1:
            return False
    return alg.vertex(dec.vertex) == decomposition_sum(alg, dec)


def verify_S1Sm1(g: GraphSpec, w: S1Sm1Witness, alg: LeavittPathAlgebra | None = None) -> bool:
    if alg is None:
        alg = algebra_for(g, [w.vertex] + [g.edge(e).dst for e in w.edges])
    return alg.vertex(w.vertex) == alg.sum(alg.edge(e) * alg.ghost(e) for e in w.edges)


# ---------------------------------------------------------------------------
# the verdict


@dataclass(frozen=True)
class WitnessRecord:
    decomposition: TurningDecomposition
    verified: bool

    def to_json(self) -> dict[str, Any]:
        return {**self.decomposition.to_json(), "verified": self.verified}


def verdict_json(v: YVerdict) -> dict[str, Any]:
    out: dict[str, Any] = {"status": v.status, "reason": v.reason}
    if v.counterexample is not None:
        out["counterexample_k"] = v.counterexample.k
        out["start"] = v.counterexample.start
    return out


@dataclass
class AnalysisReport:
    graph: dict[str, Any]
    row_finite: bool
    infinite_emitters: list[str]
    sinks: list[str]
    condition_Y: YVerdict
    condition_Y1: YVerdict
    strongly_graded: str  # yes | no | unknown
    reasons: list[str]
    witnesses: list[WitnessRecord] = field(default_factory=list)

    def obstruction(self) -> str | None:
        if self.strongly_graded != "no":
            return None
        return self.reasons[0]

    def to_json(self) -> dict[str, Any]:
        return {
            "graph": self.graph,
            "row_finite": self.row_finite,
            "sinks": self.sinks,
            "infinite_emitters": self.infinite_emitters,
            "condition_Y": verdict_json(self.condition_Y),
            "condition_Y1": verdict_json(self.condition_Y1),
            "strongly_graded": self.strongly_graded,
            "witnesses": [w.to_json() for w in self.witnesses],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def render(self) -> str:
        g = self.graph
        lines = [f"graph {g['name']}: {g['kind']}" + (
            f", {g['vertices']} vertices, {g['edges']} edges" if g["kind"] == "finite" else f", {g['spine']} spine"
        )]
        lines.append(f"row-finite: {'yes' if self.row_finite else 'no'}" + (
            f" (infinite emitters: {', '.join(self.infinite_emitters)})" if self.infinite_emitters else ""
        ))
        lines.append("sinks: " + (", ".join(self.sinks) if self.sinks else "none"))
        for label, v in (("Condition (Y)", self.condition_Y), ("Condition (Y1)", self.condition_Y1)):
            line = f"{label}: {v.status} ({v.reason})"
            if v.counterexample is not None:
                line += f"; {v.counterexample.describe()}"
            lines.append(line)
        lines.append(f"strongly graded: {self.strongly_graded}")
        for r in self.reasons:
            lines.append(f"  {r}")
        if self.witnesses:
            ok = sum(w.verified for w in self.witnesses)
            lines.append(f"witnesses: {ok}/{len(self.witnesses)} vertices verified")
        return "\n".join(lines)


def _graph_summary(g: GraphSpec, name: str) -> dict[str, Any]:
    if isinstance(g, FiniteGraph):
        return {"name": name, "kind": "finite", "vertices": len(g.vertices), "edges": len(g.edges)}
    return {"name": name, "kind": "ladder", "spine": g.spine}


def _witness_vertices(g: GraphSpec) -> list[str]:
    if isinstance(g, FiniteGraph):
        return list(g.vertices)
    out = []
    for c in g.column_range(LADDER_WITNESS_COLUMNS):
        out.append(LadderVertex("spine", c, 0).name)
        out.extend(LadderVertex("tail", c, d).name for d in range(1, g.tail_length(c) + 1))
    return out


def certify_vertices(g: GraphSpec, depth_cap: int = DEFAULT_DEPTH_CAP) -> list[WitnessRecord]:
    """Both witnesses for every vertex (a finite window of columns for ladders)."""
    verts = _witness_vertices(g)
    decs = [vertex_in_Sm1S1(g, v, depth_cap) for v in verts]
    s1 = [vertex_in_S1Sm1(g, v) for v in verts]
    names = list(verts)
    for d in decs:
        names.extend(x for a, b in d.pairs for p in (a, b) for x in _path_vertices(g, p))
    for w in s1:
        names.extend(g.edge(e).dst for e in w.edges)
    alg = algebra_for(g, names)
    return [
        WitnessRecord(d, verify_decomposition(g, d, alg) and verify_S1Sm1(g, w, alg))
        for d, w in zip(decs, s1)
    ]


def strong_grading_verdict(g: GraphSpec, name: str = "E", depth_cap: int = DEFAULT_DEPTH_CAP) -> AnalysisReport:
    row_finite = g.is_row_finite()
    emitters = list(g.infinite_emitters()) if isinstance(g, FiniteGraph) else []
    sinks = list(g.sinks()) if isinstance(g, FiniteGraph) else []
    y = check_condition_Y(g)
    y1 = check_condition_Y1(g)
    reasons = []
    if sinks:
        reasons.append(f"has a sink: {sinks[0]}")
    if not row_finite:
        reasons.append(f"not row-finite: {emitters[0]} is an infinite emitter")
    if y.status == "fails":
        reasons.append(f"Condition (Y) fails: {y.counterexample.describe()}")
    if reasons:
        verdict = "no"
    elif y.status == "unknown":
        verdict = "unknown"
        reasons.append("Condition (Y) undecided")
    else:
        verdict = "yes"
        reasons = ["row-finite", "no sink", f"Condition (Y) holds ({y.reason})"]
    report = AnalysisReport(
        _graph_summary(g, name), row_finite, emitters, sinks, y, y1, verdict, reasons
    )
    if verdict == "yes":
        report.witnesses = certify_vertices(g, depth_cap)
        if not all(w.verified for w in report.witnesses):
            raise AssertionError("a vertex witness failed symbolic verification")
    return report


# ---------------------------------------------------------------------------
# the degree reduction S_1 S_-1 = S_-1 S_1 = S_0 at small scale


def random_homogeneous(alg: LeavittPathAlgebra, rng: random.Random, degree: int, max_len: int = 3, terms: int = 3) -> Element:
    """A random integer combination of monomials of the given degree (possibly zero)."""
    paths = paths_up_to(alg.graph, max_len)
    by_end: dict[str, list[Path]] = {}
    for p in paths:
        by_end.setdefault(p.end, []).append(p)
    out: dict[Monomial, int] = {}
    for _ in range(terms):
        a = rng.choice(paths)
        cands = [b for b in by_end[a.end] if len(a) - len(b) == degree]
        if cands:
            m = Monomial(a, rng.choice(cands))
            out[m] = out.get(m, 0) + rng.choice([-2, -1, 1, 2, 3])
    return alg.normal_form(out)


def degree_reduction_check(g: FiniteGraph, sample_size: int = 20, seed: int = 0) -> bool:
    """Small-scale check that ``S_n S_m`` lands in ``S_{n+m}`` and that degree-0
    basis monomials factor through ``S_1 S_-1`` and ``S_-1 S_1``.

    The factorisations use the vertex witnesses:
    ``alpha beta* = sum_f f (f* alpha beta*)`` and
    ``alpha beta* = sum_i (a_i b_i*)(b_i a_i* alpha beta*)``.
    Returns False when some vertex has no witness, e.g. at a sink.
    """
    alg = LeavittPathAlgebra(g)
    rng = random.Random(seed)
    for n in range(-3, 4):
        for m in range(-3, 4):
            for _ in range(sample_size):
                x = random_homogeneous(alg, rng, n)
                y = random_homogeneous(alg, rng, m)
                d = (x * y).degrees()
                if d and d != {n + m}:
                    return False
    try:
        s1 = {v: vertex_in_S1Sm1(g, v) for v in g.vertices}
        sm1 = {v: vertex_in_Sm1S1(g, v) for v in g.vertices}
    except WitnessError:
        return False
    paths = paths_up_to(g, 2)
    for a in paths:
        for b in paths:
            if len(a) != len(b) or a.end != b.end:
                continue
            mono = Monomial(a, b)
            if not alg.is_reduced(mono):
                continue
            z = alg.element({mono: 1})
            v = a.start
            left = [(alg.edge(f), alg.ghost(f) * z) for f in s1[v].edges]
            right = [(alg.mono(p, q), alg.mono(q, p) * z) for p, q in sm1[v].pairs]
            for parts, dx, dy in ((left, 1, -1), (right, -1, 1)):
                for x, y in parts:
                    if x.is_homogeneous() != dx or y.degrees() - {dy}:
                        return False
                if alg.sum(x * y for x, y in parts) != z:
                    return False
    return True
