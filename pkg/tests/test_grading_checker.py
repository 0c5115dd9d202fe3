import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpagrade import koenig
from lpagrade.corpus import load_entry
from lpagrade.graph_model import Edge, FiniteGraph, materialize_window
from lpagrade.grading_checker import (
    DepthCapExceeded,
    InfiniteEmitterError,
    SinkError,
    TurningDecomposition,
    WitnessError,
    decompose_source,
    degree_reduction_check,
    strong_grading_verdict,
    verify_decomposition,
    verify_S1Sm1,
    vertex_in_S1Sm1,
    vertex_in_Sm1S1,
)
from lpagrade.lpg import parse_graph
from lpagrade.path_analysis import Path, bad_path_levels

from oracles import random_finite_graph, random_no_sink_graph

ROSE = parse_graph("vertex v; edge e: v -> v;")
TWO_CYCLE = parse_graph("vertex u; vertex v; edge a: u -> v; edge b: v -> u;")
PARALLEL = parse_graph("vertex v; vertex w; edge f: v -> w; edge g: v -> w; edge h: w -> v;")
SINK = parse_graph("vertex v; vertex w; edge e: v -> v; edge f: v -> w;")
INF = FiniteGraph(("v", "w"), (Edge("e", "v", "v"), Edge("F", "v", "w", True), Edge("b", "w", "v")))


def P(g, text):
    return Path.trivial(text[1:]) if text.startswith("@") else Path.of(g, text.split())


def test_S1Sm1_witnesses():
    assert vertex_in_S1Sm1(ROSE, "v").edges == ("e",)
    w = vertex_in_S1Sm1(PARALLEL, "v")
    assert w.edges == ("f", "g") and verify_S1Sm1(PARALLEL, w)
    with pytest.raises(SinkError):
        vertex_in_S1Sm1(SINK, "w")
    with pytest.raises(InfiniteEmitterError):
        vertex_in_S1Sm1(INF, "v")
    window = materialize_window(load_entry("H").spec, 3)
    with pytest.raises(WitnessError):
        vertex_in_S1Sm1(window, "u3")


def test_non_source_uses_least_in_edge():
    dec = vertex_in_Sm1S1(TWO_CYCLE, "u")
    assert dec == TurningDecomposition("u", ((P(TWO_CYCLE, "@u"), P(TWO_CYCLE, "b")),), 0)
    assert verify_decomposition(TWO_CYCLE, dec)
    dec = vertex_in_Sm1S1(ROSE, "v")
    assert dec.pairs == ((P(ROSE, "@v"), P(ROSE, "e")),)


def test_decompose_rose():
    dec = decompose_source(ROSE, "v")
    assert dec.pairs == ((P(ROSE, "e"), P(ROSE, "e e")),) and dec.k == 1
    assert verify_decomposition(ROSE, dec)


def test_decompose_parallel_edges():
    dec = decompose_source(PARALLEL, "v")
    hf = P(PARALLEL, "h f")
    assert dec.pairs == ((P(PARALLEL, "f"), hf), (P(PARALLEL, "g"), hf))
    assert verify_decomposition(PARALLEL, dec)


def test_deep_source():
    # s -> a -> b -> c with a 2-cycle on c,d: the branch turns only once it reaches c,
    # where the cycle supplies a path one edge longer
    g = parse_graph("""
        vertex s; vertex a; vertex b; vertex c; vertex d;
        edge x: s -> a; edge y: a -> b; edge z: b -> c; edge p: c -> d; edge q: d -> c;
    """)
    dec = decompose_source(g, "s")
    assert [str(a) for a, _ in dec.pairs] == ["x y z"]
    assert dec.k == 3 == koenig.emptiness_index(bad_path_levels(g, "s", 10))
    assert verify_decomposition(g, dec)


def test_H_source_hits_cap():
    with pytest.raises(DepthCapExceeded) as exc:
        vertex_in_Sm1S1(load_entry("H").spec, "u0", depth_cap=16)
    assert exc.value.vertex == "u0" and "Condition (Y1)" in str(exc.value)


def test_tampered_decompositions_fail():
    dec = decompose_source(PARALLEL, "v")
    dropped = TurningDecomposition("v", dec.pairs[:1], dec.k)
    assert not verify_decomposition(PARALLEL, dropped)
    e = P(ROSE, "e")
    too_long = TurningDecomposition("v", ((e, P(ROSE, "e e e")),), 1)
    assert not verify_decomposition(ROSE, too_long)
    wrong_start = TurningDecomposition("u", ((P(TWO_CYCLE, "a"), P(TWO_CYCLE, "a b a")),), 1)
    assert not verify_decomposition(TWO_CYCLE, wrong_start)


def test_ladder_witnesses_verify_on_windows():
    D = load_entry("D").spec
    dec = vertex_in_Sm1S1(D, "t3_6")
    assert dec.k >= 1 and verify_decomposition(D, dec)


@pytest.mark.parametrize("g,verdict,obstruction", [
    (TWO_CYCLE, "yes", None),
    (ROSE, "yes", None),
    (SINK, "no", "has a sink: w"),
    (INF, "no", "not row-finite: v is an infinite emitter"),
])
def test_verdicts(g, verdict, obstruction):
    r = strong_grading_verdict(g)
    assert r.strongly_graded == verdict
    assert r.obstruction() == obstruction
    if verdict == "yes":
        assert len(r.witnesses) == len(g.vertices) and all(w.verified for w in r.witnesses)


def test_verdict_H():
    r = strong_grading_verdict(load_entry("H").spec, "H")
    assert r.strongly_graded == "no"
    assert r.obstruction().startswith("Condition (Y) fails")
    assert r.witnesses == []


def test_report_json_schema():
    doc = json.loads(strong_grading_verdict(load_entry("I").spec, "I").dumps())
    assert list(doc) == [
        "graph", "row_finite", "sinks", "infinite_emitters",
        "condition_Y", "condition_Y1", "strongly_graded", "witnesses",
    ]
    assert doc["condition_Y"] == {"status": "fails", "reason": "counterexample", "counterexample_k": 1, "start": "u0"}
    doc = strong_grading_verdict(ROSE, "rose").to_json()
    assert doc["condition_Y"] == {"status": "holds", "reason": "finite-graph-theorem"}
    assert doc["witnesses"] == [{"vertex": "v", "pairs": [{"alpha": "@v", "beta": "e"}], "k": 0, "verified": True}]


def test_render_mentions_each_clause():
    text = strong_grading_verdict(SINK, "s").render()
    for needle in ("row-finite: yes", "sinks: w", "Condition (Y): holds", "strongly graded: no"):
        assert needle in text


def test_degree_reduction():
    assert degree_reduction_check(ROSE, 5)
    assert degree_reduction_check(TWO_CYCLE, 5)
    assert degree_reduction_check(PARALLEL, 5)
    assert not degree_reduction_check(SINK, 5)


@given(st.integers(0, 100_000))
def test_random_graphs(seed):
    rng = random.Random(seed)
    g = random_finite_graph(rng, 5, 8)
    r = strong_grading_verdict(g)
    assert (r.strongly_graded == "yes") == (not g.sinks())
    if r.strongly_graded == "yes":
        for w in r.witnesses:
            d = w.decomposition
            assert w.verified and all(len(a) <= d.k for a, _ in d.pairs)


@given(st.integers(0, 100_000))
def test_degree_reduction_random(seed):
    g = random_no_sink_graph(random.Random(seed), 3, 5)
    assert degree_reduction_check(g, 2, seed)
