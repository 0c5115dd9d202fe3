import random
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpagrade.graph_model import Edge, FiniteGraph, GraphError
from lpagrade.lpa_engine import (
    ElementParseError,
    LeavittPathAlgebra,
    Monomial,
    check_defining_relations,
    mono_key,
    mono_product,
)
from lpagrade.lpg import parse_graph
from lpagrade.path_analysis import Path, PathError, paths_up_to

from oracles import act, random_no_sink_graph, sample_infinite_paths

ROSE1 = parse_graph("vertex v; edge e: v -> v;")
ROSE2 = parse_graph("vertex v; edge e: v -> v; edge f: v -> v;")


@pytest.fixture
def rose2():
    return LeavittPathAlgebra(ROSE2)


def P(g, text):
    return Path.trivial(text[1:]) if text.startswith("@") else Path.of(g, text.split())


def test_mono(rose2):
    A = rose2
    assert A.mono(P(ROSE2, "e"), P(ROSE2, "@v")) == A.edge("e")
    assert str(A.mono(P(ROSE2, "e"), P(ROSE2, "e"))) == "v - (f|f)"
    line = parse_graph("vertex u; vertex w; edge a: u -> w;")
    L = LeavittPathAlgebra(line)
    assert L.mono(P(line, "a"), P(line, "@u")).is_zero()
    with pytest.raises(GraphError):
        A.mono(Path(("e", "zz"), "v", "v"), P(ROSE2, "@v"))
    with pytest.raises(PathError):
        A.mono(Path(("e",), "v", "v"), Path.trivial("nowhere"))


def test_multiply_examples(rose2):
    A = rose2
    assert A.ghost("e") * A.edge("e") == A.vertex("v")
    assert (A.ghost("e") * A.edge("f")).is_zero()
    one = LeavittPathAlgebra(ROSE1)
    assert one.edge("e") * one.ghost("e") == one.vertex("v")


def test_mono_product_rule():
    g = ROSE2
    x = Monomial(P(g, "e"), P(g, "f"))
    assert mono_product(x, Monomial(P(g, "f e"), P(g, "@v"))) == Monomial(P(g, "e e"), P(g, "@v"))
    assert mono_product(Monomial(P(g, "@v"), P(g, "e f")), Monomial(P(g, "e"), P(g, "@v"))) == Monomial(
        P(g, "@v"), P(g, "f")
    )
    assert mono_product(x, Monomial(P(g, "e"), P(g, "e"))) is None


def test_normal_form_examples(rose2):
    A = rose2
    assert A.parse_element("e e* + f f*") == A.vertex("v")
    assert A.parse_element("e e*").terms == A.parse_element("v - (f|f)").terms
    x = A.parse_element("3*(e f|f) - (f|e)")
    assert A.normal_form(x.terms).terms == x.terms


def test_equality_and_zero(rose2):
    A = rose2
    x = A.parse_element("2*(e|f) + v")
    assert A.is_zero(x - x)
    assert A.equals(A.parse_element("(e|e) + (f|f)"), A.vertex("v"))
    assert not A.equals(A.edge("e"), A.edge("f"))
    assert x - x == 0 and 0 + x == x
    assert hash(A.parse_element("e e* + f f*")) == hash(A.vertex("v"))


def test_grading(rose2):
    A = rose2
    x = A.edge("e") + A.ghost("e")
    assert x.degree_component(1) == A.edge("e")
    assert x.degree_component(-1) == A.ghost("e")
    assert x.is_homogeneous() is None
    assert A.vertex("v").is_homogeneous() == 0
    assert A.zero().is_homogeneous() is None
    assert A.parse_element("(e e|f)").is_homogeneous() == 1


def test_star(rose2):
    A = rose2
    assert A.edge("e").star() == A.ghost("e")
    x = A.parse_element("2*(e f|e) - (f|@v)")
    assert x.star().star() == x


def test_infinite_emitter_has_no_special_edge():
    g = FiniteGraph(("v", "w"), (Edge("a", "v", "w"), Edge("F", "v", "w", True), Edge("b", "w", "v")))
    A = LeavittPathAlgebra(g)
    assert A.special_edge("v") is None and A.special_edge("w") == "b"
    x = A.edge("a") * A.ghost("a")
    assert x.terms == {Monomial(P(g, "a"), P(g, "a")): 1}
    assert A.parse_element("(F[3]|F[3])") != A.vertex("v")
    assert A.ghost("F[1]") * A.edge("F[1]") == A.vertex("w")
    assert (A.ghost("F[1]") * A.edge("F[2]")).is_zero()


def test_parse_element_grammar(rose2):
    A = rose2
    assert A.parse_element("v") == A.vertex("v")
    assert A.parse_element("3*(e f | e) + v").terms == {
        Monomial(P(ROSE2, "@v"), P(ROSE2, "@v")): 1,
        Monomial(P(ROSE2, "e f"), P(ROSE2, "e")): 3,
    }
    assert A.parse_element("-e + 2*e") == A.edge("e")
    assert A.parse_element("(@v|e)") == A.ghost("e")
    assert A.parse_element("e*") == A.ghost("e")
    assert A.parse_element("0").is_zero()


def test_parse_element_warns_on_range_mismatch():
    g = parse_graph("vertex u; vertex w; edge a: u -> w; edge b: w -> u;")
    A = LeavittPathAlgebra(g)
    with pytest.warns(UserWarning, match="zero"):
        assert A.parse_element("(a|b)").is_zero()


@pytest.mark.parametrize("text", ["", "3 (e|e)", "(e|e", "(e e)", "x", "(e|@q)", "v +", "2", "(e|f) * v"])
def test_parse_element_errors(rose2, text):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(ElementParseError):
            rose2.parse_element(text)


def test_ill_formed_path_is_a_parse_error():
    g = parse_graph("vertex u; vertex w; edge a: u -> w; edge b: u -> u;")
    with pytest.raises(ElementParseError):
        LeavittPathAlgebra(g).parse_element("(a b|a b)")


def test_str_format(rose2):
    A = rose2
    assert str(A.zero()) == "0"
    assert str(A.parse_element("-(e|f) + 2*v")) == "2*v - (e|f)"


def test_monomial_order_is_by_length_first():
    ms = [Monomial(P(ROSE2, a), P(ROSE2, b)) for a, b in [("e e", "@v"), ("e", "e"), ("@v", "@v"), ("f", "e")]]
    assert [str(m) for m in sorted(ms, key=mono_key)] == ["v", "(e|e)", "(e e|@v)", "(f|e)"]


def test_relations_hold_on_small_graphs():
    rng = random.Random(5)
    for _ in range(20):
        assert check_defining_relations(LeavittPathAlgebra(random_no_sink_graph(rng, 4, 7))) == []


def test_relation_check_detects_a_broken_engine(rose2, monkeypatch):
    monkeypatch.setattr(LeavittPathAlgebra, "rewrite_once", lambda self, m: None)
    assert any(v.startswith("CK2") for v in check_defining_relations(rose2))


def _raw(alg, rng, max_len=2, terms=4):
    paths = paths_up_to(alg.graph, max_len)
    out = {}
    for _ in range(rng.randint(1, terms)):
        a = rng.choice(paths)
        b = rng.choice([p for p in paths if p.end == a.end])
        m = Monomial(a, b)
        out[m] = out.get(m, 0) + rng.choice([-2, -1, 1, 3])
    return out


@given(st.integers(0, 100_000))
def test_representation_cross_check(seed):
    # elements act on eventually periodic infinite paths; equal elements act alike
    rng = random.Random(seed)
    g = random_no_sink_graph(rng, 4, 7)
    A = LeavittPathAlgebra(g)
    vecs = [{p: 1} for p in sample_infinite_paths(g, rng, 6)]
    x_raw, y_raw = _raw(A, rng), _raw(A, rng)
    x, y = A.normal_form(x_raw), A.normal_form(y_raw)
    for vec in vecs:
        assert act(g, x.terms, vec) == act(g, x_raw, vec)
        assert act(g, (x * y).terms, vec) == act(g, x.terms, act(g, y.terms, vec))


@given(st.integers(0, 100_000))
def test_normal_forms_are_reduced_and_stable(seed):
    rng = random.Random(seed)
    A = LeavittPathAlgebra(random_no_sink_graph(rng, 4, 7))
    x = A.normal_form(_raw(A, rng, 3))
    assert all(A.is_reduced(m) for m in x.terms)
    assert A.normal_form(x.terms).terms == x.terms
    assert A.normal_form_by_monomial(x.terms).terms == x.terms


@given(st.integers(0, 100_000))
def test_local_units(seed):
    rng = random.Random(seed)
    A = LeavittPathAlgebra(random_no_sink_graph(rng, 4, 7))
    x = A.normal_form(_raw(A, rng, 3))
    verts = {p.start for m in x.terms for p in m}
    u = A.sum(A.vertex(v) for v in verts)
    assert u * x == x == x * u


@given(st.integers(0, 100_000))
def test_degree_additivity(seed):
    rng = random.Random(seed)
    A = LeavittPathAlgebra(random_no_sink_graph(rng, 4, 7))
    x = A.normal_form(_raw(A, rng, 3))
    y = A.normal_form(_raw(A, rng, 3))
    for n in x.degrees():
        for m in y.degrees():
            p = x.degree_component(n) * y.degree_component(m)
            assert not p or p.is_homogeneous() == n + m


def test_elements_of_different_algebras_do_not_mix(rose2):
    other = LeavittPathAlgebra(ROSE1)
    with pytest.raises(ValueError):
        rose2.vertex("v") + other.vertex("v")
