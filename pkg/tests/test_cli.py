import io
import json
from importlib import resources
from pathlib import Path

import pytest

from lpagrade.cli import run

GOLDEN = Path(__file__).parent / "golden"
CORPUS = resources.files("lpagrade").joinpath("corpus")

ANALYZE_KEYS = [
    "graph", "row_finite", "sinks", "infinite_emitters",
    "condition_Y", "condition_Y1", "strongly_graded", "witnesses",
]
VERDICT_KEYS = {"status", "reason", "counterexample_k", "start"}


def lpg(name):
    return str(CORPUS.joinpath(f"{name}.lpg"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def golden(name):
    return json.loads((GOLDEN / name).read_text())


@pytest.mark.parametrize("name,code", [("rose", 0), ("H", 2), ("D", 0), ("sink_edge", 2), ("source_cycle", 0)])
def test_analyze_json_golden(name, code):
    got_code, out, err = call("analyze", lpg(name), "--json")
    assert (got_code, err) == (code, "")
    doc = json.loads(out)
    assert doc == golden(f"analyze_{name}.json")
    assert list(doc) == ANALYZE_KEYS
    for key in ("condition_Y", "condition_Y1"):
        assert set(doc[key]) <= VERDICT_KEYS
    for w in doc["witnesses"]:
        assert list(w) == ["vertex", "pairs", "k", "verified"]
        assert all(list(p) == ["alpha", "beta"] for p in w["pairs"])


@pytest.mark.parametrize("name", ["rose", "H", "sink_edge", "inf_emitter", "I"])
def test_exit_code_ignores_json_flag(name):
    text_code, text, _ = call("analyze", lpg(name))
    json_code, _, _ = call("analyze", lpg(name), "--json")
    assert text_code == json_code
    assert "strongly graded: " in text


def test_analyze_text_rose():
    code, out, _ = call("analyze", lpg("rose"))
    assert code == 0
    assert "strongly graded: yes" in out and "witnesses: 1/1 vertices verified" in out


def test_corpus_golden():
    code, out, _ = call("corpus", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc == golden("corpus.json")
    assert [row["name"] for row in doc][:11] == list("ABCDEFGHIJK")
    for row in doc:
        assert list(row) == ["name", "expected_Y", "condition_Y", "strongly_graded", "match"]


def test_corpus_text_summary():
    code, out, _ = call("corpus")
    assert code == 0
    assert "ladders: 11/11 match" in out and "fixtures: 6/6 match" in out


def test_witness_golden():
    code, out, _ = call("witness", lpg("source_cycle"), "--vertex", "s", "--verify", "--json")
    assert code == 0
    assert json.loads(out) == golden("witness_source_cycle_s.json")


def test_witness_text():
    code, out, _ = call("witness", lpg("two_cycle"), "--vertex", "u", "--verify")
    assert code == 0
    assert "alpha = @u    beta = b" in out and "verified: yes" in out


def test_witness_depth_cap():
    code, out, err = call("witness", lpg("H"), "--vertex", "u0", "--depth-cap", "8")
    assert code == 70 and out == ""
    assert err.startswith("error:") and "u0" in err


def test_mult_ghost_times_edge():
    assert call("mult", lpg("rose"), "--lhs", "(@v|e)", "--rhs", "(e|@v)") == (0, "v\n", "")
    code, out, _ = call("mult", lpg("rose2"), "--lhs", "e*", "--rhs", "f")
    assert (code, out) == (0, "0\n")


def test_mult_on_ladder_window():
    code, out, _ = call("mult", lpg("H"), "--lhs", "s0*", "--rhs", "s0")
    assert (code, out) == (0, "u1\n")


def test_mult_range_mismatch_warns():
    code, out, err = call("mult", lpg("two_cycle"), "--lhs", "(a|b)", "--rhs", "u")
    assert (code, out) == (0, "0\n")
    assert err.startswith("warning:")


def test_dot(tmp_path):
    code, out, _ = call("dot", lpg("two_cycle"))
    assert code == 0 and out.startswith('digraph "two_cycle"')
    assert '"u" -> "v" [label="a"];' in out
    target = tmp_path / "d.dot"
    assert call("dot", lpg("D"), "--window", "2", "-o", str(target))[:2] == (0, "")
    assert '"t2_4"' in target.read_text()


@pytest.mark.parametrize("argv,code", [
    ([], 64),
    (["bogus"], 64),
    (["analyze"], 64),
    (["analyze", "/nonexistent/graph.lpg"], 64),
    (["witness", "FILE"], 64),
    (["dot", "FILE", "--window", "0"], 64),
    (["witness", "FILE", "--vertex", "nowhere"], 65),
    (["witness", "SINK", "--vertex", "w"], 65),
    (["mult", "FILE", "--lhs", "(e|", "--rhs", "v"], 65),
    (["analyze", "BAD"], 65),
])
def test_error_exit_codes(argv, code, tmp_path):
    bad = tmp_path / "bad.lpg"
    bad.write_text("vertex v; edge e: v -> nowhere;")
    subst = {"FILE": lpg("rose"), "SINK": lpg("sink_edge"), "BAD": str(bad)}
    got, out, err = call(*[subst.get(a, a) for a in argv])
    assert got == code
    assert out == ""
    assert err.startswith("error:")
