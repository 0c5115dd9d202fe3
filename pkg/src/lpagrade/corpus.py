"""The built-in example graphs: ladders A-K and a few finite fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .graph_model import GraphSpec
from .lpg import parse_graph

LADDERS = tuple("ABCDEFGHIJK")
FIXTURES = ("rose", "rose2", "two_cycle", "source_cycle", "sink_edge", "inf_emitter")

# A-G satisfy Condition (Y), H-K do not.
_EXPECTED_Y = {name: name in "ABCDEFG" for name in LADDERS}
_EXPECTED_Y.update({name: True for name in FIXTURES})
_EXPECTED_GRADED = dict(_EXPECTED_Y, sink_edge=False, inf_emitter=False)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    spec: GraphSpec
    expected_Y: bool
    expected_graded: bool


def corpus_text(name: str) -> str:
    return resources.files(__package__).joinpath("corpus").joinpath(f"{name}.lpg").read_text(encoding="utf-8")


def load_entry(name: str) -> CorpusEntry:
    if name not in _EXPECTED_Y:
        raise KeyError(f"no corpus entry named {name!r}")
    return CorpusEntry(name, parse_graph(corpus_text(name)), _EXPECTED_Y[name], _EXPECTED_GRADED[name])


def load_corpus(include_fixtures: bool = True) -> list[CorpusEntry]:
    names = LADDERS + (FIXTURES if include_fixtures else ())
    return [load_entry(n) for n in names]
