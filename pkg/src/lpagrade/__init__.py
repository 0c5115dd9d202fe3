"""Decide strong Z-gradedness of Leavitt path algebras and certify the answer."""

from .graph_model import Edge, FiniteGraph, GraphError, LadderSpec, materialize_window
from .grading_checker import AnalysisReport, strong_grading_verdict
from .lpa_engine import Element, LeavittPathAlgebra
from .lpg import load_graph, parse_graph
from .path_analysis import Path, check_condition_Y, check_condition_Y1, in_path_lengths

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Edge",
    "Element",
    "FiniteGraph",
    "GraphError",
    "LadderSpec",
    "LeavittPathAlgebra",
    "Path",
    "check_condition_Y",
    "check_condition_Y1",
    "in_path_lengths",
    "load_graph",
    "materialize_window",
    "parse_graph",
    "strong_grading_verdict",
]
