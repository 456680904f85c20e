"""Exact counting and uniform sampling of Euler tours of GSP multigraphs."""

from .errors import (
    ArithmeticIntegrityError,
    GSPError,
    InputError,
    LegalityError,
    OracleBoundError,
    RecognitionError,
    TreeSyntaxError,
)
from .gamma import GammaTable, PrecompTables, build_tables, count_tours, kappa, tour_weight
from .multigraph import Multigraph, format_graph, parse_graph
from .oracle import enumerate_decompositions, enumerate_tours, validate_tour
from .recognize import recognize
from .sampler import TourSampler, canonical_tour, format_tour_edges, sample_tour
from .tree import DecompTree, check_legal, parse_tree, realize, serialize_tree

__all__ = [
    "ArithmeticIntegrityError", "GSPError", "InputError", "LegalityError",
    "OracleBoundError", "RecognitionError", "TreeSyntaxError",
    "GammaTable", "PrecompTables", "build_tables", "count_tours", "kappa", "tour_weight",
    "Multigraph", "format_graph", "parse_graph",
    "enumerate_decompositions", "enumerate_tours", "validate_tour",
    "recognize",
    "TourSampler", "canonical_tour", "format_tour_edges", "sample_tour",
    "DecompTree", "check_legal", "parse_tree", "realize", "serialize_tree",
]
