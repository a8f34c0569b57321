"""Reassembly trees for plane graphs via layered contraction."""

from __future__ import annotations

from .errors import ReasmError
from .generators import gen_constant_density, gen_hfk, inside_out_reassemble, load_corpus
from .ks_engine import run_ks, run_ks_lifted
from .layering import LayerDecomposition, decompose
from .oracle import optimal_alpha
from .plane_graph import PlaneGraph, build_plane_graph, graph_from_json, graph_to_json, load_graph
from .reassembly import ReassemblyTree, alpha_measure, normalize_no_zero_merges, validate_tree

__all__ = [
    "LayerDecomposition",
    "PlaneGraph",
    "ReasmError",
    "ReassemblyTree",
    "alpha_measure",
    "build_plane_graph",
    "decompose",
    "gen_constant_density",
    "gen_hfk",
    "graph_from_json",
    "graph_to_json",
    "inside_out_reassemble",
    "load_corpus",
    "load_graph",
    "normalize_no_zero_merges",
    "optimal_alpha",
    "run_ks",
    "run_ks_lifted",
    "validate_tree",
]
