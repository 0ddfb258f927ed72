"""Exact tools for odd-red perfect matching polytopes and odd-cycle dominants."""
from .errors import CertificationError, InputError, OddRedError, SizeLimitError, ValidityError
from .graphs import (CROSS, IDENTITY, Cycle, Graph, Matching, RedBlueGraph, complete_bipartite, complete_graph,
                     doubled_graph, enumerate_odd_cycles, enumerate_odd_red_perfect_matchings,
                     enumerate_perfect_matchings)
from .kernels import BACKEND
from .polyhedra import Constraint, FacetCertificate, conv_membership

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CROSS",
    "CertificationError",
    "Constraint",
    "Cycle",
    "FacetCertificate",
    "Graph",
    "IDENTITY",
    "InputError",
    "Matching",
    "OddRedError",
    "RedBlueGraph",
    "SizeLimitError",
    "ValidityError",
    "complete_bipartite",
    "complete_graph",
    "conv_membership",
    "doubled_graph",
    "enumerate_odd_cycles",
    "enumerate_odd_red_perfect_matchings",
    "enumerate_perfect_matchings",
]
