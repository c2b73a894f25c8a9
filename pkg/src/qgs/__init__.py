"""Quantum graphs with delta couplings and their weighted discrete Laplacians."""
from .graph import Edge, InvalidGraphError, MetricGraph, UnknownVertexError, validate, weights
from .laplacian import assemble, degree_weighted_variant, eigen, quadratic_form
from .quantum import correspondence_report, eigenvalues_below, secular_matrix

__version__ = "0.1.0"

__all__ = [
    "Edge", "InvalidGraphError", "MetricGraph", "UnknownVertexError", "validate", "weights",
    "assemble", "degree_weighted_variant", "eigen", "quadratic_form",
    "correspondence_report", "eigenvalues_below", "secular_matrix",
]
