"""Exact tools for cospectral mates of sparse random graphs."""

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "RootedGraph",
    "SampleConfig",
    "attach_rooted",
    "complement",
    "connected_components",
    "giant_component",
    "induced_subgraph",
    "k_core",
    "sample_gnp",
    "automorphism_moved_vertices",
    "canonical_form",
    "is_isomorphic",
    "IntPolynomial",
    "are_cospectral",
    "are_r_cospectral",
    "char_poly",
]

from .graph import (  # noqa: E402
    Graph,
    RootedGraph,
    SampleConfig,
    attach_rooted,
    complement,
    connected_components,
    giant_component,
    induced_subgraph,
    k_core,
    sample_gnp,
)
from .isomorphism import automorphism_moved_vertices, canonical_form, is_isomorphic  # noqa: E402
from .spectral import IntPolynomial, are_cospectral, are_r_cospectral, char_poly  # noqa: E402
