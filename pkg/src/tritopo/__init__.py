"""Triangulated 3-manifold topology: homology, surfaces, linking, stratifications,
handle charts and a checked companion/embedding pipeline."""

from .complex import ChainZ2, SimplicialComplex, homology_rank, homology_ranks, is_boundary
from .errors import TopologyError
from .linking import Manifold3, linking_number
from .surface import SurfaceComplex, classify, find_nontrivial_circle

__all__ = [
    "ChainZ2",
    "Manifold3",
    "SimplicialComplex",
    "SurfaceComplex",
    "TopologyError",
    "classify",
    "find_nontrivial_circle",
    "homology_rank",
    "homology_ranks",
    "is_boundary",
    "linking_number",
]
