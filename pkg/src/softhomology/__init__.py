"""Shortest paths under soft homology constraints on triangulated surfaces with holes."""

from .blk import ClassRecord, SignatureBoundError, alpha_threshold, blk_search, loop_values
from .complex import (
    Rect,
    SimplicialSurface,
    SurfaceError,
    boundary_matrix,
    build_grid_complex,
    euler_characteristic,
    hole_cycles,
)
from .homology import (
    HarmonicBasis,
    SpectralGapError,
    are_homologous,
    class_key,
    harmonic_basis,
    harmonic_projection,
    hodge_laplacian_1,
    path_projection,
    projection_difference,
)
from .hstar import SearchResult, UnreachableError, hstar_search
from .oracle import ClassTable, enumerate_classes
from .paths import (
    Path,
    append_node,
    chain_of_path,
    concat,
    negate,
    path_weight,
    reference_from_keypoints,
    shortest_path,
)
from .rollout import fortified_rollout, pruned_rollout, stage_reference

__version__ = "0.1.0"
