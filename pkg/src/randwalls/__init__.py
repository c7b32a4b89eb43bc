"""Finite tile and wall constructions for random groups at density d < 1/4."""

from .complexes import CellSpec, ComplexError, Gluing, PatchComplex, SubComplex
from .fixtures import FixtureError, build_fixture, fixture_names, load_catalog
from .metrics import (
    NotATreeError,
    alpha_regions,
    analyze_tree,
    cancellation,
    check_embedded_geodesics,
    classify_tree,
    ipi_check,
    skeleton_distance,
)
from .presentation import Presentation, relator_count, subdivision_factor
from .sampler import (
    check_admissible,
    enumerate_patches,
    random_patch,
    sample_presentation,
    stream_rng,
)
from .tiles import (
    Tile,
    TileCollection,
    TileConfig,
    TileError,
    age_compare,
    build_tile_collection,
    check_collection,
    is_potile,
)
from .tracer import (
    WallTrace,
    check_embedded,
    decompose,
    detect_returning,
    export_wallspace,
    trace_walls,
)
from .walls import (
    WallEdge,
    WallError,
    WallState,
    antipodal_walls,
    balance,
    bend_and_glue,
    check_tile_wall,
    classify_wall_case,
    lemma_suite,
    shard_of,
    verify_balanced,
    wall_components,
    wall_endpoints,
    wall_midpoints,
)

__version__ = "0.1.0"
