"""Hamilton cycles and prescribed-length cycles in robustly expanding digraphs.

The construction avoids any density assumptions beyond robust expansion:
an absorber (ladders over a randomized pair cover, threaded onto one
cycle) swallows the paths left over from a 1-factor whose cycles were
merged by rotation-extension.
"""
from .digraph import (
    CycleReport,
    Digraph,
    VertexMap,
    canonical_cycle,
    format_edge_list,
    load_edge_list,
    parse_edge_list,
    save_edge_list,
    verify_cycle,
    verify_hamilton,
    verify_path,
)
from .expansion import (
    ExpansionParams,
    ExpansionVerdict,
    certify_exhaustive,
    check_nash_williams,
    deletion_stability,
    dib_transform,
    oriented_params,
    polyexp_threshold,
    refute_sampling,
    robust_in_neighborhood,
    robust_out_neighborhood,
)
from .pathfind import (
    AlternatingPath,
    build_alternating_path,
    build_disjoint_paths,
    build_path,
)
from .absorber import (
    Absorber,
    Cover,
    Ladder,
    absorb_path,
    absorb_paths,
    build_absorber,
    build_cover,
    build_ladder,
    build_ladders,
    cover_size,
    covers,
)
from .factor import (
    ExtensionStep,
    Factor,
    Prefactor,
    extend,
    find_factor,
    open_cycle,
    reach_terminus,
    reduce_cycles,
)
from .pipeline import (
    PipelineConfig,
    PipelineReport,
    StageCaps,
    brute_force_hamilton,
    find_cycle_through,
    find_hamilton,
    find_hamilton_outexpander,
    nash_williams_hamilton,
    oriented_hamilton,
)
from .generate import GeneratorSpec, generate

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
