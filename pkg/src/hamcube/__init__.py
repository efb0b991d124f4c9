"""Hamiltonian cycles and paths in hypercubes with pairwise disjoint faulty edges.

The library decides, for an n-dimensional hypercube with a matching of faulty
edges, whether a fault-free Hamiltonian cycle exists and whether every pair
of opposite-parity vertices is joined by a fault-free Hamiltonian path; it
constructs explicit certificates for the positive answers and trap
certificates for the negative ones, and it ships an exhaustive oracle plus a
sweep harness that re-derives the small-cube classifications from scratch.
"""

from .core import (
    DEFAULT_MAX_DIMENSION,
    Edge,
    FaultSet,
    SubcubeRef,
    check_dimension,
    distance,
    format_fault_file,
    iter_edges,
    iter_vertices,
    make_fault_set,
    neighbor,
    parity,
    parse_fault_file,
    parse_vertex,
    vertex_str,
)
from .routes import (
    Route,
    RouteVerdict,
    format_certificate,
    parse_certificate,
    verify_route,
)
from .oracle import (
    DEFAULT_NODE_BUDGET,
    MAX_SEARCH_DIMENSION,
    SearchConstraints,
    count_hamiltonian_cycles,
    oracle_exists,
    oracle_find,
)
from .traps import (
    ClawTrap,
    Diagnosis,
    DtbceTrap,
    Feasibility,
    ScdhwTrap,
    SubcubeDhwTrap,
    detect_claw,
    detect_dtbce,
    detect_scdhw,
    detect_subcube_dhw,
    diagnose,
    hp_feasibility,
)
from .classical import (
    hp_avoiding_vertex,
    hp_few_faults,
    hp_through_edge,
    two_path_partition,
)
from .builder import (
    BuildTrace,
    build_hc,
    build_hp,
    build_hp_one_fault,
    gray_cycle,
    select_partition_dimension,
)
from .sweep import (
    CanonicalFaultSet,
    SweepReport,
    all_matchings,
    count_matchings,
    cube_automorphisms,
    canonical_form,
    enumerate_matchings,
    random_disjoint_faults,
    run_sweep,
)
from . import errors

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MAX_DIMENSION",
    "DEFAULT_NODE_BUDGET",
    "MAX_SEARCH_DIMENSION",
    "BuildTrace",
    "CanonicalFaultSet",
    "ClawTrap",
    "Diagnosis",
    "DtbceTrap",
    "Edge",
    "FaultSet",
    "Feasibility",
    "Route",
    "RouteVerdict",
    "ScdhwTrap",
    "SearchConstraints",
    "SubcubeDhwTrap",
    "SubcubeRef",
    "SweepReport",
    "all_matchings",
    "build_hc",
    "build_hp",
    "build_hp_one_fault",
    "canonical_form",
    "check_dimension",
    "count_hamiltonian_cycles",
    "count_matchings",
    "cube_automorphisms",
    "detect_claw",
    "detect_dtbce",
    "detect_scdhw",
    "detect_subcube_dhw",
    "diagnose",
    "distance",
    "enumerate_matchings",
    "errors",
    "format_certificate",
    "format_fault_file",
    "gray_cycle",
    "hp_avoiding_vertex",
    "hp_feasibility",
    "hp_few_faults",
    "hp_through_edge",
    "iter_edges",
    "iter_vertices",
    "make_fault_set",
    "neighbor",
    "oracle_exists",
    "oracle_find",
    "parity",
    "parse_certificate",
    "parse_fault_file",
    "parse_vertex",
    "random_disjoint_faults",
    "run_sweep",
    "select_partition_dimension",
    "two_path_partition",
    "verify_route",
    "vertex_str",
]
