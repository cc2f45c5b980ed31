"""splitkit: normal forms, standard sets, crossing and intersection numbers of group splittings."""

from .bass_serre import TreeOrder, edge_order, local_tree, minimal_subtree
from .cayley import almost_invariance_verdict, ball, coboundary, estimate_ends, quotient_ball
from .crossing import (
    crosses,
    crosses_strongly,
    double_coset_reps,
    intersection_number,
    quadrant_verdicts,
    smallness_verdict,
    strong_intersection_number,
    two_sided_invariance_check,
)
from .dunwoody import (
    AbstractTree,
    GraphOfGroups,
    PosetWithInvolution,
    assemble_graph_of_groups,
    build_tree,
    collapse_edge,
    collapse_round_trip,
    order_from_paths,
    poset_from_halfspaces,
    validate_poset,
)
from .presentation import GroupPresentation, SubgroupSpec, parse_word, word_equals
from .splitting import (
    HalfSpace,
    Splitting,
    Variant,
    conjugate_splitting,
    half_space_membership,
    normal_form,
    splittings_equivalent,
    standard_side,
    validate_splitting,
)
from .surface_oracle import Slope, brute_force_crossing_count, slope_intersection, slope_splitting
from .verdict import CountReport, Verdict, VerdictState

__version__ = "0.1.0"
