"""Signaletic and citelangis operads, their actions on k-permutations, and poset operads."""

from .actions import (
    CapabilityError,
    Decomposition,
    apply,
    apply_messy,
    apply_tidy,
    bounded_cuts,
    check_relations,
    cut_profile,
    cuttable_compose,
    decompose,
    eval_tree,
    is_fully_cuttable,
    lexmin,
    rooted_cuts,
    zinbiel_compose,
)
from .citelangis import (
    CitelangisRewriter,
    char_poly,
    citelangis_relations,
    comb_series,
    conjecture_check,
    enumerate_normal_forms,
    hilbert_closed,
    hilbert_recursive,
    koszul_round_trip,
    min_poly,
    normal_form_count,
    reduced_matrix,
    transition_matrix,
)
from .combinatorics import (
    FormalSum,
    Multiposet,
    eulerian_number,
    eulerian_polynomial,
    k_permutations,
    linear_extensions,
    parse_word,
    shifted_shuffle,
    shuffle,
    worpitzky_holds,
)
from .posets import (
    RootedPoset,
    distinct_evaluations,
    eval_tree_poset,
    is_series_normal,
    pos_hilbert,
    poset_apply,
    poset_compose,
)
from .signaletic import compose_destination, signaletic_relations, signaletic_rewrite
from .trees import (
    LEAF,
    MESSY,
    PARALLEL,
    SERIES,
    TIDY,
    DestinationVector,
    Node,
    all_trees,
    destination,
    format_tree,
    parse_tree,
)

__version__ = "0.1.0"
