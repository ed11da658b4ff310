"""Knot Floer homology of grid diagrams, with a poset laboratory."""

from __future__ import annotations

from .errors import (
    AsymmetryDetected,
    EmptyInterval,
    GridFormatError,
    IllegalCommutation,
    InexactDivision,
    NonIntegralAlexander,
    NotDestabilizable,
    OverflowGuard,
    ResourceLimit,
    UnsatisfiableSigns,
)
from .grid import (
    Grid,
    Marking,
    apply_symmetry,
    commute,
    destabilize,
    grid_from_json,
    link_components,
    markings,
    parse_grid,
    random_knot_grid,
    serialize_grid,
    stabilize,
)
from .gradings import alexander, bigrading, bigrading_with_u, j_pair, maslov
from .complexes import (
    ChainComplex,
    Domain,
    Rectangle,
    build_minus_complex,
    build_tilde_complex,
    connecting_domain,
    enumerate_generators,
    gen_from_colstring,
    gen_to_colstring,
    rect_moves_from,
    rectangles_between,
)
from .homology import BigradedRanks, extract_hat, homology, poincare_string
from .signs import SignAssignment, solve_signs
from .invariants import (
    AlexanderPolynomial,
    InvarianceReport,
    alexander_polynomial,
    apply_move,
    check_invariance,
    fibered,
    genus,
    hat_homology,
    legal_moves,
)
from .poset import (
    ELLabel,
    GridPoset,
    alexander_range,
    build_poset,
    components,
    del2_lands_in_boundaries,
    del_tower,
    el_increasing_chain_check,
    el_label,
    interval,
    maximal_chains,
    poset_stats,
    tower_sum,
)

__version__ = "0.1.0"
