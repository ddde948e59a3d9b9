"""Exact anticoncentration toolkit for products of two-point random
variables on finite groups: worst-case walk bounds, exhaustive tightness
search, constructive two-point decomposition and seeded Monte Carlo."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    ResidueInterval,
    binary_walk_dist,
    build_bound_report,
    corollary_closed_form,
    erdos_interval_bound,
    evenly_spaced_binomial_sum,
    interval_Ink,
    m_tilde,
    proposition1_gap,
    signed_walk_dist,
    theorem1_bound,
    theorem2_bound,
    tiep_vu_bound,
)
from .decompose import PairMixture, decompose_to_pairs, mixture_law
from .dist import (
    ExactDist,
    TwoPointVar,
    convolve,
    mass_of_set,
    point_mass,
    product_walk,
    symmetric_pair,
    top_k_mass,
    top_k_witness,
    uniform_pair,
)
from .groups import (
    FiniteGroup,
    element_order,
    elements_with_min_order,
    group_from_spec,
    load_cayley,
    make_cyclic,
    make_cyclic_power,
    make_dihedral,
    make_direct_product,
    make_gl2,
    make_symmetric,
    validate_group,
)
from .montecarlo import MatrixPair, SampleReport, estimate_matrix_walk, estimate_rho, wilson_interval
from .search import (
    ConjectureVerdict,
    SearchResult,
    conjecture_probe,
    exhaustive_rho,
    lemma1_check,
    verify_theorem1,
    verify_theorem2,
)

__all__ = [name for name in dir() if not name.startswith("_")]
