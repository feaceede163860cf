"""Spread approximations toolkit for extremal set theory.

Families are :class:`SetFamily` objects over ``[n]`` with members stored as
integer bitmasks (bit ``i`` is element ``i + 1``).
"""

__version__ = "0.1.0"

from .family import (  # noqa: E402
    FamilyError,
    GroundSet,
    PartialPermutation,
    PermutationFamily,
    SetFamily,
    avoid,
    avoids_intersection,
    contains_some,
    cover_number,
    cube_family,
    fano_plane,
    is_regular,
    is_t_cross_dependent,
    is_t_intersecting,
    k_subsets,
    link,
    lower_shadow,
    mask_from_elements,
    product_family,
    slice_family,
    star,
    symmetric_group,
    symmetric_group_family,
    upper_shadow,
)
from .spread import (  # noqa: E402
    BudgetExceeded,
    RationalRoot,
    RegularityReport,
    SpreadReport,
    is_r_spread,
    is_rel_homogeneous,
    is_rq_spread,
    is_tau_homogeneous,
    regularity_check,
    spread_radius,
)
from .approximation import (  # noqa: E402
    ApproximationResult,
    ReductionChain,
    build_chain,
    check_chain_properties,
    check_S_t_intersecting,
    reduce_to_minimal,
    spread_approximate,
    verify_approximation,
)
from .probabilistic import (  # noqa: E402
    RngSpec,
    Sunflower,
    containment_probability,
    find_disjoint_pair_by_coloring,
    find_sunflower,
    sample_p_random,
    spread_lemma_audit,
    sunflower_thresholds,
)
from .oracle import (  # noqa: E402
    ExtremalResult,
    count_intersection_classes,
    derangement_count,
    hilton_milner_perm_family,
    is_trivial_t_intersecting,
    max_avoiding,
    max_regular_intersecting,
    max_t_intersecting,
    regular_feasibility,
)
