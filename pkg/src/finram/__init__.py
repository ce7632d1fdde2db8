"""finram: exact finite-scale structural Ramsey computations.

Decides partition arrow relations on finite relational structures and
finite categories, computes exact big Ramsey degrees on finite hosts and
pool-relative small degrees, builds expansion functors with restriction
machinery, applies quantifier-free reducts, and machine-checks the
algebraic identities relating the degrees.
"""

from .arrows import (
    ArrowResult,
    Coloring,
    arrow_morphisms,
    arrow_objects,
    find_bad_coloring,
    sierpinski_coloring,
)
from .category import (
    WHOLE,
    BinaryDigraph,
    Diagram,
    FiniteCategory,
    Morphism,
    category_from_pool,
    category_from_tables,
    connected_components,
    dump_report,
    full_subcategory,
    has_commuting_cocone,
    hom_classes,
    is_locally_finite,
    is_universal_for,
    is_weakly_homogeneous_for,
    is_weakly_homogeneous_pair,
    predicates,
    restrict_category,
    sub_power_category,
    validate_category,
)
from .degrees import (
    DegreeReport,
    big_degree_exact,
    check_additivity,
    check_cocone_transfer,
    check_monotonicity,
    check_multiplicativity,
    check_smaller,
    check_sub_representation,
    pool_degree_exact,
    small_degree_bounds,
)
from .errors import (
    FinramError,
    GuardExceeded,
    HypothesisNotSatisfied,
    InputError,
    ParseError,
    SignatureMismatch,
)
from .expansion import (
    Expansion,
    ExpansionError,
    aut_count_identity,
    classify_restrictions,
    expansion_from_json,
    expansion_to_json,
    fiber,
    find_source_object,
    is_self_similar,
    make_expansion,
    order_forgetting_expansion,
    ordered_versions,
    property_checks,
    restriction,
)
from .formulas import (
    And,
    Atom,
    BuiltinReduct,
    Eq,
    Formula,
    Not,
    Or,
    Parity,
    ReductSpec,
    apply_reduct,
    builtin,
    builtin_reduct_spec,
    check_embedding_transport,
    evaluate,
    format_formula,
    parse_formula,
    parse_reduct_spec,
    trivial_reduct_spec,
)
from .structures import (
    CHAIN_SIG,
    GRAPH_SIG,
    ORDERED_GRAPH_SIG,
    TOURNAMENT_SIG,
    Embedding,
    Signature,
    Structure,
    are_isomorphic,
    automorphism_group,
    chain,
    clique,
    compose,
    constant_preserving_embeddings,
    empty_graph,
    encode_constants,
    enumerate_embeddings,
    graph_from_edges,
    identity_embedding,
    induced_substructure,
    is_embedding,
    parse_structure,
    path_graph,
    serialize_structure,
    tournament_cycle,
    tournament_from_arcs,
)

__version__ = "0.1.0"
