"""Even-cycle decompositions of signed graphs.

Construction of decomposition certificates for the graph classes built from
complete bipartite bases by odd expansion, apex addition, substitution, twin
substitution and joins; an independent exhaustive oracle for desk-scale
cross-checks; and a CLI that ties the two together.
"""

from .core import (
    EVEN,
    ODD,
    BoundExceededError,
    CertificateCheck,
    Cut,
    CycleDecomposition,
    Edge,
    EvcycError,
    GraphError,
    InternalError,
    NotACycleError,
    PreconditionError,
    SignatureClass,
    SignedMultigraph,
    SubdivisionProfile,
    cut,
    cycle_parity,
    cycle_space_dimension,
    graph_from_json,
    graph_to_json,
    is_equivalent,
    is_eulerian,
    lift_certificate,
    normalize_signature,
    resign,
    signature_from_json,
    signature_to_json,
    spanning_forest,
    subdivide,
    validate_certificate,
    vertex_parity,
    walk_cycle,
)
from .oracle import (
    CycleCatalog,
    StrongEcdReport,
    enumerate_cycles,
    enumerate_signature_classes,
    oracle_decompose,
    oracle_is_strongly_ecd,
)
from .recipes import (
    Apex,
    CliqueJoinK2,
    CompleteBipartite,
    CompleteBipartiteMinusC4,
    CompleteMultipartite,
    ExplicitBase,
    Join,
    K5PlusM,
    OddClique,
    OddExpansion,
    PreconditionReport,
    Realization,
    Recipe,
    Subdivide,
    Substitute,
    TwinSubstitute,
    is_coclaw,
    random_recipe,
    realize,
    recipe_from_json,
    recipe_to_json,
    validate_recipe,
)
from .decomposer import (
    almost_decompose,
    decompose,
    decompose_apex,
    decompose_bipartite,
    decompose_block,
    decompose_clique_join,
    decompose_join,
    decompose_k2n,
    decompose_k5_plus,
    decompose_multipartite,
    decompose_odd_complete,
    decompose_odd_expansion,
    decompose_substitution,
    decompose_twin_substitution,
    find_parity_four_cycle,
    k5_is_bad,
)

__all__ = [name for name in dir() if not name.startswith("_")]
