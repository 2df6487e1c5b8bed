"""Finite calculus of groupoids and bibundles."""

from .core import (
    FinCategory,
    FinGroupoid,
    FinSet,
    GroupoidHom,
    StructuralError,
    ValidationReport,
    Violation,
    action_groupoid,
    as_category,
    check_hom,
    compose_homs,
    connected_components,
    cyclic_groupoid,
    diagonal_hom,
    finset,
    identity_hom,
    one_object_groupoid,
    opposite_groupoid,
    pair_groupoid,
    point_hom,
    power_groupoid,
    product_groupoid,
    product_hom,
    swap_hom,
    terminal_hom,
    trivial_groupoid,
    validate_category,
    validate_groupoid,
)
from .labels import tup, untup
from .bibundle import (
    Bibundle,
    NoPairing,
    Pairing,
    PrincipalityReport,
    bibundle_from_tables,
    check_pairing_axioms,
    check_principal,
    compute_pairing,
    validate_bibundle,
)
from .calculus import (
    ComposedBibundle,
    IsoWitness,
    WeakIso,
    all_isos,
    assoc_witness,
    bundlize,
    chain_witnesses,
    comp_witness,
    compose,
    cv_bibundle,
    diagonal_bibundle,
    ev_bibundle,
    find_iso,
    flip_bibundle,
    identity_bibundle,
    identity_witness,
    interchange_witness,
    invert_witness,
    is_weak_isomorphism,
    lunit_witness,
    opposite_bibundle,
    relabel_bibundle,
    runit_witness,
    tensor_bibundle,
    tensor_witness,
    terminal_bibundle,
    validate_iso,
)
from .linking import (
    LinkingCategory,
    LinkingGroupoid,
    NotBiprincipal,
    assemble_linking_category,
    linking_category,
    linking_groupoid,
    principality_via_linking,
)
from .diagram import (
    DiagramEnv,
    DiagramError,
    IdentityCheck,
    check_identity,
    evaluate,
    parse,
    to_text,
)
from .groups import (
    CoherenceReport,
    CrossedModuleIncl,
    GroupReport,
    StackyGroupData,
    check_bimonoid,
    check_coherence,
    check_group,
    check_monoid,
    kronecker_finite,
    preinverse,
    two_group_from_crossed_module,
    validate_crossed_module,
)
from .simplicial import (
    ClassifyReport,
    HornFiller,
    KanReport,
    TruncatedSSet,
    classify,
    horn_set,
    kan_check,
    nerve,
    poset_category,
    truncated_free_monoid,
    validate_sset,
)

__version__ = "0.1.0"
