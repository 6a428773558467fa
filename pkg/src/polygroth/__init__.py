"""Polyadic (m-ary) semigroups and n-ary group completions of their doubles."""

from .core import (
    Carrier,
    CheckMode,
    CommutativityReport,
    FiniteCarrier,
    GroupVerdict,
    NAryOperation,
    PolyadicStructure,
    RuleCarrier,
    StructureReport,
    Verdict,
    check_doernte,
    check_total_associativity,
    commutativity_report,
    derived_structure,
    evaluate,
    find_identities,
    find_zeros,
    identity_placements,
    is_neutral_polyad,
    is_nilpotent,
    iterate,
    iterated_arity,
    iterated_eval,
    placement_result,
    polyadic_power,
    querelement,
    structure_report,
    verify_polyadic_group,
)
from .doubles import (
    Double,
    DoubledStructure,
    Intact,
    Pick,
    Product,
    QuiverSpec,
    all_doubles,
    apply_quiver,
    arity_after_intact,
    builtin_quiver,
    componentwise_power,
    double_carrier,
    format_quiver,
    hetero_power,
    identity_report_for_power,
    parse_quiver,
    swap_picks,
)
from .completion import (
    ClassDouble,
    CompletionGroup,
    ExactRule,
    Partition,
    QuerMap,
    WitnessSearch,
    build_completion,
    check_equivalence_axioms,
    check_relation_coincidence,
    check_universal_factorization,
    check_well_definedness,
    class_inverse,
    class_product,
    class_quer,
    completion_to_json,
    decide_equivalent,
    gauge_equivalent,
    gauge_witness,
    neutral_class,
    partition_classes,
    phi_sg,
    twist_equivalent,
    twist_witness,
)
from .structures import (
    StructureRecipe,
    detect_residue_arity,
    get_recipe,
    integers_group,
    integers_mod_group,
    matrix_4ary,
    nat0_monoid,
    neg_ternary,
    odd_ternary,
    recipe_names,
    residue_recipe,
    residue_structure,
    zmod_add,
    zmod_mul,
)
from .tables import format_table, parse_table, read_table, write_table
from . import errors

__version__ = "0.1.0"
