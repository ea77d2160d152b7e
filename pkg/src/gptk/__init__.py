"""gptk: exact-rational toolkit for test spaces, order-unit spaces and composites."""

from .errors import (
    ConsistencyError,
    GptkError,
    InputError,
    ResourceLimitError,
    StructureError,
)
from .ous import (
    OrderUnitSpace,
    cone_contains,
    dual_rays,
    is_effect,
    is_order_unit,
    is_state,
    state_polytope_vertices,
    sub_ous,
)
from .testspace import (
    TestSpace,
    coarse_graining,
    complementary,
    is_algebraic,
    is_irredundant,
    is_probability_weight,
    make_testspace,
    perspective,
    weight_equality_bound,
    weight_polytope_vertices,
)
from .vweight import Model, ValuedWeight, canonical_weight, factorization_check, is_valued_weight, pullback_state
from .modj import (
    Catalog,
    Observable,
    boolean_testspace,
    build_modj,
    decompositions_fragment,
    extend_to_state,
    lemma1_check,
    observable,
    observable_graph,
)
from .logic import (
    EffectAlgebraTable,
    algebraicity_transfer_check,
    is_orthoalgebra,
    logic_of,
    star_logic_iso_check,
    star_product,
)
from .channel import (
    LinearMap,
    MarkovKernel,
    compose_valued_weight,
    induced_morphism,
    is_channel,
    is_process,
    markov_compose,
    markov_dual,
    restrict_to_sub_ous,
)
from .composite import (
    BilinearRule,
    composite_flags,
    conditionals,
    is_joint_state,
    is_nonsignalling,
    is_separable,
    max_cone_contains,
    max_rule,
    min_cone_contains,
    min_rule,
    monoidal_map,
    monoidality_check,
    product_testspace,
)
from .dacey import (
    ApproxClasses,
    DaceyCover,
    Derandomization,
    approx_classes,
    dacey_cover,
    dacey_sum,
    derandomize,
    graph_of_morphism,
    simulate_check,
)

__version__ = "0.1.0"
