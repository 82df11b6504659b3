"""Critical groups of graphs via exact integer linear algebra.

Chip-firing divisors, Smith normal forms, arithmetical structures and
random-graph experiments, all over arbitrary-precision arithmetic.
"""

from .arith import (
    ArithmeticalStructure,
    critical_group_arith,
    enumerate_structures,
    g_r,
    is_smooth,
    kn_unit_fractions,
    order_formula_spanning,
    order_formula_tree,
    smooth_at,
    smoothable_vertices,
    validate,
)
from .critgrp import (
    AbelianGroup,
    CokernelResult,
    cokernel,
    cone_order_formula,
    critical_group,
    delta_generator_test,
    directed_critical_group,
    element_order,
    predicted_circulant_group,
    spanning_tree_count,
    spanning_tree_enumerate,
    subdivision_predict,
    sylow,
)
from .divisors import (
    Divisor,
    borrow,
    degree,
    delta_divisor,
    div_of_function,
    divisor_from_text,
    divisor_to_text,
    effective_equivalent,
    equivalent,
    fire,
    fire_set,
    gonality,
    has_positive_rank,
    is_principal,
    is_q_reduced,
    list_q_reduced_degree0,
    monodromy_pairing,
    pairing_gram,
    q_reduce,
    zero_divisor,
)
from .errors import (
    DisconnectedError,
    GraphParseError,
    GuardError,
    InvalidStructureError,
)
from .exactla import (
    IntegerMatrix,
    SNFResult,
    determinant,
    eval_charpoly,
    matrix_from_text,
    matrix_to_text,
    minors_gcd,
    rational_null_space,
    smith_normal_form,
    snf_diagonal,
    solve_integer,
)
from .graphs import (
    DirectedMultigraph,
    Multigraph,
    adjacency,
    cone,
    connected_components,
    directed_laplacian,
    family,
    genus,
    graph_to_text,
    is_connected,
    laplacian,
    parse_graph,
    realize_group,
    reduced_laplacian,
    subdivide,
    toggle_edge,
    wedge,
)
from .randomlab import (
    ExperimentConfig,
    ExperimentReport,
    aut_order,
    count_pairings,
    cyclic_constant,
    macwilliams_brute,
    macwilliams_count,
    mean_spanning_trees,
    run_experiment,
    sample_er,
    wood_probability,
)

__version__ = "0.1.0"
