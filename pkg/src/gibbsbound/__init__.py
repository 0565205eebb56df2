"""Explicit Wasserstein bounds between Gibbs measures and product laws.

The library computes closed-form distances between Ising models or
exponential random graph models and their mean-field product
approximations, and verifies them by simulating Glauber dynamics,
coupling chains, and exactly enumerating small instances.
"""

from .bounds import (
    C2,
    BoundReport,
    HighTempReport,
    TestFunction,
    bound_general_pnorm,
    bound_ising,
    bound_key1,
    bound_negbetas,
    bound_smallbetas,
    bound_triangle,
    bound_twostar,
    check_hightemp,
    delta_norm_hom,
    edge_density,
    hom_density,
    linear_function,
    matrix_pnorm,
    var_delta_t,
)
from .dynamics import (
    ChainState,
    CouplingPair,
    InfluenceMatrix,
    contraction_rho,
    glauber_step,
    greedy_coupled_step,
    influence_matrix,
    influence_sum,
    region_check,
    run_chain,
)
from .errors import (
    CapacityError,
    HypothesisFailure,
    NoContractionError,
    NonConvergenceError,
    UnsupportedMotifError,
)
from .florentine import florentine_graph, read_edge_list
from .graphs import (
    EDGE,
    TRIANGLE,
    TWOSTAR,
    EdgeIndex,
    LabeledGraph,
    Motif,
    delta2_t,
    delta_t,
    edge_linear,
    edge_pair,
    hamming,
    injection_count,
    parse_motif,
    r_motif,
    t_norm,
)
from .harness import (
    VerificationRun,
    batch_means,
    expect_h,
    florentine_demo,
    verify_bound,
)
from .meanfield import (
    FixedPoint,
    PhiPoly,
    finite_n_fixed_points,
    finite_n_phi,
    ising_fixed_point,
    mean_field_product,
    phi,
    solve_fixed_points,
)
from .models import (
    ErgmModel,
    IsingModel,
    ProductLaw,
    conditional,
    delta_L,
    exact_distribution,
    product_conditional,
    transition_matrix,
)
from .modelspec import load_model, loads_model, model_to_toml

__version__ = "0.1.0"
