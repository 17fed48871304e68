"""discrepancy_lab: exact desk-scale machinery for star-discrepancy lower bounds.

Layers, bottom up:

- ``dyadic``: exact dyadic intervals, boxes, signed Haar atoms, product rule
- ``gridfn``: exact rational function algebra on dyadic grids, square
  function, Monte-Carlo fallback
- ``pointset``: generators, exact star and L2 discrepancy, Haar coefficients
  of the discrepancy function
- ``riesz``: r-functions, the 2D and 3D Riesz products, duality certificates
- ``graphs``: two-colored coincidence graphs, tuple sets, norm-gain checks
- ``constants``: Lambert W, composition inequalities, the exponent
  optimization yielding eta < 1/(32 + 4 sqrt(41))
- ``cli``: the `disclab` command-line surface
"""

from .dyadic import (
    DyadicBox,
    DyadicInterval,
    SignedHaarAtom,
    haar_atom,
    haar_eval,
    make_box,
    make_interval,
    product_reduce,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    DiscrepancyLabError,
    DomainError,
    EmptyIntersection,
    GammaOutOfRange,
    NotConnected,
    NotStronglyDistinct,
    OffsetOutOfRange,
    ParameterDomain,
    ResolutionTooCoarse,
    UnsupportedDimension,
    UsageError,
    ZeroTestFunction,
)
from .gridfn import (
    Coordinate,
    GridFunction,
    NormEstimate,
    Product,
    Scaled,
    Sum,
    inner_product,
    lp_norm,
    lp_power_exact,
    lp_ratio_report,
    materialize,
    mc_lp_norm,
    square_function,
    square_function_sq,
)
from .pointset import (
    DiscrepancyReport,
    PointSet,
    discrepancy_value,
    generate,
    haar_coefficient,
    l2_discrepancy_exact,
    l2_discrepancy_sq_exact,
    load_points,
    save_points,
    star_discrepancy_exact,
)
from .riesz import (
    Certificate,
    HalaszProduct,
    HyperbolicVector,
    RFunction,
    RieszProduct3D,
    build_halasz,
    build_psi,
    certify,
    hyperbolic_vectors,
    make_r_function,
    product_of_r_functions,
    sd_inner_product,
    strongly_distinct,
)
from .graphs import (
    CliqueDecomposition,
    CoincidenceSet,
    GraphClass,
    TwoColoredGraph,
    classify,
    coincidence_set,
    count_generalized_trees,
    enumerate_admissible,
    prod_x,
    verify_beckgain,
)
from .constants import (
    ALPHA_OPT,
    EPSILON_MAX,
    ETA_MAX,
    OptimizationResult,
    ParameterSet,
    epsilon_tau,
    eta_bound,
    lambert_w0,
    lemma5_verify,
    optimize_alpha,
    stirling2,
    sum_chain_report,
    validate_parameters,
)

__version__ = "0.1.0"
