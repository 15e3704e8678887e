"""Fractional generalized cumulative entropy and related measures.

Closed forms for a catalog of laws, adaptive quadrature on CDF models,
dynamic (past and residual) variants, the proportional reversed hazards
model, bounds and stochastic-order comparisons, a nonparametric estimator
with seeded Monte Carlo, and the Riemann-Liouville representation.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .model import (  # noqa: F401
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    MeasureReport,
    Method,
    QuadratureConfig,
    Sample,
    SupportInterval,
    validate_model,
)
from .measures import (  # noqa: F401
    affine_transform,
    cumulative_entropy,
    differential_entropy,
    fgce,
    fgce_alpha0_limit,
    fgce_quantile_form,
    fgce_via_xi_expectation,
    fgcre,
    model_mean,
    nfgce,
    xi_alpha,
)
from .special import d_alpha, exp_integral, riemann_zeta  # noqa: F401
from .catalog import (  # noqa: F401
    CATALOG,
    BirthDeathFP,
    BoundedFrechet,
    DiscreteUniform,
    Exponential,
    Frechet,
    GeomCountingFC,
    HalfLogistic,
    Power,
    Uniform,
    catalog_sample,
    closed_form_fgce,
    closed_form_nfgce,
    parse_distribution,
    to_cdf_model,
)
from .dynamic import (  # noqa: F401
    cumulative_past_entropy,
    dyn_bounds_report,
    dyn_fgce,
    dyn_fgcre,
    dyn_nfgce,
    idfce_check,
    mean_inactivity,
    mrl,
    past_differential_entropy,
)
from .prhm import (  # noqa: F401
    IdentityCheck,
    PrhmSpec,
    dyn_fgce_prhm,
    dyn_fgcre_phm,
    e_theta,
    fgce_prhm,
    phm_model,
    phm_sandwich,
    prhm_model,
    prhm_sandwich,
    recurrence_n,
    recurrence_step,
    weighted_terms,
)
from .bounds import BoundReport, bound_power_of_ce, bound_sum_max, bound_triplet, convolve_cdf  # noqa: F401
from .orders import (  # noqa: F401
    MvtDecomposition,
    OrderVerdict,
    Relation,
    dfr_check,
    disp_implies_fgce,
    hr_dfr_implies,
    mvt_decomposition,
    order_dispersive,
    order_hr,
    order_st,
    st_counterexample_scan,
)
from .empirical import (  # noqa: F401
    ECDF,
    CltResult,
    ConvergencePoint,
    McConfig,
    PLANE_CRASH_CASUALTIES,
    clt_montecarlo,
    convergence_experiment,
    ecdf,
    empirical_fgce,
    exponential_sample_moments,
    phi_shape,
    plane_crash_dataset,
    prefix_fgce,
    simulate_estimates,
    spacing_weights,
    stability_probe,
    thresholds,
    uniform_sample_moments,
)
from .fractional import FracIntegralSpec, Side, cutoff_sequence, fgce_via_rl, fgcre_via_rl, rl_integral  # noqa: F401
from .rng import make_rng  # noqa: F401
