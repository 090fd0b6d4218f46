"""Wasserstein distances via quantile and copula formulas, certified against
an exact discrete optimal-transport oracle."""

from .copulas import (
    Comonotone,
    ComonotonePair,
    EmpiricalCopula,
    FHCheck,
    JointSpec,
    LowerFH,
    comonotone_coupling,
    discretize_joint,
    eval_M,
    eval_W,
    eval_copula,
    expect_comonotone,
    frechet_hoeffding_check,
    rectangle_volume,
    shared_copula_build,
    sklar_joint_cdf,
)
from .distributions import (
    Distribution1D,
    Empirical,
    Exponential,
    MomentCertificate,
    Normal,
    PointMass,
    Uniform,
    empirical_from_samples,
)
from .grids import GridSpec, adaptive_quadrature, exact_breakpoints, uniform_grid
from .oracle import (
    DiscreteCoupling,
    DiscreteMeasureND,
    brute_force_assignment,
    norm_cost,
    power_cost,
    solve_assignment,
    solve_ot,
    verify_comonotone_optimal,
    verify_projection_bound,
    verify_shared_copula_decomposition,
    verify_wpq_sandwich,
)
from .wasserstein import (
    DistanceReport,
    Method,
    MomentGateError,
    w1_cdf,
    wp_lower_bound_nd,
    wp_quantile,
    wp_shared_nd,
    wp_via_M,
    wpq_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "Comonotone",
    "ComonotonePair",
    "DiscreteCoupling",
    "DiscreteMeasureND",
    "DistanceReport",
    "Distribution1D",
    "Empirical",
    "EmpiricalCopula",
    "Exponential",
    "FHCheck",
    "GridSpec",
    "JointSpec",
    "LowerFH",
    "Method",
    "MomentCertificate",
    "MomentGateError",
    "Normal",
    "PointMass",
    "Uniform",
    "adaptive_quadrature",
    "brute_force_assignment",
    "comonotone_coupling",
    "discretize_joint",
    "empirical_from_samples",
    "eval_M",
    "eval_W",
    "eval_copula",
    "exact_breakpoints",
    "expect_comonotone",
    "frechet_hoeffding_check",
    "norm_cost",
    "power_cost",
    "rectangle_volume",
    "shared_copula_build",
    "sklar_joint_cdf",
    "solve_assignment",
    "solve_ot",
    "uniform_grid",
    "verify_comonotone_optimal",
    "verify_projection_bound",
    "verify_shared_copula_decomposition",
    "verify_wpq_sandwich",
    "w1_cdf",
    "wp_lower_bound_nd",
    "wp_quantile",
    "wp_shared_nd",
    "wp_via_M",
    "wpq_bounds",
]
