"""Numerical audit of rationally twisted GL(3) coefficient sums."""

from . import calibration, errors
from .hecke_coefficients import (
    CoefficientTable,
    SatakeSeed,
    SpectralParams,
    ThetaBound,
    build_table,
    hecke_bound_fit,
    rankin_selberg_report,
    schur_coefficient,
)
from .kloosterman import (
    ReducedFraction,
    kloosterman_crt,
    kloosterman_direct,
    mod_inverse,
    weil_check,
)
from .moments import (
    main_term_second_moment,
    pointwise_report,
    second_moment_exact,
    theorem2_report,
)
from .special_functions import (
    LineIntegralSpec,
    QuadratureConfig,
    bessel_j,
    bessel_main_term,
    complex_gamma,
    fdt_bound,
    log_gamma,
    omega_integral,
    omega_integral_result,
    perron_check,
)
from .voronoi import (
    NkSelection,
    VoronoiParams,
    direct_sum,
    error_budget,
    main_term,
    residual_report,
    select_nk,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientTable",
    "LineIntegralSpec",
    "NkSelection",
    "QuadratureConfig",
    "ReducedFraction",
    "SatakeSeed",
    "SpectralParams",
    "ThetaBound",
    "VoronoiParams",
    "bessel_j",
    "bessel_main_term",
    "build_table",
    "calibration",
    "complex_gamma",
    "direct_sum",
    "error_budget",
    "errors",
    "fdt_bound",
    "hecke_bound_fit",
    "kloosterman_crt",
    "kloosterman_direct",
    "log_gamma",
    "main_term",
    "main_term_second_moment",
    "mod_inverse",
    "omega_integral",
    "omega_integral_result",
    "perron_check",
    "pointwise_report",
    "rankin_selberg_report",
    "residual_report",
    "schur_coefficient",
    "second_moment_exact",
    "select_nk",
    "theorem2_report",
    "weil_check",
]
