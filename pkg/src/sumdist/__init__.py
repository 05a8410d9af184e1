"""Distribution of Z = X + Y for dependent standard normal X, Y.

Dependence is modeled by one of five copulas (Gauss, Student-t, Clayton,
Gumbel, Frank).  The package computes the joint density induced by a copula
with N(0,1) margins, integrates it to the distribution function of the sum,
extracts quantiles, and cross-checks everything against its own Monte Carlo
sampler.
"""

from .copula import (
    CopulaFamily,
    CopulaSpec,
    DependenceSummary,
    copula_cdf,
    copula_density,
    spec_from_rho,
    summarize_dependence,
    tau_from_pearson_rho,
    tau_from_theta,
    theta_from_tau,
)
from .errors import DomainError, QuantileOutOfRange
from .grid import PAPER_GRID, GridSpec
from .jointdensity import JointDensityModel, joint_pdf, joint_pdf_grid
from .sampler import (
    RandomSource,
    SampleSet,
    empirical_cdf,
    estimate_spearman_rho,
    estimate_tau,
    sample_copula,
    sample_sum,
)
from .sumcdf import (
    TABLE2_RHOS,
    DistributionTable,
    QuantileReport,
    TableMode,
    cdf_paper_exact,
    cdf_refined,
    quantile,
    quantile_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CopulaFamily",
    "CopulaSpec",
    "DependenceSummary",
    "DistributionTable",
    "DomainError",
    "GridSpec",
    "JointDensityModel",
    "PAPER_GRID",
    "QuantileOutOfRange",
    "QuantileReport",
    "RandomSource",
    "SampleSet",
    "TABLE2_RHOS",
    "TableMode",
    "__version__",
    "cdf_paper_exact",
    "cdf_refined",
    "copula_cdf",
    "copula_density",
    "empirical_cdf",
    "estimate_spearman_rho",
    "estimate_tau",
    "joint_pdf",
    "joint_pdf_grid",
    "quantile",
    "quantile_sweep",
    "sample_copula",
    "sample_sum",
    "spec_from_rho",
    "summarize_dependence",
    "tau_from_pearson_rho",
    "tau_from_theta",
    "theta_from_tau",
]
