"""Outage probability of a cooperative cellular downlink.

The received signal is the sum over base stations in a cooperation annulus,
the interference the sum over stations beyond it; both are shot-noise
functionals of a Poisson point process.  This package computes the outage
probability Pr(theta * Y > X) four independent ways — characteristic-function
inversion, saddle point approximation with several base distributions,
orthogonal-series (Charlier) expansions, and Monte Carlo — so each route can
be checked against the others.
"""

from .cgf import (CaseAModel, CaseBModel, CaseCModel, GaussianCgf, PairCgf,
                  PairModel, case_a_cgf, case_a_saddle, case_b_cgf,
                  case_b_closed_deriv, case_c_cgf, pair_outage_exact)
from .charlier import (OrthogonalSystem, Polynomial, hermite_system,
                       krishnamoorthy_system, match_dof, orthogonal_moments,
                       outage_hermite, outage_krishnamoorthy,
                       pearson_orthopoly)
from .cumulants import (CumulantSet, FadingModel, MomentSet, NetworkGeometry,
                        campbell_cumulant, cumulants_to_moments,
                        moments_to_cumulants, omega_cumulant,
                        omega_cumulant_set, omega_shape_stats)
from .errors import (AccuracyError, ArgumentError, CapabilityError,
                     ConfigError, DivergenceError, DomainError, OutageError,
                     SaddleError, StripError)
from .gilpelaez import InversionConfig, ccdf, outage_gp
from .mc import EmpiricalResult, SimConfig, sample_cumulants, simulate
from .result import OutageResult
from .spa import SaddleContext, outage_spa, solve_saddle

__version__ = "1.0.0"

__all__ = [
    "AccuracyError", "ArgumentError", "CapabilityError", "CaseAModel",
    "CaseBModel", "CaseCModel", "ConfigError", "CumulantSet",
    "DivergenceError", "DomainError", "EmpiricalResult", "FadingModel",
    "GaussianCgf", "InversionConfig", "MomentSet", "NetworkGeometry",
    "OrthogonalSystem", "OutageError", "OutageResult", "PairCgf", "PairModel",
    "Polynomial", "SaddleContext", "SaddleError", "SimConfig", "StripError",
    "campbell_cumulant", "case_a_cgf", "case_a_saddle", "case_b_cgf",
    "case_b_closed_deriv", "case_c_cgf", "ccdf", "cumulants_to_moments",
    "hermite_system", "krishnamoorthy_system", "match_dof",
    "moments_to_cumulants", "omega_cumulant", "omega_cumulant_set",
    "omega_shape_stats", "orthogonal_moments", "outage_gp", "outage_hermite",
    "outage_krishnamoorthy", "outage_spa", "pair_outage_exact",
    "pearson_orthopoly", "sample_cumulants", "simulate", "solve_saddle",
    "__version__",
]
