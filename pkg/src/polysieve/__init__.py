"""Bayesian density estimation with orthogonal-polynomial sieve priors."""
from .basis import (
    GENERALIZED_LEGENDRE,
    HERMITE,
    LAGUERRE,
    LEGENDRE,
    TRIGONOMETRIC,
    BasisFamily,
    Kind,
    basis_eval,
    derivative_coeffs,
    gamma,
    gamma_tilde,
    generalized_from_standard,
    generalized_to_standard,
    get_family,
    weight,
)
from .density import (
    CoefficientVector,
    ShiftParams,
    WeightedDensity,
    max_shift_level,
    normalize,
    project,
    shift_coefficients,
    shifted_density,
    sieve_membership,
)
from .divergence import DivergenceReport, divergence_report, hellinger, hellinger_sq, kl, log_var
from .errors import (
    CapabilityError,
    DegenerateNormalizationError,
    InputError,
    NumericError,
    NumericWarning,
    PolysieveError,
    StuckChainError,
)
from .inference import (
    MarkovChain,
    McmcConfig,
    SievePriorSpec,
    credible_bands,
    k_n_rule,
    log_likelihood,
    log_prior,
    posterior_mean_density,
    rw_metropolis,
    theoretical_sigmas,
)
from .quadrature import QuadratureRule, gauss_rule, integrate
from .sampling import TrueDensitySpec, build_true_density, draw

__version__ = "0.1.0"
