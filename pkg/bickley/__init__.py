# Bickley function toolkit
# Evaluation of Ki_alpha(x) from its integral representation, closed-form
# bounds, an inequality harness with grid sweeps, Turán-type Hankel
# determinants with independent oracles, and a command-line front end.

from .models import (
    KiValue,
    McEstimate,
    Bracket,
    HolderBracket,
    HankelSpec,
    InequalityVerdict,
    GramVerdict,
    MonotoneVerdict,
    CompleteMonotoneVerdict,
    SweepReport,
    KiCache,
    BickleyDomainError,
    BickleyConvergenceError,
    ConfigError,
)
from .config import EvalConfig, McConfig, GridSpec, get_grid
from .engine import ki, ki_at_zero, ki_x_derivative, ki_alpha_derivative, ki_via_fractional
from .special import log_gamma, bessel_k0_reference, bessel_k1_reference
from .bounds import (
    bound_gamma_quarter,
    bound_power_exponential,
    bound_holder,
    bound_holder_mixed,
    bound_k0_gaussian,
    bracket_partial_alpha,
    bound_carlson,
    kimberling_constant,
)
from .harness import KiEvaluator, sweep, SUITES
from .determinants import (
    det_ki,
    leading_minors,
    det_oracle_2x2,
    det_oracle_mc,
    pool_mc_estimates,
    det_cm_probe,
)

__all__ = [
    'KiValue',
    'McEstimate',
    'Bracket',
    'HolderBracket',
    'HankelSpec',
    'InequalityVerdict',
    'GramVerdict',
    'MonotoneVerdict',
    'CompleteMonotoneVerdict',
    'SweepReport',
    'KiCache',
    'BickleyDomainError',
    'BickleyConvergenceError',
    'ConfigError',
    'EvalConfig',
    'McConfig',
    'GridSpec',
    'get_grid',
    'ki',
    'ki_at_zero',
    'ki_x_derivative',
    'ki_alpha_derivative',
    'ki_via_fractional',
    'log_gamma',
    'bessel_k0_reference',
    'bessel_k1_reference',
    'bound_gamma_quarter',
    'bound_power_exponential',
    'bound_holder',
    'bound_holder_mixed',
    'bound_k0_gaussian',
    'bracket_partial_alpha',
    'bound_carlson',
    'kimberling_constant',
    'KiEvaluator',
    'sweep',
    'SUITES',
    'det_ki',
    'leading_minors',
    'det_oracle_2x2',
    'det_oracle_mc',
    'pool_mc_estimates',
    'det_cm_probe',
]
