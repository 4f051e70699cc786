"""convtail: left-tail rare-event probabilities for sums of independent
non-negative random variables.

The density of the sum is built by iterative discrete linear
convolution of the grid-sampled factor densities and integrated with a
composite Newton-Cotes rule.  Direct convolution preserves relative
accuracy even for probabilities ~1e-100 and below; an FFT backend
trades that robustness for an O(N log N) cost.
"""

from .distributions import (
    BoundaryClass,
    DistKind,
    Distribution,
    boundary_class,
    chi_squared,
    exact_sum_cdf,
    generalized_gamma,
    kappa_mu,
    levy,
    lognormal,
    nakagami,
    parse_distribution,
    pdf,
    rayleigh,
    rice,
    weibull,
)
from .estimator import EstimateReport, EstimatorConfig, config, density_at_gamma, tail_probability
from .experiments import (
    fit_convergence_order,
    mc_oracle,
    run_convergence_study,
    run_cost_benchmark,
    run_precision_comparison,
)
from .fft import PrecisionMode, conv_fft, fft, ifft
from .grid_convolution import (
    BackendKind,
    ConvBackend,
    GridDensity,
    UniformGrid,
    conv_direct,
    conv_direct_endpoint,
    conv_fold_heterogeneous,
    sample_pdf,
    self_conv_power,
)
from .quadrature import BOOLE, SIMPSON, TRAPEZOID, NewtonCotesRule, integrate, weights

__version__ = "0.1.0"
