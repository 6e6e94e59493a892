"""Moving block bootstrap for the empirical process of long-memory data.

Subpackages map onto the workflow: :mod:`lrd_gauss` simulates the Gaussian
layer, :mod:`hermite` computes ranks and coefficients of the indicator class,
:mod:`empirical` evaluates ``W_n`` and ``S_n``, :mod:`mbb` bootstraps them,
:mod:`estimator` turns replicates into an estimate of ``|J_m|`` and
:mod:`experiments` runs reproducible Monte Carlo scenarios.
"""

from .empirical import (
    Grid,
    SubordinatedSample,
    empirical_process,
    normalizer_dn,
    reduction_residual,
    simulate_sample,
)
from .errors import (
    ConfigError,
    DegenerateSample,
    EmbeddingNotPSD,
    LRDBootError,
    QuadratureFailure,
    RankNotFound,
    RankTooLarge,
    RegimeViolation,
)
from .estimator import JmEstimate, estimate_jm, sup_abs_deviation
from .hermite import HermiteProfile, Transform, build_profile, hermite_coeff, true_cdf
from .lrd_gauss import CovarianceModel, autocovariance, simulate_path
from .mbb import BlockTable, BootstrapPlan, draw_replicate, draw_starts, edge_weights

__version__ = "0.1.0"
