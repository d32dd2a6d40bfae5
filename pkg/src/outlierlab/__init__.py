"""Monte Carlo and characteristic-function tools for k-sigma outlier probabilities
under Gaussian, stable, tempered stable, put-tail-down and random-sum laws."""

from .charfn import (
    CharFnGrid, build_cdf_grid, cf_eval, limit_outlier_prob, moments, tail_prob,
)
from .distributions import (
    CenteredExponential, Gaussian, Laplace, OneSidedStable, PutTailDown,
    ShiftedExponentialSym, SpecError, SymmetricGamma, SymmetricPareto,
    SymmetricStable, TemperedStableSym,
)
from .outlier import (
    OutlierEstimate, empirical_stats, estimate_pn, outlier_fraction, pn_curve,
)
from .rng import RngStream
from .samplers import Geometric, NegativeBinomial, sample, sample_count

__version__ = "0.1.0"
