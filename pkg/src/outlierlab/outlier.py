"""The k-sigma outlier statistic and its Monte Carlo estimator.

For a sample ``X_1..X_n`` with empirical mean ``xbar`` and empirical standard
deviation ``s`` (divisor ``n``), the outlier probability is
``p_n = P{|X_1 - xbar| > k s}``.  It is estimated by the within-sample
fraction of points satisfying the inequality, averaged over independent
replicates; by exchangeability that fraction has the same expectation as
the single-point indicator and far smaller variance.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .rng import RngStream
from .samplers import sample


class DegenerateSampleWarning(RuntimeWarning):
    """Sample has zero empirical variance; its outlier fraction is taken as 0."""


@dataclass(frozen=True)
class OutlierEstimate:
    p_hat: float
    std_error: float
    n: int
    m: int
    k: float
    spec: object
    seed: int
    degenerate: int = 0
    stream_base: int = 0


def empirical_stats(sample_values):
    """Two-pass empirical mean and variance with divisor ``n``."""
    x = np.asarray(sample_values, dtype=float)
    if x.size == 0:
        raise ValueError("empirical_stats needs a nonempty sample")
    mean = float(np.mean(x))
    var = float(np.mean((x - mean) ** 2))
    return mean, var


def _fraction(x, k):
    mean, var = empirical_stats(x)
    if var == 0.0:
        return 0.0, True
    s = math.sqrt(var)
    return np.count_nonzero(np.abs(x - mean) > k * s) / x.size, False


def outlier_fraction(sample_values, k: float) -> float:
    """Fraction of points strictly farther than ``k`` empirical sd from the mean."""
    x = np.asarray(sample_values, dtype=float)
    if x.size < 2:
        raise ValueError("outlier_fraction needs at least two points")
    if not k > 0:
        raise ValueError("k must be positive")
    frac, degenerate = _fraction(x, k)
    if degenerate:
        warnings.warn("sample has zero variance; outlier fraction set to 0",
                      DegenerateSampleWarning, stacklevel=2)
    return frac


def resolve_workers(workers):
    if workers is None:
        return os.cpu_count() or 1
    return max(1, int(workers))


def replicate_fractions(spec, n, k, m, seed, *, stream_base=0, workers=None):
    """Per-replicate outlier fractions; replicate ``i`` uses stream ``(seed, stream_base + i)``.

    Returns ``(fractions, degenerate_count)`` with fractions in replicate order.
    """
    def one(i):
        x = sample(spec, RngStream(seed, stream_base + i), n)
        return _fraction(x, k)

    nw = resolve_workers(workers)
    if nw == 1:
        results = [one(i) for i in range(m)]
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(one, range(m)))
    fractions = np.array([r[0] for r in results])
    return fractions, sum(r[1] for r in results)


def estimate_pn(spec, n: int, k: float, m: int, seed: int, *, stream_base: int = 0,
                workers=None) -> OutlierEstimate:
    """Monte Carlo estimate of ``p_n`` from ``m`` independent samples of size ``n``.

    The result is identical for any ``workers`` value.
    """
    n, m = int(n), int(m)
    if n < 2 or m < 2:
        raise ValueError("estimate_pn needs n >= 2 and m >= 2")
    if not k > 0:
        raise ValueError("k must be positive")
    fractions, degenerate = replicate_fractions(spec, n, k, m, seed,
                                                stream_base=stream_base, workers=workers)
    p_hat = float(np.mean(fractions))
    std_error = float(np.std(fractions, ddof=1) / math.sqrt(m))
    return OutlierEstimate(p_hat, std_error, n, m, float(k), spec, int(seed),
                           int(degenerate), int(stream_base))


# stream ids: bits 32..47 index the sample size, bits 0..31 the replicate
_N_SHIFT = 32


def pn_curve(spec, k: float, n_values, m: int, seed: int, *, stream_base: int = 0,
             workers=None) -> list[OutlierEstimate]:
    n_values = [int(v) for v in n_values]
    if not n_values:
        raise ValueError("n_values must be nonempty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be increasing")
    if m >= 2**_N_SHIFT or len(n_values) >= 2**16:
        raise ValueError("too many replicates or grid points for the stream layout")
    return [estimate_pn(spec, n, k, m, seed, stream_base=stream_base + (j << _N_SHIFT),
                        workers=workers)
            for j, n in enumerate(n_values)]


def combined_se(*estimates) -> float:
    return math.sqrt(sum(e.std_error**2 for e in estimates))
