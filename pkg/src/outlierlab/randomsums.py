"""Normalized sums of a random number of i.i.d. summands.

Each replicate draws ``N`` from the count law and returns
``sqrt(q / r) * sum_{i <= N} X_i`` where the ``X_i`` are the base law
standardized to mean 0 and variance 1 and ``r`` is the negative-binomial
shape (``r = 1`` for geometric counts).  ``q N / r`` then tends to a
Gamma(r, 1/r) variable, so the sums converge to a unit-variance limit:

* geometric counts: Laplace with scale ``1/sqrt(2)``;
* negative-binomial counts: symmetric gamma with shape ``r`` and scale
  ``1/sqrt(2 r)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .charfn import build_cdf_grid, moments
from .distributions import Laplace, SpecError, SymmetricGamma, survival
from .rng import RngStream
from .samplers import Geometric, NegativeBinomial, sample, sample_counts

_BLOCK = 10_000


@dataclass(frozen=True)
class RandomSumConfig:
    count_law: object
    base: object
    replicates: int
    seed: int

    def __post_init__(self):
        if not isinstance(self.count_law, (Geometric, NegativeBinomial)):
            raise SpecError(f"unknown count law {self.count_law!r}")
        if not moments(self.base).finite:
            raise SpecError("random-sum base must have finite variance")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")


def _shape(count_law):
    return count_law.r if isinstance(count_law, NegativeBinomial) else 1.0


def random_sum_sample(config: RandomSumConfig) -> np.ndarray:
    """One normalized random sum per replicate.

    Replicates are generated in blocks of 10,000; block ``b`` uses streams
    ``(seed, 2b)`` for the counts and ``(seed, 2b + 1)`` for the summands.
    """
    mom = moments(config.base)
    mean, sd = mom.mean, math.sqrt(mom.variance)
    q = config.count_law.q
    scale = math.sqrt(q / _shape(config.count_law))
    out = np.empty(config.replicates)
    for b, start in enumerate(range(0, config.replicates, _BLOCK)):
        size = min(_BLOCK, config.replicates - start)
        counts = sample_counts(config.count_law, RngStream(config.seed, 2 * b), size)
        x = (sample(config.base, RngStream(config.seed, 2 * b + 1), int(counts.sum())) - mean) / sd
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        out[start:start + size] = np.add.reduceat(x, starts) * scale
    return out


def ks_distance(sample_values, reference_cdf) -> float:
    """Kolmogorov-Smirnov distance between the sample's ECDF and ``reference_cdf``."""
    x = np.sort(np.asarray(sample_values, dtype=float))
    if x.size == 0:
        raise ValueError("ks_distance needs a nonempty sample")
    n = x.size
    f = np.asarray(reference_cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of two samples."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def limit_law(count_law):
    """Unit-variance limit law of the normalized sums."""
    if isinstance(count_law, Geometric):
        return Laplace(1.0 / math.sqrt(2.0))
    r = count_law.r
    return SymmetricGamma(r, 1.0 / math.sqrt(2.0 * r))


def limit_cdf(count_law):
    law = limit_law(count_law)
    if isinstance(law, Laplace):
        return lambda x: 1.0 - survival(law, x)
    return build_cdf_grid(law).cdf


def convergence_table(family: str, q_values, base, replicates: int, seed: int, *, r: float = 1.0):
    """Rows ``(q, ks_distance)`` against the limit law, one per ``q``.

    ``family`` is ``"geometric"`` or ``"negative_binomial"`` (with shape ``r``).
    """
    q_values = [float(q) for q in q_values]
    if any(b >= a for a, b in zip(q_values, q_values[1:])):
        raise ValueError("q_values must decrease toward 0")
    rows = []
    cdf = None
    for j, q in enumerate(q_values):
        if family == "geometric":
            law = Geometric(q)
        elif family == "negative_binomial":
            law = NegativeBinomial(r, q)
        else:
            raise ValueError(f"unknown count family {family!r}")
        if cdf is None:
            cdf = limit_cdf(law)
        # distinct seeds per row keep the rows independent
        xs = random_sum_sample(RandomSumConfig(law, base, replicates, (seed + j) % 2**64))
        rows.append((q, ks_distance(xs, cdf)))
    return rows
