"""Put-tail-down: moving a fraction ``p`` of the mass to the origin.

For a symmetric base CDF ``F`` with variance ``sigma**2`` the transformed law is
``F_p = (1 - p) F + p H`` with ``H`` the unit step.  Its variance is
``(1 - p) sigma**2`` and

    P{|Y_p| > k sqrt(1-p) sigma} = 2 (1-p) Fbar(k sqrt(1-p) sigma),

so the studentized outlier probability grows whenever
``(1-p) Fbar(k sqrt(1-p) sigma) > Fbar(k sigma)``.

The inequality helpers use the asymptotic tail forms ``C exp(-a x)`` and
``C x**-alpha`` as if they were exact.  The constant ``C`` cancels from both
sides and is carried only for the probability formulas.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


def _check_p(p):
    if not (math.isfinite(p) and 0 < p < 1):
        raise ValueError("p must lie in (0, 1)")


@dataclass(frozen=True)
class ExponentialTail:
    C: float
    a: float

    def __post_init__(self):
        if not (self.C > 0 and self.a > 0):
            raise ValueError("ExponentialTail needs C > 0 and a > 0")

    def survival(self, x):
        return self.C * np.exp(-self.a * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PowerTail:
    C: float
    alpha_tail: float

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("PowerTail needs C > 0")
        if not self.alpha_tail > 2:
            raise ValueError("PowerTail needs alpha_tail > 2 for a finite variance")

    def survival(self, x):
        return self.C * np.asarray(x, dtype=float) ** (-self.alpha_tail)


@dataclass(frozen=True)
class TailModel:
    kind: Union[ExponentialTail, PowerTail]
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if not isinstance(self.kind, (ExponentialTail, PowerTail)):
            raise TypeError(f"unknown tail kind {self.kind!r}")


def heaviside(x):
    """Unit step with ``H(0) = 1`` (right-continuous)."""
    return np.where(np.asarray(x, dtype=float) >= 0, 1.0, 0.0)


def put_tail_down_cdf(base_cdf, p: float, x):
    """``(1 - p) F(x) + p H(x)``."""
    _check_p(p)
    x = np.asarray(x, dtype=float)
    out = (1 - p) * np.asarray(base_cdf(x), dtype=float) + p * heaviside(x)
    return out[()] if out.ndim == 0 else out


def outlier_prob_ptd(base_tail, p: float, k: float, sigma: float) -> float:
    """``P{|Y_p| > k sqrt(1-p) sigma} = 2 (1-p) Fbar(k sqrt(1-p) sigma)``.

    ``base_tail`` is the survival function of the symmetric base law.
    """
    _check_p(p)
    if not k > 0:
        raise ValueError("k must be positive")
    return 2.0 * (1 - p) * float(base_tail(k * math.sqrt(1 - p) * sigma))


def gain_exact(base_tail, p: float, k: float, sigma: float) -> bool:
    """The more-outliers inequality evaluated with an exact survival function."""
    _check_p(p)
    lhs = (1 - p) * float(base_tail(k * math.sqrt(1 - p) * sigma))
    return lhs > float(base_tail(k * sigma))


def gain_inequality_holds(model: TailModel, p: float, k: float) -> bool:
    _check_p(p)
    kind = model.kind
    if isinstance(kind, ExponentialTail):
        shrink = 1.0 - math.sqrt(1.0 - p)
        return (1.0 - p) > math.exp(-kind.a * k * model.sigma * shrink)
    # power tail: (1-p) (1-p)^(-alpha/2) > 1, i.e. (1-p)^(alpha/2 - 1) < 1
    return (1.0 - p) ** (kind.alpha_tail / 2.0 - 1.0) < 1.0


def exponential_threshold_k(model: TailModel, p: float) -> float:
    """Smallest ``k`` above which the exponential-tail gain inequality holds."""
    _check_p(p)
    if not isinstance(model.kind, ExponentialTail):
        raise TypeError("exponential_threshold_k needs an ExponentialTail model")
    a, sigma = model.kind.a, model.sigma
    return -math.log1p(-p) / (a * sigma * (1.0 - math.sqrt(1.0 - p)))
