"""Distribution descriptions used throughout the package.

Each family is a small frozen dataclass that validates its parameters on
construction.  Specs are hashable so derived objects (CDF grids) can be
cached per spec.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special


class SpecError(ValueError):
    """Raised when a distribution is constructed with invalid parameters."""


def _require(cond, msg):
    if not cond:
        raise SpecError(msg)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class Gaussian:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _require(_finite(self.mu, self.sigma), "Gaussian parameters must be finite")
        _require(self.sigma > 0, "Gaussian sigma must be > 0")


@dataclass(frozen=True)
class SymmetricStable:
    """Standard symmetric stable law with CF ``exp(-|u|**alpha)``."""

    alpha: float

    def __post_init__(self):
        _require(_finite(self.alpha) and 0 < self.alpha <= 2,
                 "SymmetricStable alpha must lie in (0, 2]")


@dataclass(frozen=True)
class OneSidedStable:
    """Positive stable law with Laplace transform ``exp(-s**alpha)``."""

    alpha: float

    def __post_init__(self):
        _require(_finite(self.alpha) and 0 < self.alpha < 1,
                 "OneSidedStable alpha must lie in (0, 1)")


@dataclass(frozen=True)
class Laplace:
    scale: float = 1.0

    def __post_init__(self):
        _require(_finite(self.scale) and self.scale > 0, "Laplace scale must be > 0")


@dataclass(frozen=True)
class SymmetricGamma:
    """Law of ``G1 - G2`` with ``G1, G2`` i.i.d. Gamma(shape, scale)."""

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        _require(_finite(self.shape, self.scale) and self.shape > 0 and self.scale > 0,
                 "SymmetricGamma shape and scale must be > 0")


@dataclass(frozen=True)
class TemperedStableSym:
    """Symmetric tempered stable law.

    Characteristic function
    ``exp(A * ((lam - iu)**alpha + (lam + iu)**alpha - 2 * lam**alpha))``
    for ``1 < alpha < 2``.
    """

    alpha: float
    lam: float
    A: float = 1.0

    def __post_init__(self):
        _require(_finite(self.alpha, self.lam, self.A), "TemperedStableSym parameters must be finite")
        _require(1 < self.alpha < 2, "TemperedStableSym alpha must lie in (1, 2)")
        _require(self.lam > 0 and self.A > 0, "TemperedStableSym lam and A must be > 0")


@dataclass(frozen=True)
class SymmetricPareto:
    """Symmetric power tail: ``P{X > x} = 0.5 * (x_min / x)**alpha_tail`` for x >= x_min."""

    alpha_tail: float
    x_min: float = 1.0

    def __post_init__(self):
        _require(_finite(self.alpha_tail, self.x_min), "SymmetricPareto parameters must be finite")
        _require(self.alpha_tail > 2, "SymmetricPareto alpha_tail must be > 2")
        _require(self.x_min > 0, "SymmetricPareto x_min must be > 0")


@dataclass(frozen=True)
class ShiftedExponentialSym:
    """Symmetric law with ``P{X > x} = 0.5 * exp(-rate * x)`` for x >= 0."""

    rate: float = 1.0

    def __post_init__(self):
        _require(_finite(self.rate) and self.rate > 0, "ShiftedExponentialSym rate must be > 0")


@dataclass(frozen=True)
class CenteredExponential:
    """Exponential(rate) shifted to mean zero; an asymmetric finite-variance base."""

    rate: float = 1.0

    def __post_init__(self):
        _require(_finite(self.rate) and self.rate > 0, "CenteredExponential rate must be > 0")


@dataclass(frozen=True)
class PutTailDown:
    """Mixture putting mass ``p`` at the origin and ``1 - p`` on ``base``."""

    base: "DistributionSpec"
    p: float

    def __post_init__(self):
        _require(_finite(self.p) and 0 < self.p < 1, "PutTailDown p must lie in (0, 1)")
        _require(has_finite_variance(self.base),
                 "PutTailDown base must have finite variance")
        _require(is_symmetric(self.base), "PutTailDown base must be symmetric about 0")


DistributionSpec = Union[
    Gaussian, SymmetricStable, OneSidedStable, Laplace, SymmetricGamma,
    TemperedStableSym, SymmetricPareto, ShiftedExponentialSym,
    CenteredExponential, PutTailDown,
]

SPEC_TYPES = DistributionSpec.__args__


def check_spec(spec):
    if not isinstance(spec, SPEC_TYPES):
        raise SpecError(f"not a distribution spec: {spec!r}")
    return spec


def has_finite_variance(spec) -> bool:
    check_spec(spec)
    if isinstance(spec, SymmetricStable):
        return spec.alpha == 2
    return not isinstance(spec, OneSidedStable)


def is_symmetric(spec) -> bool:
    """True when the law is symmetric about zero."""
    check_spec(spec)
    if isinstance(spec, Gaussian):
        return spec.mu == 0
    return not isinstance(spec, (OneSidedStable, CenteredExponential))


def survival(spec, x):
    """Closed-form ``P{X > x}`` for the families that have one.

    This is independent of the characteristic-function machinery and is
    what the inversion routines are checked against.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(spec, Gaussian):
        return special.ndtr(-(x - spec.mu) / spec.sigma)
    if isinstance(spec, SymmetricStable) and spec.alpha == 1:
        return 0.5 - np.arctan(x) / np.pi
    if isinstance(spec, SymmetricStable) and spec.alpha == 2:
        return special.ndtr(-x / math.sqrt(2.0))
    if isinstance(spec, (Laplace, ShiftedExponentialSym)):
        b = spec.scale if isinstance(spec, Laplace) else 1.0 / spec.rate
        half = 0.5 * np.exp(-np.abs(x) / b)
        return np.where(x >= 0, half, 1.0 - half)
    if isinstance(spec, SymmetricPareto):
        ax = np.maximum(np.abs(x), spec.x_min)
        half = 0.5 * (spec.x_min / ax) ** spec.alpha_tail
        return np.where(x >= 0, half, 1.0 - half)
    if isinstance(spec, CenteredExponential):
        shifted = x + 1.0 / spec.rate
        return np.where(shifted > 0, np.exp(-spec.rate * np.maximum(shifted, 0.0)), 1.0)
    if isinstance(spec, PutTailDown):
        return (1 - spec.p) * survival(spec.base, x) + spec.p * (x < 0)
    raise SpecError(f"no closed-form tail for {type(spec).__name__}")
