"""Random variate generation for every distribution family.

All samplers draw exclusively from the :class:`~outlierlab.rng.RngStream`
they are given, so output is a pure function of ``(spec, seed, stream_id, n)``.

Count laws for random sums
--------------------------
``Geometric(q)`` has support ``{1, 2, ...}`` with ``P{N = j} = q (1-q)**(j-1)``;
a sum always has at least one summand.  ``q = 1`` is allowed and gives N = 1.

``NegativeBinomial(r, q)`` counts trials up to and including the ``r``-th
success: ``N = F + ceil(r)`` with ``F`` the number of failures
(``P{F = f} = Gamma(f + r) / (f! Gamma(r)) q**r (1-q)**f``).  For integer ``r``
this is the usual trial count with support ``{r, r+1, ...}``; ``r = 1``
reduces exactly to ``Geometric(q)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    CenteredExponential, Gaussian, Laplace, OneSidedStable, PutTailDown,
    ShiftedExponentialSym, SpecError, SymmetricGamma, SymmetricPareto,
    SymmetricStable, TemperedStableSym, check_spec,
)
from .rng import RngStream


def _stable_symmetric(alpha, stream, n):
    u = (stream.open_uniform(n) - 0.5) * np.pi
    if alpha == 1:
        return np.tan(u)
    w = stream.standard_exponential(n)
    return (np.sin(alpha * u) / np.cos(u) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))


def _stable_one_sided(alpha, stream, n):
    # Kanter's representation, Laplace transform exp(-s**alpha)
    u = stream.open_uniform(n) * np.pi
    w = stream.standard_exponential(n)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))


def _symmetric_from_abs_tail(stream, n, inv_abs):
    # one uniform gives both sign and magnitude: u < 1/2 -> negative half
    u = stream.open_uniform(n)
    neg = u < 0.5
    v = np.where(neg, 2.0 * u, 2.0 * (1.0 - u))  # P{|X| > inv_abs(v)} = v
    mag = inv_abs(v)
    return np.where(neg, -mag, mag)


def _tempered(spec, stream, n):
    from .charfn import cached_grid
    return cached_grid(spec).quantile(stream.open_uniform(n))


def sample(spec, stream: RngStream, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. variates from ``spec``."""
    check_spec(spec)
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(spec, Gaussian):
        return spec.mu + spec.sigma * stream.standard_normal(n)
    if isinstance(spec, SymmetricStable):
        return _stable_symmetric(spec.alpha, stream, n)
    if isinstance(spec, OneSidedStable):
        return _stable_one_sided(spec.alpha, stream, n)
    if isinstance(spec, (Laplace, ShiftedExponentialSym)):
        b = spec.scale if isinstance(spec, Laplace) else 1.0 / spec.rate
        return _symmetric_from_abs_tail(stream, n, lambda v: -b * np.log(v))
    if isinstance(spec, SymmetricPareto):
        a, xm = spec.alpha_tail, spec.x_min
        return _symmetric_from_abs_tail(stream, n, lambda v: xm * v ** (-1.0 / a))
    if isinstance(spec, CenteredExponential):
        return (stream.standard_exponential(n) - 1.0) / spec.rate
    if isinstance(spec, SymmetricGamma):
        g = stream.generator
        return g.gamma(spec.shape, spec.scale, n) - g.gamma(spec.shape, spec.scale, n)
    if isinstance(spec, TemperedStableSym):
        return _tempered(spec, stream, n)
    if isinstance(spec, PutTailDown):
        keep = stream.open_uniform(n) >= spec.p
        out = np.zeros(n)
        m = int(np.count_nonzero(keep))
        if m:
            out[keep] = sample(spec.base, stream, m)
        return out
    raise SpecError(f"no sampler for {type(spec).__name__}")


@dataclass(frozen=True)
class Geometric:
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and 0 < self.q <= 1):
            raise SpecError("Geometric q must lie in (0, 1]")


@dataclass(frozen=True)
class NegativeBinomial:
    r: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise SpecError("NegativeBinomial r must be > 0")
        if not (math.isfinite(self.q) and 0 < self.q <= 1):
            raise SpecError("NegativeBinomial q must lie in (0, 1]")

    @property
    def offset(self) -> int:
        return math.ceil(self.r)


def sample_counts(kind, stream: RngStream, size: int) -> np.ndarray:
    """Vector of ``size`` i.i.d. counts; see the module docstring for conventions."""
    g = stream.generator
    if isinstance(kind, Geometric):
        return g.geometric(kind.q, size).astype(np.int64)
    if isinstance(kind, NegativeBinomial):
        return g.negative_binomial(kind.r, kind.q, size).astype(np.int64) + kind.offset
    raise SpecError(f"unknown count law {kind!r}")


def sample_count(kind, stream: RngStream) -> int:
    return int(sample_counts(kind, stream, 1)[0])


def count_mean(kind) -> float:
    if isinstance(kind, Geometric):
        return 1.0 / kind.q
    if isinstance(kind, NegativeBinomial):
        return kind.r * (1.0 - kind.q) / kind.q + kind.offset
    raise SpecError(f"unknown count law {kind!r}")
