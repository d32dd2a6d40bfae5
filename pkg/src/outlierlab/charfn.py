"""Characteristic functions, moments and Gil-Pelaez inversion.

``tail_prob`` recovers ``P{Y > x}`` from the characteristic function alone,
which is the only route to tail probabilities for the tempered stable
family.  ``build_cdf_grid`` tabulates the inverted CDF so the same law can
be sampled by inverse transform.
"""

import functools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import quadrature
from .distributions import (
    CenteredExponential, Gaussian, Laplace, OneSidedStable, PutTailDown,
    ShiftedExponentialSym, SymmetricGamma, SymmetricPareto, SymmetricStable,
    TemperedStableSym, check_spec, has_finite_variance, is_symmetric,
)
from .quadrature import QuadratureError

__all__ = [
    "CharFnGrid", "GridError", "Moments", "QuadratureError", "UnsupportedSpecError",
    "build_cdf_grid", "cf_eval", "limit_outlier_prob", "moments", "tail_prob",
    "tail_probs",
]

TAIL_TOLERANCE = 1e-6
# Quadrature target on the integral; the tail probability error is this / pi.
_INTEGRAL_TOL = 1e-9
_MAX_UPPER = 1e7


class UnsupportedSpecError(ValueError):
    """The requested operation has no implementation for this family."""


class GridError(RuntimeError):
    """A CDF grid could not be built within its accuracy budget."""


class Moments(NamedTuple):
    mean: float | None
    variance: float | None
    finite: bool


def _tempered_exponent(spec, u):
    # (lam - iu)^a + (lam + iu)^a = 2 Re (lam + iu)^a, evaluated in polar form
    lam, a = spec.lam, spec.alpha
    r = np.hypot(lam, u)
    return spec.A * (2.0 * r**a * np.cos(a * np.arctan2(u, lam)) - 2.0 * lam**a)


def cf_eval(spec, u):
    """Characteristic function ``E exp(iuY)`` at ``u`` (scalar or array)."""
    check_spec(spec)
    u = np.asarray(u, dtype=float)
    if isinstance(spec, Gaussian):
        out = np.exp(1j * spec.mu * u - 0.5 * (spec.sigma * u) ** 2)
    elif isinstance(spec, SymmetricStable):
        out = np.exp(-np.abs(u) ** spec.alpha) + 0j
    elif isinstance(spec, OneSidedStable):
        # exp(-(-iu)^alpha) on the principal branch
        a = spec.alpha
        out = np.exp(-np.abs(u) ** a * np.exp(-0.5j * np.pi * a * np.sign(u)))
    elif isinstance(spec, (Laplace, ShiftedExponentialSym)):
        b = spec.scale if isinstance(spec, Laplace) else 1.0 / spec.rate
        out = 1.0 / (1.0 + (b * u) ** 2) + 0j
    elif isinstance(spec, SymmetricGamma):
        out = (1.0 + (spec.scale * u) ** 2) ** (-spec.shape) + 0j
    elif isinstance(spec, TemperedStableSym):
        out = np.exp(_tempered_exponent(spec, u)) + 0j
    elif isinstance(spec, CenteredExponential):
        t = u / spec.rate
        out = np.exp(-1j * t) / (1.0 - 1j * t)
    elif isinstance(spec, PutTailDown):
        out = (1 - spec.p) * cf_eval(spec.base, u) + spec.p
    else:
        raise UnsupportedSpecError(f"no analytic characteristic function for {type(spec).__name__}")
    return out[()] if out.ndim == 0 else out


def moments(spec) -> Moments:
    """Mean and variance; ``finite`` is False for the infinite-variance stable laws."""
    check_spec(spec)
    if not has_finite_variance(spec):
        return Moments(None, None, False)
    if isinstance(spec, Gaussian):
        return Moments(spec.mu, spec.sigma**2, True)
    if isinstance(spec, SymmetricStable):  # alpha == 2
        return Moments(0.0, 2.0, True)
    if isinstance(spec, Laplace):
        return Moments(0.0, 2.0 * spec.scale**2, True)
    if isinstance(spec, ShiftedExponentialSym):
        return Moments(0.0, 2.0 / spec.rate**2, True)
    if isinstance(spec, SymmetricGamma):
        return Moments(0.0, 2.0 * spec.shape * spec.scale**2, True)
    if isinstance(spec, TemperedStableSym):
        a = spec.alpha
        return Moments(0.0, 2.0 * spec.A * a * (a - 1) * spec.lam ** (a - 2), True)
    if isinstance(spec, SymmetricPareto):
        a = spec.alpha_tail
        return Moments(0.0, a * spec.x_min**2 / (a - 2), True)
    if isinstance(spec, CenteredExponential):
        return Moments(0.0, 1.0 / spec.rate**2, True)
    if isinstance(spec, PutTailDown):
        base = moments(spec.base)
        return Moments(0.0, (1 - spec.p) * base.variance, True)
    raise UnsupportedSpecError(type(spec).__name__)


def _cf_modulus_bound(spec, u):
    return np.abs(cf_eval(spec, u))


def _upper_limit(spec, xmax):
    """Truncation point beyond which the Gil-Pelaez integrand is negligible.

    Past ``U`` the oscillatory tail is bounded (integrating by parts) by about
    ``2|cf(U)| / (U x)``; we also insist that ``|cf|`` itself is tiny or that
    ``U`` covers many oscillations.
    """
    xmax = max(abs(xmax), 1e-12)
    upper = 1.0
    while upper < _MAX_UPPER:
        mod = float(_cf_modulus_bound(spec, upper))
        if mod < 1e-14:
            return upper
        if upper * xmax > 20 and 2 * mod / (upper * xmax) < 0.1 * _INTEGRAL_TOL:
            return upper
        upper *= 1.5
    raise QuadratureError(f"characteristic function of {spec!r} decays too slowly", float("nan"))


def _gil_pelaez(spec, xs):
    """Vectorised ``P{Y > x}`` for an array of ``x`` sharing one panel layout."""
    xs = np.asarray(xs, dtype=float)
    xmax = float(np.max(np.abs(xs)))
    if xmax == 0:
        xmax = 1.0
    upper = _upper_limit(spec, xmax)
    width = min(math.pi / (4.0 * xmax), upper / 16.0)
    if is_symmetric(spec):
        def integrand(u):
            re = np.real(cf_eval(spec, u))
            # sin(ux)/u written through sinc: exact at u -> 0
            return re[:, None] * xs[None, :] * np.sinc(np.outer(u, xs) / np.pi)
        sign = -1.0
    else:
        mean = moments(spec).mean

        def integrand(u):
            cf = cf_eval(spec, u)
            ux = np.outer(u, xs)
            im = np.imag(np.exp(-1j * ux) * cf[:, None])
            with np.errstate(invalid="ignore", divide="ignore"):
                out = im / u[:, None]
            # removable singularity: Im(e^{-iux} cf(u)) / u -> mean - x
            small = u < 1e-8
            if small.any():
                out[small] = mean - xs[None, :]
            return out
        sign = 1.0
    try:
        value, err = quadrature.integrate(integrand, 0.0, upper, max_width=width, tol=_INTEGRAL_TOL)
    except QuadratureError as exc:
        raise QuadratureError(f"Gil-Pelaez inversion failed for {spec!r}",
                              exc.error_estimate / math.pi) from exc
    if float(np.max(err)) / math.pi > TAIL_TOLERANCE:
        raise QuadratureError(f"Gil-Pelaez inversion too inaccurate for {spec!r}",
                              float(np.max(err)) / math.pi)
    return np.clip(0.5 + sign * value / math.pi, 0.0, 1.0)


def tail_probs(spec, xs, *, chunk=64):
    """``P{Y > x}`` for every entry of ``xs`` (array version of :func:`tail_prob`)."""
    check_spec(spec)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if isinstance(spec, PutTailDown):
        return (1 - spec.p) * tail_probs(spec.base, xs, chunk=chunk) + spec.p * (xs < 0)
    if isinstance(spec, (OneSidedStable, SymmetricPareto)):
        raise UnsupportedSpecError(f"tail inversion not available for {type(spec).__name__}")
    out = np.empty_like(xs)
    sym = is_symmetric(spec)
    order = np.argsort(np.abs(xs))
    for start in range(0, xs.size, chunk):
        idx = order[start:start + chunk]
        block = xs[idx]
        if sym:
            res = np.full(block.shape, 0.5)
            nz = block != 0
            if nz.any():
                res[nz] = _gil_pelaez(spec, block[nz])
        else:
            res = _gil_pelaez(spec, block)
        out[idx] = res
    return out


def tail_prob(spec, x: float) -> float:
    """``P{Y > x}`` by Gil-Pelaez inversion, absolute error below 1e-6.

    Raises :class:`QuadratureError` (carrying the achieved error estimate)
    if the oscillatory integral cannot be resolved.
    """
    return float(tail_probs(spec, [x])[0])


def limit_outlier_prob(spec, k: float) -> float:
    """``P{|Y - mean| > k sd}``, the large-sample limit of the outlier probability."""
    if not k > 0:
        raise ValueError("k must be positive")
    mom = moments(spec)
    if not mom.finite:
        raise UnsupportedSpecError(f"{spec!r} has infinite variance; the limit is zero, not finite-variance")
    sd = math.sqrt(mom.variance)
    hi = mom.mean + k * sd
    if is_symmetric(spec):
        return 2.0 * tail_prob(spec, hi)
    lo = mom.mean - k * sd
    up, down = tail_probs(spec, [hi, lo])
    return float(up + 1.0 - down)


@dataclass(frozen=True)
class CharFnGrid:
    """Tabulated CDF of ``spec`` recovered by inversion.

    ``cdf`` and ``quantile`` interpolate with monotone cubics.  Beyond the
    grid the CDF is clamped to its end values.
    """

    spec: object
    abscissae: np.ndarray
    cdf_values: np.ndarray
    max_monotonicity_repair: float
    _cdf: PchipInterpolator = field(repr=False, compare=False)
    _quantile: PchipInterpolator = field(repr=False, compare=False)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xs = self.abscissae
        out = self._cdf(np.clip(x, xs[0], xs[-1]))
        out = np.where(x < xs[0], 0.0, np.where(x > xs[-1], 1.0, out))
        return np.clip(out, 0.0, 1.0)

    def quantile(self, q):
        q = np.asarray(q, dtype=float)
        c = self.cdf_values
        return self._quantile(np.clip(q, c[0], c[-1]))


def build_cdf_grid(spec, target_error: float = 1e-7, *, points_per_sd: int = 100,
                   repair_budget: float = 1e-6) -> CharFnGrid:
    """Tabulate the CDF on ``mean +- c * sd`` with ``c`` grown until the
    mass outside the grid is below ``target_error``."""
    mom = moments(spec)
    if not mom.finite:
        raise GridError(f"{spec!r} has infinite variance; grid range undefined")
    sd = math.sqrt(mom.variance)
    c = 4.0
    while True:
        upper = tail_prob(spec, mom.mean + c * sd)
        lower = 1.0 - tail_prob(spec, mom.mean - c * sd)
        if upper + lower < target_error:
            break
        c *= 1.25
        if c > 1e4:
            raise GridError(f"tail mass of {spec!r} stays above {target_error}")
    npts = 2 * int(c * points_per_sd) + 1  # odd: the mean (a possible cusp) is a node
    xs = np.linspace(mom.mean - c * sd, mom.mean + c * sd, npts)
    raw = 1.0 - tail_probs(spec, xs)
    repaired = np.maximum.accumulate(raw)
    repair = float(np.max(repaired - raw))
    if repair > repair_budget:
        raise GridError(f"monotonicity repair {repair:.2e} exceeds budget {repair_budget:.0e}")
    repaired = np.clip(repaired, 0.0, 1.0)
    if not (repaired[0] <= 1e-3 and repaired[-1] >= 1 - 1e-3):
        raise GridError("grid does not cover the bulk of the distribution")
    keep = np.concatenate([[True], np.diff(repaired) > 1e-15])
    return CharFnGrid(
        spec=spec,
        abscissae=xs,
        cdf_values=repaired,
        max_monotonicity_repair=repair,
        _cdf=PchipInterpolator(xs, repaired),
        _quantile=PchipInterpolator(repaired[keep], xs[keep]),
    )


@functools.lru_cache(maxsize=64)
def cached_grid(spec) -> CharFnGrid:
    return build_cdf_grid(spec)
