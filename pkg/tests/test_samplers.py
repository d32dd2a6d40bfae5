import math

import numpy as np
import pytest
from scipy import stats

from outlierlab.charfn import moments, tail_prob
from outlierlab.distributions import (
    CenteredExponential, Gaussian, Laplace, OneSidedStable, PutTailDown,
    ShiftedExponentialSym, SymmetricGamma, SymmetricPareto, SymmetricStable,
    TemperedStableSym,
)
from outlierlab.rng import RngStream
from outlierlab.samplers import (
    Geometric, NegativeBinomial, count_mean, sample, sample_count, sample_counts,
)

N = 1_000_000

FINITE_VARIANCE = [
    Gaussian(1.5, 2.0), SymmetricStable(2.0), Laplace(0.7), SymmetricGamma(1.5, 0.8),
    TemperedStableSym(1.5, 1.0), SymmetricPareto(6.0, 1.0), ShiftedExponentialSym(2.0),
    CenteredExponential(0.5), PutTailDown(Gaussian(), 0.3), PutTailDown(Laplace(1.0), 0.5),
]


def test_determinism():
    spec = TemperedStableSym(1.3, 0.7)
    a = sample(spec, RngStream(11, 4), 1000)
    b = sample(spec, RngStream(11, 4), 1000)
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("spec", FINITE_VARIANCE, ids=repr)
def test_mean_and_variance_within_5se(spec):
    x = sample(spec, RngStream(2024, 1), N)
    mom = moments(spec)
    mean, var = x.mean(), x.var()
    mu4 = np.mean((x - mean) ** 4)
    assert abs(mean - mom.mean) < 5 * math.sqrt(mom.variance / N)
    assert abs(var - mom.variance) < 5 * math.sqrt((mu4 - var**2) / N)


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5, 1.9])
def test_stable_empirical_cf(alpha):
    x = sample(SymmetricStable(alpha), RngStream(5, int(alpha * 10)), N)
    for u in (0.5, 1.0, 2.0):
        assert abs(np.mean(np.cos(u * x)) - math.exp(-u**alpha)) < 5 / math.sqrt(N)


def test_cauchy_branch():
    x = sample(SymmetricStable(1.0), RngStream(3), N)
    assert abs(np.median(x)) < 0.01
    assert abs(np.mean(x > 1) - 0.25) < 5 * math.sqrt(0.25 * 0.75 / N)


def test_alpha_two_is_gaussian_with_variance_two():
    x = sample(SymmetricStable(2.0), RngStream(4), N)
    assert x.var() == pytest.approx(2.0, rel=0.01)
    assert stats.kstest(x / math.sqrt(2), "norm").statistic < 0.002


def test_one_sided_half_is_levy():
    # Laplace transform exp(-sqrt(s)) <-> X = 1 / (2 Z^2)
    x = sample(OneSidedStable(0.5), RngStream(6), N)
    assert x.min() > 0
    assert stats.kstest(x, lambda t: 2 * stats.norm.sf(np.sqrt(1 / (2 * t)))).statistic < 0.002


def test_one_sided_laplace_transform():
    alpha = 0.3
    x = sample(OneSidedStable(alpha), RngStream(8), N)
    for s in (0.5, 1.0, 3.0):
        assert np.mean(np.exp(-s * x)) == pytest.approx(math.exp(-s**alpha), abs=5 / math.sqrt(N))


def test_put_tail_down_atom_and_variance():
    x = sample(PutTailDown(Gaussian(), 0.3), RngStream(9), N)
    zeros = np.mean(x == 0.0)
    assert abs(zeros - 0.3) < 5 * math.sqrt(0.21 / N)
    assert x.var() == pytest.approx(0.7, rel=0.01)


@pytest.mark.parametrize("spec", [PutTailDown(Gaussian(), 0.3), PutTailDown(Laplace(2.0), 0.6)], ids=repr)
def test_put_tail_down_symmetry(spec):
    x = sample(spec, RngStream(10), N)
    for t in (0.1, 0.5, 1.5, 3.0):
        assert abs(np.mean(x <= -t) - (1 - np.mean(x <= t))) < 5 * math.sqrt(0.5 / N)


def test_tempered_tails_match_inversion():
    spec = TemperedStableSym(1.5, 1.0)
    n = 10_000_000
    x = sample(spec, RngStream(12), n)
    sd = math.sqrt(moments(spec).variance)
    for mult in (2.0, 3.0):
        p = tail_prob(spec, mult * sd)
        assert abs(np.mean(x > mult * sd) - p) < 4 * math.sqrt(p * (1 - p) / n)


def test_tempered_grid_variance():
    x = sample(TemperedStableSym(1.5, 1.0), RngStream(13), N)
    assert x.var() == pytest.approx(1.5, rel=0.02)


def test_pareto_tail_shape():
    x = sample(SymmetricPareto(3.0, 2.0), RngStream(14), N)
    assert np.min(np.abs(x)) >= 2.0
    assert np.mean(x > 4.0) == pytest.approx(0.5 * 0.125, abs=5 * math.sqrt(0.0625 / N))


@pytest.mark.parametrize("n", [0, -3])
def test_bad_n(n):
    with pytest.raises(ValueError):
        sample(Gaussian(), RngStream(0), n)


# --- counts ------------------------------------------------------------------

def test_geometric_q_one_is_always_one():
    assert np.all(sample_counts(Geometric(1.0), RngStream(0), 1000) == 1)
    assert sample_count(Geometric(1.0), RngStream(1)) == 1


def test_geometric_mean_and_support():
    c = sample_counts(Geometric(0.01), RngStream(1), 200_000)
    assert c.min() >= 1
    se = math.sqrt((1 - 0.01) / 0.01**2 / c.size)
    assert abs(c.mean() - 100) < 5 * se


def test_geometric_pmf():
    q = 0.3
    c = sample_counts(Geometric(q), RngStream(2), 500_000)
    for j in (1, 2, 5):
        p = q * (1 - q) ** (j - 1)
        assert abs(np.mean(c == j) - p) < 5 * math.sqrt(p * (1 - p) / c.size)


def test_negative_binomial_shape_one_equals_geometric():
    q = 0.2
    a = sample_counts(NegativeBinomial(1.0, q), RngStream(3), 300_000)
    b = sample_counts(Geometric(q), RngStream(4), 300_000)
    assert a.min() == 1
    assert stats.ks_2samp(a, b).pvalue > 1e-3
    assert count_mean(NegativeBinomial(1.0, q)) == pytest.approx(count_mean(Geometric(q)))


def test_negative_binomial_integer_shape_support_and_mean():
    law = NegativeBinomial(3.0, 0.25)
    c = sample_counts(law, RngStream(5), 300_000)
    assert c.min() >= 3
    sd = math.sqrt(3 * 0.75 / 0.25**2)
    assert abs(c.mean() - count_mean(law)) < 5 * sd / math.sqrt(c.size)


@pytest.mark.parametrize("make", [lambda: Geometric(0), lambda: Geometric(1.5),
                                  lambda: NegativeBinomial(0, 0.5), lambda: NegativeBinomial(2, 0)])
def test_invalid_count_laws(make):
    with pytest.raises(ValueError):
        make()
