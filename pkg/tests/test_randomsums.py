import math

import numpy as np
import pytest
from scipy import stats

from outlierlab.distributions import (
    CenteredExponential, Gaussian, Laplace, SpecError, SymmetricStable, survival,
)
from outlierlab.outlier import outlier_fraction
from outlierlab.randomsums import (
    RandomSumConfig, convergence_table, ks_distance, ks_two_sample, limit_cdf, limit_law,
    random_sum_sample,
)
from outlierlab.samplers import Geometric, NegativeBinomial, sample
from outlierlab.rng import RngStream

R = 100_000


def test_q_one_reproduces_standardized_base():
    xs = random_sum_sample(RandomSumConfig(Geometric(1.0), Laplace(2.0), 50_000, 1))
    assert ks_distance(xs, lambda t: 1 - survival(Laplace(1 / math.sqrt(2)), t)) < 1.95 / math.sqrt(50_000)


def test_wald_variance():
    xs = random_sum_sample(RandomSumConfig(Geometric(0.01), Gaussian(), R, 2))
    assert xs.var() == pytest.approx(1.0, rel=0.02)


def test_negative_binomial_shape_one_matches_geometric():
    a = random_sum_sample(RandomSumConfig(NegativeBinomial(1.0, 0.05), Gaussian(), R, 3))
    b = random_sum_sample(RandomSumConfig(Geometric(0.05), Gaussian(), R, 4))
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_negative_binomial_variance_unit():
    xs = random_sum_sample(RandomSumConfig(NegativeBinomial(2.0, 0.01), Gaussian(), R, 5))
    assert xs.var() == pytest.approx(1.0, rel=0.02)


def test_reproducible():
    cfg = RandomSumConfig(Geometric(0.1), Gaussian(), 25_000, 6)
    assert random_sum_sample(cfg).tobytes() == random_sum_sample(cfg).tobytes()


def test_config_validation():
    with pytest.raises(SpecError):
        RandomSumConfig(Geometric(0.1), SymmetricStable(1.5), 10, 0)
    with pytest.raises(ValueError):
        RandomSumConfig(Geometric(0.1), Gaussian(), 0, 0)


def test_ks_single_point():
    assert ks_distance([0.0], stats.norm.cdf) == pytest.approx(0.5)


def test_ks_against_scipy():
    x = np.random.default_rng(0).standard_normal(1000)
    assert ks_distance(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic)
    y = np.random.default_rng(1).standard_normal(700)
    assert ks_two_sample(x, y) == pytest.approx(stats.ks_2samp(x, y).statistic)


def test_ks_self_sample_small():
    x = sample(Gaussian(), RngStream(8), R)
    assert ks_distance(x, stats.norm.cdf) < 1.95 / math.sqrt(R)


def test_geometric_sum_close_to_laplace():
    xs = random_sum_sample(RandomSumConfig(Geometric(0.01), Gaussian(), R, 9))
    assert ks_distance(xs, limit_cdf(Geometric(0.01))) < 0.02


def test_limit_laws_have_unit_variance():
    from outlierlab.charfn import moments
    assert moments(limit_law(Geometric(0.1))).variance == pytest.approx(1.0)
    assert moments(limit_law(NegativeBinomial(3.0, 0.1))).variance == pytest.approx(1.0)


def test_convergence_table_geometric_decreasing():
    rows = convergence_table("geometric", (0.2, 0.05, 0.01), Gaussian(), R, 10)
    d = [r[1] for r in rows]
    assert d[0] > d[1] > d[2]


def test_convergence_table_laplace_base():
    (_, d), = convergence_table("geometric", (0.01,), Laplace(1.0), R, 11)
    assert d < 0.02


def test_convergence_table_negative_binomial():
    (_, d), = convergence_table("negative_binomial", (0.01,), Gaussian(), R, 12, r=2.0)
    assert d < 0.03


def test_convergence_table_validation():
    with pytest.raises(ValueError):
        convergence_table("geometric", (0.01, 0.1), Gaussian(), 10, 0)
    with pytest.raises(ValueError):
        convergence_table("poisson", (0.1,), Gaussian(), 10, 0)


def test_base_universality_at_q_001():
    # stated requirement: two standardized bases agree to KS < 0.02 at q = 0.01
    a = random_sum_sample(RandomSumConfig(Geometric(0.01), Gaussian(), R, 13))
    b = random_sum_sample(RandomSumConfig(Geometric(0.01), CenteredExponential(1.0), R, 14))
    assert ks_two_sample(a, b) < 0.02


def test_base_universality_gap_shrinks_with_q():
    gaps = []
    for q in (0.04, 0.01, 0.0025):
        a = random_sum_sample(RandomSumConfig(Geometric(q), Gaussian(), 200_000, 15))
        b = random_sum_sample(RandomSumConfig(Geometric(q), CenteredExponential(1.0), 200_000, 16))
        gaps.append(ks_two_sample(a, b))
    assert gaps[0] > gaps[1] > gaps[2]


def test_outlier_fraction_tends_to_laplace_value():
    xs = random_sum_sample(RandomSumConfig(Geometric(0.005), Gaussian(), R, 17))
    f = outlier_fraction(xs, 3)
    assert abs(f - 0.0143696) < 3 * math.sqrt(f * (1 - f) / R)
