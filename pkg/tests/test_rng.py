import numpy as np
import pytest

from outlierlab.rng import RngStream


def test_same_key_same_sequence():
    a = RngStream(7, 3).open_uniform(1000)
    b = RngStream(7, 3).open_uniform(1000)
    assert np.array_equal(a, b)


def test_distinct_streams_differ_and_look_independent():
    a = RngStream(7, 0).standard_normal(100_000)
    b = RngStream(7, 1).standard_normal(100_000)
    assert not np.array_equal(a, b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 5 / np.sqrt(100_000)


def test_advancing_one_stream_leaves_another_untouched():
    ref = RngStream(1, 2).open_uniform(10)
    s1, s2 = RngStream(1, 1), RngStream(1, 2)
    s1.open_uniform(10_000)
    assert np.array_equal(s2.open_uniform(10), ref)


def test_open_uniform_is_strictly_inside_unit_interval():
    u = RngStream(0).open_uniform(1_000_000)
    assert u.min() > 0 and u.max() < 1


@pytest.mark.parametrize("seed,sid", [(-1, 0), (2**64, 0), (0, -5), (0, 2**64)])
def test_key_must_be_u64(seed, sid):
    with pytest.raises(ValueError):
        RngStream(seed, sid)


def test_extreme_keys_allowed():
    RngStream(2**64 - 1, 2**64 - 1).open_uniform(3)
