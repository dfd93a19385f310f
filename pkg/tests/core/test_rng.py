import numpy as np
import pytest

from src.core.rng import Rng, rng_integers, rng_normal, rng_permutation, rng_uniform


def test_same_seed_same_stream():
    assert np.array_equal(Rng(7).next_words(1000), Rng(7).next_words(1000))


def test_different_seeds_differ():
    assert not np.array_equal(Rng(7).random(100), Rng(8).random(100))


def test_draw_sizes_do_not_change_the_stream():
    """Drawing 10 then 600 values equals drawing 610 at once."""
    split = Rng(3)
    parts = np.concatenate([split.next_words(10), split.next_words(600)])
    assert np.array_equal(parts, Rng(3).next_words(10 + 600))


def test_state_round_trip_resumes_stream():
    rng = Rng(11)
    rng.random(37)
    state = rng.get_state()
    expected = rng.random(500)
    other = Rng(0)
    other.set_state(state)
    assert np.array_equal(other.random(500), expected)


def test_spawned_streams_are_distinct_and_stable():
    root = Rng(5)
    assert np.array_equal(root.spawn(1).random(10), Rng(5).spawn(1).random(10))
    assert not np.array_equal(root.spawn(1).random(10), root.spawn(2).random(10))


def test_uniform_range_and_mean():
    u = rng_uniform(Rng(1), 100000, -0.01, 0.01)
    assert u.min() >= -0.01 and u.max() < 0.01
    assert abs(u.mean()) < 1e-4


def test_normal_moments():
    z = rng_normal(Rng(2), (100000,), 1.0, 2.0)
    assert abs(z.mean() - 1.0) < 0.03
    assert abs(z.std() - 2.0) < 0.03


def test_normal_odd_count():
    assert rng_normal(Rng(2), (3, 3)).shape == (3, 3)


def test_normal_rejects_negative_std():
    with pytest.raises(ValueError):
        rng_normal(Rng(2), 3, std=-1.0)


def test_integers_cover_range():
    values = rng_integers(Rng(4), 10000, 0, 9)
    assert set(np.unique(values)) == set(range(9))


def test_permutation_is_a_permutation():
    perm = rng_permutation(Rng(6), 257)
    assert np.array_equal(np.sort(perm), np.arange(257))


def test_normal_with_zero_std_is_the_mean():
    assert np.array_equal(rng_normal(Rng(3), (4, 5), 2.5, 0.0), np.full((4, 5), 2.5))
