import numpy as np
import pytest

from src.data.synthetic import make_synthetic, make_synthetic_splits


def nearest_mean_accuracy(train, test):
    flat_train = train.images.reshape(len(train), -1)
    flat_test = test.images.reshape(len(test), -1)
    means = np.stack([flat_train[train.labels == k].mean(axis=0) for k in range(train.classes)])
    dist = ((flat_test[:, None, :] - means[None]) ** 2).sum(axis=2)
    return float(np.mean(np.argmin(dist, axis=1) == test.labels))


def test_same_seed_same_bytes():
    a = make_synthetic(4, 40, seed=9)
    b = make_synthetic(4, 40, seed=9)
    assert a.images.tobytes() == b.images.tobytes()
    assert np.array_equal(a.labels, b.labels)


def test_splits_differ_and_share_stats():
    train, test = make_synthetic_splits(3, 30, 12, seed=1, image_shape=(3, 6, 6))
    assert not np.array_equal(train.images[:12], test.images)
    assert np.array_equal(test.mean, train.mean)


def test_labels_are_balanced_and_images_in_range():
    data = make_synthetic(5, 50, seed=2)
    assert np.bincount(data.labels).tolist() == [10] * 5
    assert data.images.min() >= 0.0 and data.images.max() <= 1.0


def test_zero_separation_is_chance():
    train, test = make_synthetic_splits(2, 1000, 1000, seed=3, separation=0.0)
    assert abs(nearest_mean_accuracy(train, test) - 0.5) < 0.06


def test_large_separation_is_linearly_separable():
    train, test = make_synthetic_splits(10, 500, 500, seed=4, separation=3.0)
    assert nearest_mean_accuracy(train, test) >= 0.99


def test_argument_checks():
    with pytest.raises(ValueError):
        make_synthetic(1, 10, seed=0)
    with pytest.raises(ValueError):
        make_synthetic(10, 5, seed=0)
    with pytest.raises(ValueError):
        make_synthetic(2, 10, seed=0, split='validation')
