import numpy as np

from src.core.rng import Rng, rng_uniform
from src.data.augment import PAD, augment, crop_and_flip


def test_disabled_is_identity(rng):
    images = rng_uniform(rng, (3, 3, 8, 8))
    assert augment(images, rng, enabled=False) is images


def test_centre_crop_without_flip_is_identity(rng):
    images = rng_uniform(rng, (2, 3, 8, 8))
    offsets = np.full((2, 2), PAD)
    out = crop_and_flip(images, offsets, np.array([False, False]))
    assert np.array_equal(out, images)


def test_flip_mirrors_columns(rng):
    images = rng_uniform(rng, (1, 3, 8, 8))
    out = crop_and_flip(images, np.full((1, 2), PAD), np.array([True]))
    assert np.array_equal(out, images[:, :, :, ::-1])


def test_shift_moves_content(rng):
    images = rng_uniform(rng, (1, 1, 8, 8))
    out = crop_and_flip(images, np.array([[PAD + 1, PAD]]), np.array([False]))
    assert np.array_equal(out[0, 0, :-1], images[0, 0, 1:])


def test_flip_rate_is_one_half():
    n = 10000
    columns = np.broadcast_to(np.arange(5.0), (n, 1, 5, 5)).copy()
    out = augment(columns, Rng(11), pad=0)
    flipped = out[:, 0, 0, 0] == 4.0
    assert abs(flipped.mean() - 0.5) <= 0.015


def test_same_rng_same_output(rng):
    images = rng_uniform(rng, (4, 3, 8, 8))
    assert np.array_equal(augment(images, Rng(5)), augment(images, Rng(5)))
