"""Deterministic class-conditional image blobs for desk-scale runs.

Class ``k`` has a colour vector and a Gaussian bump at its own position.
A sample is ``0.5 + 0.25 * separation * template_k + NOISE * noise`` clipped
to [0, 1]; with ``separation = 0`` every class has the same distribution.
Templates come from sub-stream 0 of the seed, so train and test splits drawn
with the same seed share their class templates.
"""
import logging

import numpy as np

from ..core.rng import Rng, rng_normal, rng_uniform
from .cifar import IMAGE_SHAPE, Dataset

logger = logging.getLogger(__name__)

NOISE = 0.15
BLOB_WIDTH = 6.0
SPLIT_STREAMS = {'train': 1, 'test': 2}


def class_templates(classes, seed, image_shape=IMAGE_SHAPE):
    rng = Rng(seed).spawn(0)
    colors = rng_normal(rng, (classes, 3))
    colors /= np.linalg.norm(colors, axis=1, keepdims=True)
    centers = rng_uniform(rng, (classes, 2), 8.0, 24.0)
    channels, height, width = image_shape
    centers *= np.array([height, width]) / 32.0
    rows, cols = np.mgrid[0:height, 0:width]
    templates = np.empty((classes,) + tuple(image_shape))
    for k in range(classes):
        dist2 = (rows - centers[k, 0]) ** 2 + (cols - centers[k, 1]) ** 2
        bump = 0.5 + 0.5 * np.exp(-dist2 / (2 * BLOB_WIDTH ** 2))
        templates[k] = np.resize(colors[k], channels)[:, None, None] * bump[None]
    return templates


def make_synthetic(classes, n, seed, separation=1.0, split='train', image_shape=IMAGE_SHAPE):
    """``n`` images with balanced labels; identical output for identical arguments."""
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    if n < classes:
        raise ValueError(f"need n >= classes, got n={n}, classes={classes}")
    if split not in SPLIT_STREAMS:
        raise ValueError(f"split must be one of {sorted(SPLIT_STREAMS)}, got {split!r}")
    templates = class_templates(classes, seed, image_shape)
    rng = Rng(seed).spawn(SPLIT_STREAMS[split])
    labels = np.arange(n, dtype=np.int64) % classes
    labels = labels[np.argsort(rng.random((n,)), kind='stable')]
    noise = rng_normal(rng, (n,) + tuple(image_shape))
    images = np.clip(0.5 + 0.25 * separation * templates[labels] + NOISE * noise, 0.0, 1.0)
    logger.debug("synthetic %s split: %d images, %d classes, separation %g", split, n, classes, separation)
    return Dataset(images, labels, split, classes=classes)


def make_synthetic_splits(classes, n_train, n_test, seed, separation=1.0, image_shape=IMAGE_SHAPE):
    train = make_synthetic(classes, n_train, seed, separation, 'train', image_shape)
    test = make_synthetic(classes, n_test, seed, separation, 'test', image_shape).with_stats(train)
    return train, test
