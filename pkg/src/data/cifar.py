"""CIFAR-10 binary ingestion.

Each record is 3073 bytes: one label byte, then 1024 red, 1024 green and
1024 blue pixel bytes, each plane a row-major 32 x 32 image. Training data
lives in ``data_batch_1.bin`` .. ``data_batch_5.bin`` and test data in
``test_batch.bin``; any dataset written in this layout can be loaded.
"""
import logging
import os
from dataclasses import dataclass, field, replace

import numpy as np

from ..utils.errors import DataFormatError, ShapeError

logger = logging.getLogger(__name__)

IMAGE_SHAPE = (3, 32, 32)
PIXELS = 3 * 32 * 32
RECORD_BYTES = PIXELS + 1
TRAIN_FILES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
TEST_FILES = ('test_batch.bin',)
CLASSES = 10


@dataclass(frozen=True)
class Dataset:
    images: np.ndarray
    labels: np.ndarray
    split: str
    classes: int = CLASSES
    mean: np.ndarray = field(default=None)
    std: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.images.ndim != 4:
            raise ShapeError(f"images must be N x C x H x W, got {self.images.shape}")
        if self.labels.shape != (self.images.shape[0],):
            raise ShapeError(f"{self.labels.shape[0]} labels for {self.images.shape[0]} images")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.classes):
            raise DataFormatError(f"labels must lie in [0, {self.classes})")
        if self.mean is None:
            mean, std = channel_stats(self.images)
            object.__setattr__(self, 'mean', mean)
            object.__setattr__(self, 'std', std)

    def __len__(self):
        return int(self.images.shape[0])

    def with_stats(self, other):
        """Same data normalized with ``other``'s statistics (test sets use training stats)."""
        return replace(self, mean=other.mean, std=other.std)

    def normalize(self, images):
        return (images - self.mean[None, :, None, None]) / self.std[None, :, None, None]

    def subset(self, count):
        return replace(self, images=self.images[:count], labels=self.labels[:count])


def channel_stats(images):
    """Per-channel mean and std over (N, H, W)."""
    if images.shape[0] == 0:
        return np.zeros(3), np.ones(3)
    mean = images.mean(axis=(0, 2, 3))
    std = images.std(axis=(0, 2, 3))
    return mean, np.where(std > 0, std, 1.0)


def parse_cifar10_bytes(raw, source='<bytes>'):
    """Decode CIFAR-10 records into ``(images in [0, 1], labels)``."""
    if len(raw) % RECORD_BYTES:
        complete = len(raw) // RECORD_BYTES
        raise DataFormatError(
            f"{source}: truncated record {complete} at byte offset {complete * RECORD_BYTES} "
            f"({len(raw) - complete * RECORD_BYTES} of {RECORD_BYTES} bytes)"
        )
    records = np.frombuffer(raw, dtype=np.uint8).reshape(-1, RECORD_BYTES)
    labels = records[:, 0].astype(np.int64)
    bad = np.flatnonzero(labels >= CLASSES)
    if bad.size:
        raise DataFormatError(f"{source}: label {labels[bad[0]]} at byte offset {bad[0] * RECORD_BYTES}")
    images = records[:, 1:].reshape((-1,) + IMAGE_SHAPE).astype(np.float64) / 255.0
    return images, labels


def serialize_cifar10(images, labels):
    """Inverse of ``parse_cifar10_bytes`` for images on the 1/255 grid."""
    images = np.asarray(images)
    labels = np.asarray(labels)
    if images.shape[1:] != IMAGE_SHAPE or labels.shape != (images.shape[0],):
        raise ShapeError(f"cannot serialize images {images.shape} with labels {labels.shape}")
    pixels = np.rint(np.clip(images, 0.0, 1.0) * 255.0).astype(np.uint8).reshape(len(images), PIXELS)
    records = np.concatenate([labels.astype(np.uint8)[:, None], pixels], axis=1)
    return records.tobytes()


def read_cifar10_file(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"CIFAR-10 file not found: {path}")
    with open(path, 'rb') as f:
        raw = f.read()
    if not raw:
        raise DataFormatError(f"{path}: no records")
    images, labels = parse_cifar10_bytes(raw, source=path)
    logger.debug("read %d records from %s", len(labels), path)
    return images, labels


def _read_split(data_dir, names, split):
    images, labels = [], []
    for name in names:
        batch_images, batch_labels = read_cifar10_file(os.path.join(data_dir, name))
        images.append(batch_images)
        labels.append(batch_labels)
    return Dataset(np.concatenate(images), np.concatenate(labels), split)


def load_cifar10(data_dir):
    """Load the train and test splits; the test split carries the training statistics."""
    train = _read_split(data_dir, TRAIN_FILES, 'train')
    test = _read_split(data_dir, TEST_FILES, 'test').with_stats(train)
    logger.info("loaded CIFAR-10 from %s: %d train, %d test", data_dir, len(train), len(test))
    return train, test
