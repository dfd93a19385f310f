import numpy as np
import pytest

from src.data.cifar import (
    IMAGE_SHAPE,
    PIXELS,
    RECORD_BYTES,
    TEST_FILES,
    TRAIN_FILES,
    Dataset,
    load_cifar10,
    parse_cifar10_bytes,
    read_cifar10_file,
    serialize_cifar10,
)
from src.utils.errors import DataFormatError, ShapeError


def records(labels, fill=None):
    out = bytearray()
    for i, label in enumerate(labels):
        out.append(label)
        out.extend(bytes([fill if fill is not None else (i * 7) % 256]) * PIXELS)
    return bytes(out)


def test_labels_echo_the_first_byte():
    images, labels = parse_cifar10_bytes(records([3, 0, 9, 1, 5]))
    assert labels.tolist() == [3, 0, 9, 1, 5]
    assert images.shape == (5,) + IMAGE_SHAPE


def test_pixels_scale_to_unit_interval():
    images, _ = parse_cifar10_bytes(records([2], fill=255))
    assert np.all(images == 1.0)
    images, _ = parse_cifar10_bytes(records([2], fill=0))
    assert np.all(images == 0.0)


def test_planes_are_red_green_blue():
    raw = bytes([4]) + bytes([10]) * 1024 + bytes([20]) * 1024 + bytes([30]) * 1024
    images, _ = parse_cifar10_bytes(raw)
    assert images[0, :, 0, 0].tolist() == pytest.approx([10 / 255, 20 / 255, 30 / 255])


def test_truncated_record_reports_offset():
    raw = records([1, 2]) + bytes(100)
    with pytest.raises(DataFormatError, match=f"byte offset {2 * RECORD_BYTES}"):
        parse_cifar10_bytes(raw)


def test_bad_label_reports_offset():
    raw = records([1, 12])
    with pytest.raises(DataFormatError, match=f"label 12 at byte offset {RECORD_BYTES}"):
        parse_cifar10_bytes(raw)


def test_serialize_reproduces_bytes():
    raw = records([0, 4, 8])
    images, labels = parse_cifar10_bytes(raw)
    assert serialize_cifar10(images, labels) == raw


def test_read_missing_and_empty_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_cifar10_file(str(tmp_path / 'absent.bin'))
    empty = tmp_path / 'empty.bin'
    empty.write_bytes(b'')
    with pytest.raises(DataFormatError):
        read_cifar10_file(str(empty))


def test_load_directory_uses_training_statistics(tmp_path):
    for index, name in enumerate(TRAIN_FILES):
        (tmp_path / name).write_bytes(records([index, index + 1], fill=40 * index))
    (tmp_path / TEST_FILES[0]).write_bytes(records([7], fill=200))
    train, test = load_cifar10(str(tmp_path))
    assert len(train) == 10
    assert len(test) == 1
    assert train.labels.tolist() == [0, 1, 1, 2, 2, 3, 3, 4, 4, 5]
    assert np.array_equal(test.mean, train.mean)
    assert np.array_equal(test.std, train.std)
    normalized = test.normalize(test.images)
    assert normalized.mean() > 0


def test_dataset_validates_shapes_and_labels():
    images = np.zeros((2, 3, 4, 4))
    with pytest.raises(ShapeError):
        Dataset(images, np.zeros(3, dtype=np.int64), 'train')
    with pytest.raises(DataFormatError):
        Dataset(images, np.array([0, 10]), 'train')
    data = Dataset(images, np.array([0, 1]), 'train', classes=2)
    assert np.all(data.std == 1.0)
    assert len(data.subset(1)) == 1
