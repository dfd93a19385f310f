import struct

import numpy as np
import pytest

from src.config.config_loader import TrainConfig
from src.core.rng import Rng
from src.data.synthetic import make_synthetic
from src.networks.model import Network
from src.training.checkpoint import MAGIC, checkpoint_load, checkpoint_save
from src.training.optimizer import SGD
from src.training.trainer import init_params, train_epoch
from src.utils.errors import CheckpointError
from src.verification.suites import small_detrame_spec


@pytest.fixture
def trained(tmp_path):
    """A small network after one epoch, with its optimizer state and RNG."""
    config = TrainConfig(lr0=0.05, schedule=(), batch=4, epochs=1, classes=3, output_dir=str(tmp_path))
    net = Network(small_detrame_spec(3))
    init_params(net, Rng(0))
    sgd = SGD(config.momentum, config.weight_decay)
    state = sgd.init_state(net.parameters())
    rng = Rng(7)
    train_epoch(net, make_synthetic(3, 12, seed=0, image_shape=(3, 6, 6)), config, sgd, state, rng, epoch=0)
    return net, state, rng, config


def test_save_load_save_is_byte_identical(tmp_path, trained):
    net, state, rng, config = trained
    first = tmp_path / 'a.bin'
    second = tmp_path / 'b.bin'
    checkpoint_save(str(first), net, state, 0, rng=rng, config=config)
    restored = checkpoint_load(str(first))
    checkpoint_save(str(second), restored.net, restored.state, restored.epoch, rng=restored.rng,
                    config=restored.config)
    assert first.read_bytes() == second.read_bytes()


def test_restores_everything(tmp_path, trained):
    net, state, rng, config = trained
    path = str(tmp_path / 'ckpt.bin')
    checkpoint_save(path, net, state, 3, rng=rng, config=config)
    restored = checkpoint_load(path)
    assert restored.epoch == 3
    assert restored.config == config
    assert restored.state.step == state.step
    for ref, other in zip(net.parameters(), restored.net.parameters()):
        assert ref.key == other.key
        assert np.array_equal(ref.value, other.value)
        assert np.array_equal(state.buffers[ref.key], restored.state.buffers[ref.key])
    assert np.array_equal(rng.random((16,)), restored.rng.random((16,)))


def test_load_into_existing_network(tmp_path, trained):
    net, state, rng, config = trained
    path = str(tmp_path / 'ckpt.bin')
    checkpoint_save(path, net, state, 0, rng=rng, config=config)
    target = Network(small_detrame_spec(3))
    restored = checkpoint_load(path, target)
    assert restored.net is target
    assert np.array_equal(target.parameters()[0].value, net.parameters()[0].value)


def test_rejects_other_network(tmp_path, trained):
    net, state, rng, config = trained
    path = str(tmp_path / 'ckpt.bin')
    checkpoint_save(path, net, state, 0, rng=rng, config=config)
    with pytest.raises(CheckpointError, match='written for'):
        checkpoint_load(path, Network(small_detrame_spec(4)))


def test_bad_magic(tmp_path):
    path = tmp_path / 'junk.bin'
    path.write_bytes(b'NOTACKPT' + bytes(64))
    with pytest.raises(CheckpointError, match='magic'):
        checkpoint_load(str(path))


def test_version_mismatch(tmp_path, trained):
    net, state, rng, config = trained
    path = tmp_path / 'ckpt.bin'
    checkpoint_save(str(path), net, state, 0, rng=rng, config=config)
    raw = bytearray(path.read_bytes())
    raw[len(MAGIC):len(MAGIC) + 4] = struct.pack('<I', 99)
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match='version 99'):
        checkpoint_load(str(path))


def test_digest_mismatch(tmp_path, trained):
    net, state, rng, config = trained
    path = tmp_path / 'ckpt.bin'
    checkpoint_save(str(path), net, state, 0, rng=rng, config=config)
    raw = bytearray(path.read_bytes())
    raw[len(MAGIC) + 4] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match='digest'):
        checkpoint_load(str(path))


def test_truncated_and_padded_files(tmp_path, trained):
    net, state, rng, config = trained
    path = tmp_path / 'ckpt.bin'
    checkpoint_save(str(path), net, state, 0, rng=rng, config=config)
    raw = path.read_bytes()
    path.write_bytes(raw[:-5])
    with pytest.raises(CheckpointError, match='truncated'):
        checkpoint_load(str(path))
    path.write_bytes(raw + b'\0')
    with pytest.raises(CheckpointError, match='trailing'):
        checkpoint_load(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        checkpoint_load(str(tmp_path / 'absent.bin'))
