"""Binary training checkpoints.

Layout, all integers little-endian:

    8 bytes   magic ``DTRMCKPT``
    uint32    format version
    32 bytes  sha256 digest of the network spec JSON
    uint64    metadata length, then metadata JSON (spec, config, counters,
              RNG state, parameter keys and shapes)
    per parameter in spec order:        uint64 length, float64 values
    per momentum buffer in spec order:  uint64 length, float64 values
"""
import json
import logging
import os
import struct
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..config.config_loader import TrainConfig
from ..core.rng import Rng
from ..networks.model import Network
from ..networks.spec import spec_from_json, spec_to_json
from ..utils.errors import CheckpointError
from .optimizer import OptimizerState

logger = logging.getLogger(__name__)

MAGIC = b'DTRMCKPT'
VERSION = 1
_HEADER = struct.Struct('<8sI32s')
_LENGTH = struct.Struct('<Q')


@dataclass
class Checkpoint:
    net: Network
    state: OptimizerState
    epoch: int
    rng: Optional[Rng] = None
    config: Optional[TrainConfig] = None


def _rng_to_json(rng):
    if rng is None:
        return None
    state = rng.get_state()
    return {
        'seed': int(state['seed']),
        's0': [int(w) for w in state['s0']],
        's1': [int(w) for w in state['s1']],
        'pending': [int(w) for w in state['pending']],
    }


def _rng_from_json(payload):
    if payload is None:
        return None
    rng = Rng(payload['seed'])
    rng.set_state({
        'seed': payload['seed'],
        's0': np.array(payload['s0'], dtype=np.uint64),
        's1': np.array(payload['s1'], dtype=np.uint64),
        'pending': np.array(payload['pending'], dtype=np.uint64),
    })
    return rng


def config_to_json(config):
    return None if config is None else asdict(config)


def config_from_json(payload):
    if payload is None:
        return None
    payload = dict(payload)
    payload['schedule'] = tuple(tuple(point) for point in payload['schedule'])
    return TrainConfig(**payload)


def _write_array(f, array):
    raw = np.ascontiguousarray(array, dtype='<f8').tobytes()
    f.write(_LENGTH.pack(len(raw)))
    f.write(raw)


def _read_exact(f, size, what):
    raw = f.read(size)
    if len(raw) != size:
        raise CheckpointError(f"checkpoint truncated while reading {what}")
    return raw


def _read_array(f, shape, what):
    (length,) = _LENGTH.unpack(_read_exact(f, _LENGTH.size, what))
    expected = int(np.prod(shape, dtype=np.int64)) * 8
    if length != expected:
        raise CheckpointError(f"{what}: stored {length} bytes, expected {expected} for shape {tuple(shape)}")
    return np.frombuffer(_read_exact(f, length, what), dtype='<f8').reshape(shape)


def checkpoint_save(path, net, state, epoch, rng=None, config=None):
    refs = net.parameters()
    spec_json = spec_to_json(net.spec)
    meta = {
        'spec': spec_json,
        'config': config_to_json(config),
        'epoch': int(epoch),
        'step': int(state.step),
        'lr': float(state.lr),
        'rng': _rng_to_json(rng),
        'params': [[ref.key, list(ref.value.shape)] for ref in refs],
    }
    meta_raw = json.dumps(meta, sort_keys=True, separators=(',', ':')).encode('utf-8')
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    try:
        with open(path, 'wb') as f:
            f.write(_HEADER.pack(MAGIC, VERSION, net.spec.digest()))
            f.write(_LENGTH.pack(len(meta_raw)))
            f.write(meta_raw)
            for ref in refs:
                _write_array(f, ref.value)
            for ref in refs:
                _write_array(f, state.buffers[ref.key])
    except OSError as e:
        raise CheckpointError(f"could not write checkpoint {path}: {e}") from e
    logger.debug("saved checkpoint %s (epoch %d, step %d)", path, epoch, state.step)


def checkpoint_load(path, net=None):
    """Restore a checkpoint; builds the network from the stored spec when ``net`` is None."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"checkpoint not found: {path}")
    with open(path, 'rb') as f:
        magic, version, digest = _HEADER.unpack(_read_exact(f, _HEADER.size, 'header'))
        if magic != MAGIC:
            raise CheckpointError(f"{path} is not a checkpoint (bad magic {magic!r})")
        if version != VERSION:
            raise CheckpointError(f"{path} has checkpoint format version {version}, expected {VERSION}")
        (meta_length,) = _LENGTH.unpack(_read_exact(f, _LENGTH.size, 'metadata length'))
        try:
            meta = json.loads(_read_exact(f, meta_length, 'metadata').decode('utf-8'))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CheckpointError(f"{path}: unreadable metadata: {e}") from e

        spec = spec_from_json(meta['spec'])
        if spec.digest() != digest:
            raise CheckpointError(f"{path}: spec digest does not match the stored spec")
        config = config_from_json(meta['config'])
        if net is None:
            dtype = np.float32 if config is not None and config.precision == 'float32' else np.float64
            net = Network(spec, dtype=dtype)
        elif net.spec.digest() != digest:
            raise CheckpointError(f"{path} was written for {spec.name}, not {net.spec.name}")

        refs = net.parameters()
        stored = [(key, tuple(shape)) for key, shape in meta['params']]
        if stored != [(ref.key, ref.value.shape) for ref in refs]:
            raise CheckpointError(f"{path}: parameter layout does not match {net.spec.name}")
        for ref in refs:
            ref.value[...] = _read_array(f, ref.value.shape, ref.key)
        buffers = {ref.key: _read_array(f, ref.value.shape, f"momentum {ref.key}").astype(ref.value.dtype)
                   for ref in refs}
        if f.read(1):
            raise CheckpointError(f"{path}: trailing bytes after the last buffer")

    state = OptimizerState(buffers=buffers, step=meta['step'], lr=meta['lr'])
    return Checkpoint(net=net, state=state, epoch=meta['epoch'], rng=_rng_from_json(meta['rng']), config=config)
