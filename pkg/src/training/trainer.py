import logging
import os
import time
from dataclasses import dataclass, field
from typing import List

import numpy as np
from tqdm import tqdm

from ..core.rng import Rng, rng_normal, rng_permutation, rng_uniform
from ..data import augment, load_dataset
from ..evaluation.metrics import evaluate
from ..layers.activations import softmax_xent
from ..layers.base import BIAS, GAIN, THRESHOLD, WEIGHT, WTILDE
from ..networks.builders import build_network_spec
from ..networks.model import Network
from ..utils.cache import setup_output_dir
from ..utils.errors import ConstraintError, NonFiniteError, TrainingError
from ..utils.output import truncate_metrics, write_metrics_row
from .checkpoint import checkpoint_load, checkpoint_save
from .optimizer import SGD, lr_at

logger = logging.getLogger(__name__)

WTILDE_INIT = 0.01
GAIN_INIT = 0.9
THRESHOLD_INIT = 0.01
METRICS_FILE = 'metrics.csv'
CHECKPOINT_FILE = 'checkpoint.bin'
# sub-streams of the run seed
INIT_STREAM = 1
TRAIN_STREAM = 2


@dataclass
class EpochMetrics:
    loss: float
    accuracy: float
    samples: int
    lr: float


@dataclass
class FitResult:
    net: Network
    state: object
    history: List[dict] = field(default_factory=list)
    metrics_path: str = ''
    checkpoint_path: str = ''


def init_params(net, rng):
    """Draw initial values for every parameter, inside its constraint set."""
    for ref in net.parameters():
        value = ref.value
        if ref.role == WEIGHT:
            fan_in = int(np.prod(value.shape[1:]))
            value[...] = rng_normal(rng, value.shape, 0.0, np.sqrt(2.0 / fan_in))
        elif ref.role == WTILDE:
            value[...] = rng_uniform(rng, value.shape, -WTILDE_INIT, WTILDE_INIT)
        elif ref.role == GAIN:
            value[...] = GAIN_INIT
        elif ref.role == THRESHOLD:
            value[...] = THRESHOLD_INIT
        elif ref.role == BIAS:
            value[...] = 0.0
    return project_constraints(net)


def project_constraints(net):
    """Zero the Q-metric self taps, clamp h to [0, 1] and b to [0, inf)."""
    net.project()
    return net


def check_constraints(net):
    for index, layer in enumerate(net.qrelu_layers()):
        if np.any(layer.params['Wtilde'][layer.self_taps()] != 0):
            raise ConstraintError(f"Q-metric layer {index}: self taps are not zero")
        h = layer.params['h']
        if h.min() < 0 or h.max() > 1:
            raise ConstraintError(f"Q-metric layer {index}: h outside [0, 1] ({h.min()}, {h.max()})")
        if layer.params['b'].min() < 0:
            raise ConstraintError(f"Q-metric layer {index}: negative threshold {layer.params['b'].min()}")
    return True


def train_epoch(net, data, config, optimizer, state, rng, epoch, progress=False, on_step=None):
    """One shuffled pass of projected minibatch SGD over ``data``.

    ``on_step(net, state)`` is called after every projected update.
    """
    if len(data) == 0:
        raise TrainingError("training set is empty")
    lr = lr_at(config, epoch)
    refs = net.parameters()
    order = rng_permutation(rng, len(data))
    total_loss = 0.0
    correct = 0
    batches = range(0, len(data), config.batch)
    for start in tqdm(batches, desc=f"epoch {epoch}", leave=False, disable=not progress):
        idx = order[start:start + config.batch]
        images = augment(data.images[idx], rng, config.augment)
        labels = data.labels[idx]
        try:
            logits = net.forward(data.normalize(images), training=True, rng=rng)
            loss, grad = softmax_xent(logits, labels)
        except NonFiniteError as e:
            raise TrainingError(f"epoch {epoch}, step {state.step}, lr {lr:g}: {e}") from e
        if not np.isfinite(loss):
            raise TrainingError(f"epoch {epoch}, step {state.step}, lr {lr:g}: loss is {loss}")
        net.backward(grad)
        optimizer.step(refs, state, lr)
        project_constraints(net)
        if on_step is not None:
            on_step(net, state)
        total_loss += loss * len(idx)
        correct += int(np.sum(np.argmax(logits, axis=1) == labels))
    return EpochMetrics(loss=total_loss / len(data), accuracy=correct / len(data), samples=len(data), lr=lr)


def _fresh_run(config, spec=None):
    dtype = np.float32 if config.precision == 'float32' else np.float64
    if spec is None:
        spec = build_network_spec(config.arch, config.depth, config.classes, config.detrame, config.T, config.width)
    net = Network(spec, dtype=dtype)
    root = Rng(config.seed)
    init_params(net, root.spawn(INIT_STREAM))
    return net, root.spawn(TRAIN_STREAM)


def fit(config, train=None, test=None, resume=None, progress=True, spec=None):
    """Train for ``config.epochs`` epochs, writing a metrics row and a checkpoint after each.

    With ``resume`` the network, optimizer state and RNG come from that
    checkpoint and training continues with the following epoch; rows are
    appended to the existing metrics file. ``spec`` replaces the network
    named by the config for fresh runs.
    """
    output_dir = setup_output_dir(config.output_dir)
    metrics_path = os.path.join(output_dir, METRICS_FILE)
    checkpoint_path = os.path.join(output_dir, CHECKPOINT_FILE)
    optimizer = SGD(config.momentum, config.weight_decay)
    if resume:
        restored = checkpoint_load(resume)
        net, state, rng = restored.net, restored.state, restored.rng
        if rng is None:
            raise TrainingError(f"{resume} has no RNG state to resume from")
        start = restored.epoch + 1
        # rows written after the checkpoint being resumed are replayed
        truncate_metrics(metrics_path, start)
        logger.info("resuming %s from %s at epoch %d", net.spec.name, resume, start)
    else:
        net, rng = _fresh_run(config, spec)
        state = optimizer.init_state(net.parameters(), lr=config.lr0)
        start = 0
        if os.path.exists(metrics_path):
            logger.warning("overwriting %s", metrics_path)
            os.remove(metrics_path)
    if train is None:
        train, test = load_dataset(config)
    logger.info("training %s (%d parameters) on %d images", net.spec.name, net.parameter_count(), len(train))

    history = []
    for epoch in tqdm(range(start, config.epochs), desc='epochs', disable=not progress):
        started = time.perf_counter()
        metrics = train_epoch(net, train, config, optimizer, state, rng, epoch, progress)
        test_acc = evaluate(net, test).accuracy
        row = {
            'epoch': epoch,
            'train_loss': metrics.loss,
            'train_acc': metrics.accuracy,
            'test_acc': test_acc,
            'lr': metrics.lr,
            'seconds': 0.0 if config.deterministic else time.perf_counter() - started,
        }
        write_metrics_row(metrics_path, row)
        checkpoint_save(checkpoint_path, net, state, epoch, rng=rng, config=config)
        history.append(row)
        logger.info("epoch %d: loss %.4f train acc %.4f test acc %.4f lr %g",
                    epoch, metrics.loss, metrics.accuracy, test_acc, metrics.lr)
    return FitResult(net=net, state=state, history=history,
                     metrics_path=metrics_path, checkpoint_path=checkpoint_path)
