import numpy as np

from ..core.rng import Rng
from ..core.tensor import check_finite, relu
from ..utils.errors import ShapeError
from .base import Layer


class ReluLayer(Layer):
    kind = 'relu'

    def forward(self, x, training=False, rng=None):
        self._mask = x > 0
        return relu(x)

    def backward(self, grad):
        return grad * self._mask


def dropout_forward(x, rate, rng, training):
    """Inverted dropout; returns ``(output, mask)`` where ``mask`` holds the kept-unit scale."""
    if not 0 <= rate < 1:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0:
        return x, None
    keep = rng.random(x.shape) >= rate
    mask = keep.astype(x.dtype) / (1.0 - rate)
    return x * mask, mask


def dropout_backward(grad, mask):
    return grad if mask is None else grad * mask


class DropoutLayer(Layer):
    kind = 'dropout'

    def __init__(self, rate):
        super().__init__()
        if not 0 <= rate < 1:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self._mask = None

    def forward(self, x, training=False, rng=None):
        if training and self.rate > 0 and not isinstance(rng, Rng):
            raise ValueError("training-mode dropout needs an Rng")
        out, self._mask = dropout_forward(x, self.rate, rng, training)
        return out

    def backward(self, grad):
        return dropout_backward(grad, self._mask)


def global_avg_pool(x):
    if x.ndim != 4 or x.shape[2] < 1 or x.shape[3] < 1:
        raise ShapeError(f"global average pooling expects (N, C, H, W), got {x.shape}")
    return x.mean(axis=(2, 3))


def global_avg_pool_backward(grad, input_shape):
    h, w = input_shape[2:]
    return np.broadcast_to(grad[:, :, None, None] / (h * w), input_shape).copy()


class GlobalAvgPoolLayer(Layer):
    kind = 'gap'

    def output_shape(self, input_shape):
        if len(input_shape) != 3:
            raise ShapeError(f"global average pooling expects (C, H, W), got {input_shape}")
        return (input_shape[0],)

    def forward(self, x, training=False, rng=None):
        self._shape = x.shape
        return global_avg_pool(x)

    def backward(self, grad):
        return global_avg_pool_backward(grad, self._shape)


def log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax_xent(logits, labels):
    """Mean cross-entropy of softmax(logits) against integer labels.

    Returns:
        (loss, grad_logits) with grad_logits = (softmax - onehot) / N.
    """
    logits = np.asarray(logits)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if logits.ndim != 2 or logits.shape[0] != labels.shape[0]:
        raise ShapeError(f"logits {logits.shape} do not match {labels.shape[0]} labels")
    n, classes = logits.shape
    if np.any(labels < 0) or np.any(labels >= classes):
        raise ValueError(f"labels must lie in [0, {classes})")
    log_probs = log_softmax(logits)
    rows = np.arange(n)
    loss = -float(log_probs[rows, labels].mean())
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    grad /= n
    check_finite(grad, 'cross-entropy gradient')
    return loss, grad
