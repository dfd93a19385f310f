"""Q-metric ReLU: the metric prox unrolled as a recurrent layer.

Starting from ``U_0 = 0`` the layer applies ``T`` times

    U_{t+1} = ReLU(h * Z + K(U_t - Z) - b)

where ``K`` is either a dense zero-diagonal matrix acting on feature rows
(input layout N x k) or a same-padded convolution over channels whose
self-channel centre taps are pinned to zero (input layout N x C x H x W).
``h`` and ``b`` are per feature (dense) or per channel (convolutional).
"""
from typing import List, NamedTuple

import numpy as np

from ..core.tensor import check_finite, conv2d, conv2d_grads, relu
from ..prox.qmetric import DEFAULT_UNROLL
from ..utils.errors import ShapeError
from .base import GAIN, THRESHOLD, WTILDE, Layer


class QReluTape(NamedTuple):
    Z: np.ndarray
    differences: List[np.ndarray]   # U_t - Z for t = 0 .. T-1
    preactivations: List[np.ndarray]  # arguments of the ReLU at steps 1 .. T


class QReluLayer(Layer):
    kind = 'qrelu'

    def __init__(self, Wtilde, h, b, T=DEFAULT_UNROLL, groups=1):
        super().__init__()
        Wtilde = np.asarray(Wtilde)
        if Wtilde.ndim not in (2, 4):
            raise ShapeError(f"Wtilde must be a matrix or a kernel stack, got {Wtilde.shape}")
        channels = Wtilde.shape[0]
        self.conv = Wtilde.ndim == 4
        if self.conv:
            kh, kw = Wtilde.shape[2:]
            if kh % 2 == 0 or kw % 2 == 0:
                raise ShapeError(f"Q-metric kernels need odd sizes to keep a centre tap, got {kh}x{kw}")
            if channels % groups or Wtilde.shape[1] * groups != channels:
                raise ShapeError(f"kernel stack {Wtilde.shape} does not match {groups} channel groups")
        elif Wtilde.shape != (channels, channels):
            raise ShapeError(f"dense Wtilde must be square, got {Wtilde.shape}")
        if T < 1:
            raise ValueError(f"unroll count must be positive, got {T}")
        self.T = int(T)
        self.groups = groups if self.conv else 1
        self.add_param('Wtilde', Wtilde, WTILDE)
        self.add_param('h', np.asarray(h, dtype=Wtilde.dtype).reshape(channels), GAIN)
        self.add_param('b', np.asarray(b, dtype=Wtilde.dtype).reshape(channels), THRESHOLD)
        self._tape = None

    @classmethod
    def dense(cls, features, T=DEFAULT_UNROLL, dtype=np.float64):
        return cls(np.zeros((features, features), dtype=dtype), np.ones(features, dtype=dtype),
                   np.zeros(features, dtype=dtype), T=T)

    @classmethod
    def convolution(cls, channels, kernel, T=DEFAULT_UNROLL, groups=1, dtype=np.float64):
        return cls(np.zeros((channels, channels // groups, kernel, kernel), dtype=dtype),
                   np.ones(channels, dtype=dtype), np.zeros(channels, dtype=dtype), T=T, groups=groups)

    @classmethod
    def from_params(cls, params):
        """Dense layer carrying a ``QMetricParams`` triple."""
        return cls(params.Wtilde.copy(), params.h.copy(), params.b.copy(), T=params.T)

    @property
    def channels(self):
        return self.params['Wtilde'].shape[0]

    @property
    def padding(self):
        return self.params['Wtilde'].shape[2] // 2 if self.conv else 0

    def self_taps(self):
        """Index arrays addressing the entries pinned to zero."""
        channels = self.channels
        if not self.conv:
            idx = np.arange(channels)
            return idx, idx
        per_group = channels // self.groups
        out = np.arange(channels)
        kh, kw = self.params['Wtilde'].shape[2:]
        return out, out % per_group, np.full(channels, kh // 2), np.full(channels, kw // 2)

    def output_shape(self, input_shape):
        expected = input_shape[0] if input_shape else None
        if expected != self.channels or (self.conv and len(input_shape) != 3) or (not self.conv and len(input_shape) != 1):
            raise ShapeError(f"Q-metric ReLU over {self.channels} channels cannot take {input_shape}")
        return input_shape

    def project(self):
        self.params['Wtilde'][self.self_taps()] = 0
        np.clip(self.params['h'], 0, 1, out=self.params['h'])
        np.maximum(self.params['b'], 0, out=self.params['b'])

    def forward(self, x, training=False, rng=None):
        out, self._tape = qrelu_forward(self, x)
        return out

    def backward(self, grad):
        grad_z, grad_w, grad_h, grad_b = qrelu_backward(self, self._tape, grad)
        self.grads['Wtilde'] = grad_w
        self.grads['h'] = grad_h
        self.grads['b'] = grad_b
        return grad_z


def _broadcast(layer, v):
    return v[None, :, None, None] if layer.conv else v[None, :]


def _reduce(layer, x):
    return x.sum(axis=(0, 2, 3)) if layer.conv else x.sum(axis=0)


def _mix(layer, D):
    Wtilde = layer.params['Wtilde']
    if layer.conv:
        return conv2d(D, Wtilde, 1, layer.padding, layer.groups)
    return D @ Wtilde.T


def _mix_grads(layer, upstream, D):
    Wtilde = layer.params['Wtilde']
    if layer.conv:
        return conv2d_grads(upstream, D, Wtilde, 1, layer.padding, layer.groups)
    return upstream @ Wtilde, upstream.T @ D


def qrelu_forward(layer, Z):
    """Exactly ``layer.T`` recurrent steps from zero; returns ``(U_T, tape)``."""
    expected_ndim = 4 if layer.conv else 2
    if Z.ndim != expected_ndim or Z.shape[1] != layer.channels:
        raise ShapeError(f"Q-metric ReLU over {layer.channels} channels cannot take input {Z.shape}")
    hz = _broadcast(layer, layer.params['h']) * Z
    shift = _broadcast(layer, layer.params['b'])
    U = np.zeros_like(Z)
    differences, preactivations = [], []
    for _ in range(layer.T):
        D = U - Z
        A = hz + _mix(layer, D) - shift
        U = relu(A)
        differences.append(D)
        preactivations.append(A)
    check_finite(U, 'Q-metric ReLU output')
    return U, QReluTape(Z=Z, differences=differences, preactivations=preactivations)


def qrelu_backward(layer, tape, upstream):
    """Gradients of the unrolled map through every recurrent step.

    Returns:
        (grad_Z, grad_Wtilde, grad_h, grad_b); the ReLU derivative at 0 is 0.
    """
    if tape is None or len(tape.preactivations) != layer.T:
        raise ShapeError("tape does not come from a forward pass of this layer")
    if upstream.shape != tape.Z.shape:
        raise ShapeError(f"upstream shape {upstream.shape} != output shape {tape.Z.shape}")
    h = _broadcast(layer, layer.params['h'])
    grad_z = np.zeros_like(tape.Z)
    grad_w = np.zeros_like(layer.params['Wtilde'])
    grad_h = np.zeros_like(layer.params['h'])
    grad_b = np.zeros_like(layer.params['b'])
    grad_u = upstream
    for D, A in zip(reversed(tape.differences), reversed(tape.preactivations)):
        grad_a = grad_u * (A > 0)
        grad_h += _reduce(layer, grad_a * tape.Z)
        grad_b -= _reduce(layer, grad_a)
        grad_d, step_w = _mix_grads(layer, grad_a, D)
        grad_w += step_w
        grad_z += h * grad_a - grad_d
        grad_u = grad_d
    return grad_z, grad_w, grad_h, grad_b
