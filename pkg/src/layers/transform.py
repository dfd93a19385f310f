"""Affine transform layers ``z -> W z - c`` in dense and convolutional form."""
import numpy as np

from ..core.tensor import check_finite, conv2d, conv2d_grads, conv_output_size
from ..utils.errors import ShapeError
from .base import BIAS, WEIGHT, Layer


class TransformLayer(Layer):
    kind = 'transform'

    def __init__(self, weight, bias, stride=1, padding=0):
        super().__init__()
        weight = np.asarray(weight)
        bias = np.asarray(bias, dtype=weight.dtype)
        if weight.ndim not in (2, 4):
            raise ShapeError(f"weights must be a matrix or a kernel stack, got {weight.shape}")
        if bias.shape != (weight.shape[0],):
            raise ShapeError(f"bias shape {bias.shape} does not match {weight.shape[0]} outputs")
        self.conv = weight.ndim == 4
        self.stride = stride
        self.padding = padding
        self.add_param('W', weight, WEIGHT)
        self.add_param('c', bias, BIAS)
        self._input = None

    @classmethod
    def dense(cls, inputs, outputs, dtype=np.float64):
        return cls(np.zeros((outputs, inputs), dtype=dtype), np.zeros(outputs, dtype=dtype))

    @classmethod
    def convolution(cls, in_channels, out_channels, kernel, stride=1, padding=None, dtype=np.float64):
        padding = kernel // 2 if padding is None else padding
        return cls(np.zeros((out_channels, in_channels, kernel, kernel), dtype=dtype),
                   np.zeros(out_channels, dtype=dtype), stride=stride, padding=padding)

    @property
    def fan_in(self):
        return int(np.prod(self.params['W'].shape[1:]))

    def output_shape(self, input_shape):
        W = self.params['W']
        if not self.conv:
            if input_shape != (W.shape[1],):
                raise ShapeError(f"dense layer expects ({W.shape[1]},) features, got {input_shape}")
            return (W.shape[0],)
        if len(input_shape) != 3 or input_shape[0] != W.shape[1]:
            raise ShapeError(f"conv layer expects {W.shape[1]} input channels, got {input_shape}")
        _, h, w = input_shape
        kh, kw = W.shape[2:]
        oh = conv_output_size(h, kh, self.stride, self.padding)
        ow = conv_output_size(w, kw, self.stride, self.padding)
        if oh < 1 or ow < 1:
            raise ShapeError(f"kernel {kh}x{kw} does not fit a {h}x{w} map")
        return (W.shape[0], oh, ow)

    def forward(self, x, training=False, rng=None):
        self._input = x
        return transform_forward(self, x)

    def backward(self, grad):
        W = self.params['W']
        x = self._input
        if self.conv:
            grad_input, grad_w = conv2d_grads(grad, x, W, self.stride, self.padding)
            self.grads['c'] = -grad.sum(axis=(0, 2, 3))
        else:
            grad_input = grad @ W
            grad_w = grad.T @ x
            self.grads['c'] = -grad.sum(axis=0)
        self.grads['W'] = grad_w
        return grad_input


def transform_forward(layer, x):
    """``W x - c``; in conv form a convolution followed by a per-channel shift."""
    W = layer.params['W']
    c = layer.params['c']
    if layer.conv:
        out = conv2d(x, W, layer.stride, layer.padding) - c[None, :, None, None]
    else:
        if x.ndim != 2 or x.shape[1] != W.shape[1]:
            raise ShapeError(f"dense transform expects (N, {W.shape[1]}), got {x.shape}")
        out = x @ W.T - c
    return check_finite(out, 'transform output')
