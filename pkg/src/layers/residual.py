import numpy as np

from ..prox.qmetric import DEFAULT_UNROLL
from ..utils.errors import ShapeError
from .activations import ReluLayer
from .base import Layer
from .qrelu import QReluLayer
from .transform import TransformLayer


class ResidualBlock(Layer):
    """Basic block ``relu(conv2(act(conv1(x))) + shortcut(x))`` without normalization.

    ``act`` is a ReLU, or a Q-metric ReLU with 3x3 kernels in the DeTraMe
    variant. The shortcut is the identity unless the stride or width changes,
    in which case a 1x1 strided projection is used.
    """

    kind = 'residual-block'

    def __init__(self, in_channels, out_channels, stride=1, detrame=False, T=DEFAULT_UNROLL,
                 kernel=3, qrelu_kernel=3, groups=1, dtype=np.float64):
        super().__init__()
        self.conv1 = TransformLayer.convolution(in_channels, out_channels, kernel, stride, dtype=dtype)
        if detrame:
            self.act = QReluLayer.convolution(out_channels, qrelu_kernel, T=T, groups=groups, dtype=dtype)
        else:
            self.act = ReluLayer()
        self.conv2 = TransformLayer.convolution(out_channels, out_channels, kernel, 1, dtype=dtype)
        self.shortcut = None
        if stride != 1 or in_channels != out_channels:
            self.shortcut = TransformLayer.convolution(in_channels, out_channels, 1, stride, padding=0, dtype=dtype)
        self.out = ReluLayer()

    def children(self):
        named = [('conv1', self.conv1), ('act', self.act), ('conv2', self.conv2)]
        if self.shortcut is not None:
            named.append(('shortcut', self.shortcut))
        return named

    def output_shape(self, input_shape):
        shape = self.conv1.output_shape(input_shape)
        shape = self.conv2.output_shape(self.act.output_shape(shape))
        skip = self.shortcut.output_shape(input_shape) if self.shortcut is not None else input_shape
        if skip != shape:
            raise ShapeError(f"residual branch {shape} and shortcut {skip} differ")
        return shape

    def project(self):
        self.act.project()

    def forward(self, x, training=False, rng=None):
        branch = self.conv2.forward(self.act.forward(self.conv1.forward(x)))
        skip = self.shortcut.forward(x) if self.shortcut is not None else x
        return self.out.forward(branch + skip)

    def backward(self, grad):
        grad = self.out.backward(grad)
        grad_x = self.conv1.backward(self.act.backward(self.conv2.backward(grad)))
        if self.shortcut is not None:
            return grad_x + self.shortcut.backward(grad)
        return grad_x + grad
