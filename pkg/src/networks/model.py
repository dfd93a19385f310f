from typing import NamedTuple

import numpy as np

from ..core.tensor import check_finite
from ..layers import (
    DropoutLayer,
    GlobalAvgPoolLayer,
    QReluLayer,
    ReluLayer,
    ResidualBlock,
    TransformLayer,
)
from ..utils.errors import ShapeError


class ParamRef(NamedTuple):
    key: str
    layer: object
    name: str
    role: str

    @property
    def value(self):
        return self.layer.params[self.name]

    @property
    def grad(self):
        return self.layer.grads[self.name]


def _build_layer(layer_spec, shape, dtype):
    kind = layer_spec.kind
    if kind == 'conv':
        return TransformLayer.convolution(shape[0], layer_spec.filters, layer_spec.kernel,
                                          layer_spec.stride, dtype=dtype)
    if kind == 'affine' or (kind == 'classifier' and layer_spec.filters):
        return TransformLayer.dense(shape[0], layer_spec.filters, dtype=dtype)
    if kind == 'qrelu':
        if len(shape) == 3:
            return QReluLayer.convolution(shape[0], layer_spec.kernel, T=layer_spec.T,
                                          groups=layer_spec.groups, dtype=dtype)
        return QReluLayer.dense(shape[0], T=layer_spec.T, dtype=dtype)
    if kind == 'relu':
        return ReluLayer()
    if kind == 'dropout':
        return DropoutLayer(layer_spec.dropout)
    if kind == 'gap':
        return GlobalAvgPoolLayer()
    if kind == 'residual-block':
        return ResidualBlock(shape[0], layer_spec.filters, layer_spec.stride,
                             detrame=layer_spec.activation == 'qrelu', T=max(layer_spec.T, 1),
                             kernel=layer_spec.kernel, groups=layer_spec.groups, dtype=dtype)
    if kind == 'classifier':
        return None
    raise ShapeError(f"cannot build layer kind {kind!r}")


class Network:
    """Runtime network built from a validated ``NetworkSpec``.

    Parameters start at zero; ``training.init_params`` draws their initial values.
    """

    def __init__(self, spec, dtype=np.float64):
        spec.validate()
        self.spec = spec
        self.dtype = np.dtype(dtype)
        self.layers = []
        shape = tuple(spec.input_shape)
        for index, layer_spec in enumerate(spec.layers):
            layer = _build_layer(layer_spec, shape, self.dtype)
            if layer is not None:
                shape = layer.output_shape(shape)
                self.layers.append((f"{index:02d}.{layer_spec.kind}", layer))

    def parameters(self):
        """Parameters in spec order, each with a stable key and a role."""
        refs = []
        for prefix, layer in self.layers:
            units = [(prefix, layer)]
            if isinstance(layer, ResidualBlock):
                units = [(f"{prefix}.{name}", child) for name, child in layer.children()]
            for unit_prefix, unit in units:
                for name, role in unit.roles.items():
                    refs.append(ParamRef(f"{unit_prefix}.{name}", unit, name, role))
        return refs

    def qrelu_layers(self):
        found = []
        for _, layer in self.layers:
            if isinstance(layer, QReluLayer):
                found.append(layer)
            elif isinstance(layer, ResidualBlock) and isinstance(layer.act, QReluLayer):
                found.append(layer.act)
        return found

    def parameter_count(self):
        return int(sum(ref.value.size for ref in self.parameters()))

    def forward(self, x, training=False, rng=None):
        x = np.asarray(x, dtype=self.dtype)
        if x.shape[1:] != tuple(self.spec.input_shape):
            raise ShapeError(f"{self.spec.name} expects inputs {self.spec.input_shape}, got {x.shape[1:]}")
        for _, layer in self.layers:
            x = layer.forward(x, training=training, rng=rng)
        return check_finite(x, f"{self.spec.name} logits")

    def backward(self, grad):
        for _, layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def project(self):
        for _, layer in self.layers:
            layer.project()

    def predict(self, images, batch_size=256):
        labels = []
        for start in range(0, len(images), batch_size):
            logits = self.forward(images[start:start + batch_size], training=False)
            labels.append(np.argmax(logits, axis=1))
        return np.concatenate(labels) if labels else np.empty(0, dtype=np.int64)
