"""Declarative network descriptions and their JSON form.

A spec is an ordered tuple of ``LayerSpec`` records. Keys of the JSON form
are ``kind``, ``filters``, ``kernel``, ``stride``, ``dropout``, ``T``,
``groups`` and ``activation``; fields a kind does not use keep their
defaults.
"""
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Tuple

from ..core.tensor import conv_output_size
from ..utils.errors import ShapeError

LAYER_KINDS = ('conv', 'affine', 'qrelu', 'relu', 'dropout', 'gap', 'residual-block', 'classifier')
TRANSFORM_KINDS = ('conv', 'affine')
SPEC_FORMAT = 1


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    filters: int = 0
    kernel: int = 0
    stride: int = 1
    dropout: float = 0.0
    T: int = 0
    groups: int = 1
    activation: str = ''


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    classes: int
    layers: Tuple[LayerSpec, ...]
    input_shape: Tuple[int, ...] = field(default=(3, 32, 32))

    def validate(self):
        """Check kinds, activation placement and shape composition."""
        for index, layer in enumerate(self.layers):
            if layer.kind not in LAYER_KINDS:
                raise ValueError(f"layer {index}: unknown kind {layer.kind!r}")
            if layer.kind == 'qrelu':
                if index == 0 or self.layers[index - 1].kind not in TRANSFORM_KINDS:
                    raise ValueError(f"layer {index}: a qrelu must directly follow a conv or affine layer")
                if layer.T < 1:
                    raise ValueError(f"layer {index}: qrelu needs an unroll count T >= 1")
        infer_shapes(self)
        return self

    def digest(self):
        return hashlib.sha256(spec_to_json(self).encode('utf-8')).digest()

    def with_unroll(self, T):
        layers = tuple(
            replace(layer, T=T) if layer.kind == 'qrelu' or layer.activation == 'qrelu' else layer
            for layer in self.layers
        )
        return replace(self, layers=layers)


def _layer_shape(layer, shape, index):
    kind = layer.kind
    if kind == 'conv' or kind == 'residual-block':
        if len(shape) != 3:
            raise ShapeError(f"layer {index} ({kind}) needs a C x H x W input, got {shape}")
        _, h, w = shape
        pad = layer.kernel // 2
        oh = conv_output_size(h, layer.kernel, layer.stride, pad)
        ow = conv_output_size(w, layer.kernel, layer.stride, pad)
        if layer.kernel < 1 or oh < 1 or ow < 1:
            raise ShapeError(f"layer {index} ({kind}): kernel {layer.kernel} does not fit {h}x{w}")
        return (layer.filters, oh, ow)
    if kind == 'qrelu':
        channels = shape[0]
        if len(shape) == 3 and layer.kernel % 2 == 0:
            raise ShapeError(f"layer {index}: qrelu kernel must be odd, got {layer.kernel}")
        if channels % layer.groups:
            raise ShapeError(f"layer {index}: {channels} channels not divisible by {layer.groups} groups")
        return shape
    if kind == 'gap':
        if len(shape) != 3:
            raise ShapeError(f"layer {index}: global average pooling needs C x H x W, got {shape}")
        return (shape[0],)
    if kind == 'affine' or (kind == 'classifier' and layer.filters):
        if len(shape) != 1:
            raise ShapeError(f"layer {index} ({kind}) needs a flat input, got {shape}")
        return (layer.filters,)
    return shape


def infer_shapes(spec):
    """Per-layer output shapes (batch axis excluded); raises ShapeError on mismatch."""
    shape = tuple(spec.input_shape)
    shapes = []
    for index, layer in enumerate(spec.layers):
        shape = _layer_shape(layer, shape, index)
        shapes.append(shape)
    if shape != (spec.classes,):
        raise ShapeError(f"{spec.name} ends with shape {shape}, expected ({spec.classes},) logits")
    return shapes


def _conv_params(cin, cout, kernel):
    return cout * cin * kernel * kernel + cout


def _qrelu_params(channels, kernel, groups, conv):
    if not conv:
        return channels * channels + 2 * channels
    return channels * (channels // groups) * kernel * kernel + 2 * channels


def count_parameters(spec):
    """Number of stored scalars, pinned-zero Q-metric taps included."""
    shape = tuple(spec.input_shape)
    total = 0
    for index, layer in enumerate(spec.layers):
        out = _layer_shape(layer, shape, index)
        if layer.kind == 'conv':
            total += _conv_params(shape[0], layer.filters, layer.kernel)
        elif layer.kind in ('affine', 'classifier') and layer.filters:
            total += shape[0] * layer.filters + layer.filters
        elif layer.kind == 'qrelu':
            total += _qrelu_params(shape[0], layer.kernel, layer.groups, len(shape) == 3)
        elif layer.kind == 'residual-block':
            total += _conv_params(shape[0], layer.filters, layer.kernel)
            total += _conv_params(layer.filters, layer.filters, layer.kernel)
            if layer.activation == 'qrelu':
                total += _qrelu_params(layer.filters, 3, layer.groups, True)
            if layer.stride != 1 or shape[0] != layer.filters:
                total += _conv_params(shape[0], layer.filters, 1)
        shape = out
    return total


def structural_diff(a, b):
    """Positions where two specs differ, as ``(index, layer_a, layer_b)``."""
    if len(a.layers) != len(b.layers):
        raise ValueError(f"specs have {len(a.layers)} and {len(b.layers)} layers")
    return [(i, la, lb) for i, (la, lb) in enumerate(zip(a.layers, b.layers)) if la != lb]


def spec_to_json(spec):
    payload = {
        'format': SPEC_FORMAT,
        'name': spec.name,
        'classes': spec.classes,
        'input_shape': list(spec.input_shape),
        'layers': [asdict(layer) for layer in spec.layers],
    }
    return json.dumps(payload, sort_keys=True, separators=(',', ':'))


def spec_from_json(text):
    payload = json.loads(text)
    if payload.get('format') != SPEC_FORMAT:
        raise ValueError(f"unsupported spec format {payload.get('format')!r}")
    known = {f.name for f in fields(LayerSpec)}
    layers = []
    for entry in payload['layers']:
        unknown = set(entry) - known
        if unknown:
            raise ValueError(f"unknown layer keys: {sorted(unknown)}")
        layers.append(LayerSpec(**entry))
    spec = NetworkSpec(name=payload['name'], classes=int(payload['classes']),
                       layers=tuple(layers), input_shape=tuple(payload['input_shape']))
    return spec.validate()
