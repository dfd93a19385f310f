from .base import Layer, WEIGHT, BIAS, WTILDE, GAIN, THRESHOLD
from .transform import TransformLayer, transform_forward
from .qrelu import QReluLayer, QReluTape, qrelu_forward, qrelu_backward
from .activations import (
    ReluLayer,
    DropoutLayer,
    GlobalAvgPoolLayer,
    dropout_forward,
    dropout_backward,
    global_avg_pool,
    global_avg_pool_backward,
    softmax_xent,
)
from .residual import ResidualBlock

__all__ = [
    'Layer',
    'WEIGHT',
    'BIAS',
    'WTILDE',
    'GAIN',
    'THRESHOLD',
    'TransformLayer',
    'transform_forward',
    'QReluLayer',
    'QReluTape',
    'qrelu_forward',
    'qrelu_backward',
    'ReluLayer',
    'DropoutLayer',
    'GlobalAvgPoolLayer',
    'dropout_forward',
    'dropout_backward',
    'global_avg_pool',
    'global_avg_pool_backward',
    'softmax_xent',
    'ResidualBlock',
]
