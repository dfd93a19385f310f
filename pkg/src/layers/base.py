import numpy as np

# parameter roles drive weight decay, initialization and projections
WEIGHT = 'weight'
BIAS = 'bias'
WTILDE = 'wtilde'
GAIN = 'h'
THRESHOLD = 'b'


class Layer:
    """Forward/backward unit holding its parameters and last gradients.

    ``forward`` keeps whatever ``backward`` needs on the instance, so a layer
    serves one batch at a time.
    """

    kind = 'layer'

    def __init__(self):
        self.params = {}
        self.roles = {}
        self.grads = {}

    def add_param(self, name, value, role):
        self.params[name] = value
        self.roles[name] = role
        self.grads[name] = np.zeros_like(value)

    def forward(self, x, training=False, rng=None):
        raise NotImplementedError

    def backward(self, grad):
        raise NotImplementedError

    def output_shape(self, input_shape):
        return input_shape

    def project(self):
        """Restore parameter constraints after an update."""
