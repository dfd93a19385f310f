"""Central finite-difference checks of analytic gradients."""
import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..core.rng import rng_normal, rng_permutation
from ..layers.activations import softmax_xent

logger = logging.getLogger(__name__)

EPS = 1e-6
LAYER_TOL = 1e-4
NETWORK_TOL = 1e-3


@dataclass
class GradReport:
    name: str
    errors: Dict[str, float] = field(default_factory=dict)

    @property
    def max_error(self):
        return max(self.errors.values()) if self.errors else 0.0

    def passed(self, tol):
        return self.max_error <= tol


def relative_error(analytic, numeric):
    analytic = np.ravel(analytic)
    numeric = np.ravel(numeric)
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / scale)


def numeric_grad(loss, x, eps=EPS, entries=None):
    """Central differences of ``loss()`` with respect to ``x``, perturbed in place.

    Only the flat ``entries`` are sampled when given; the rest of the result is zero.
    """
    grad = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    grad_flat = grad.reshape(-1)
    indices = range(flat.size) if entries is None else entries
    for i in indices:
        saved = flat[i]
        flat[i] = saved + eps
        plus = loss()
        flat[i] = saved - eps
        minus = loss()
        flat[i] = saved
        grad_flat[i] = (plus - minus) / (2 * eps)
    return grad


def _sample_entries(rng, size, max_entries):
    if max_entries is None or size <= max_entries:
        return np.arange(size)
    return np.sort(rng_permutation(rng, size)[:max_entries])


def check_layer(layer, x, rng, eps=EPS, name=None):
    """Compare ``layer.backward`` with finite differences of ``sum(r * layer.forward(x))``."""
    x = np.array(x, dtype=np.float64)
    weights = rng_normal(rng, layer.forward(x).shape)

    def loss():
        return float(np.sum(weights * layer.forward(x)))

    units = layer.children() if hasattr(layer, 'children') else [('', layer)]
    layer.forward(x)
    grad_input = layer.backward(weights)
    analytic = {(prefix, key): np.array(value) for prefix, unit in units for key, value in unit.grads.items()}
    report = GradReport(name or type(layer).__name__)
    report.errors['input'] = relative_error(grad_input, numeric_grad(loss, x, eps))
    for prefix, unit in units:
        for key, param in unit.params.items():
            label = f"{prefix}.{key}" if prefix else key
            report.errors[label] = relative_error(analytic[prefix, key], numeric_grad(loss, param, eps))
    logger.debug("%s gradient errors: %s", report.name, report.errors)
    return report


def check_network(net, x, labels, rng, eps=EPS, max_entries=24):
    """Finite-difference check of a whole network under softmax cross-entropy.

    At most ``max_entries`` entries of each tensor are sampled.
    """
    x = np.array(x, dtype=np.float64)

    def loss():
        return softmax_xent(net.forward(x), labels)[0]

    _, grad = softmax_xent(net.forward(x), labels)
    grad_input = net.backward(grad)
    refs = net.parameters()
    analytic = {ref.key: np.array(ref.grad) for ref in refs}
    report = GradReport(net.spec.name)
    entries = _sample_entries(rng, x.size, max_entries)
    numeric = numeric_grad(loss, x, eps, entries)
    report.errors['input'] = relative_error(grad_input.reshape(-1)[entries], numeric.reshape(-1)[entries])
    for ref in refs:
        entries = _sample_entries(rng, ref.value.size, max_entries)
        numeric = numeric_grad(loss, ref.value, eps, entries)
        report.errors[ref.key] = relative_error(analytic[ref.key].reshape(-1)[entries],
                                                numeric.reshape(-1)[entries])
    logger.debug("%s gradient errors: %s", report.name, report.errors)
    return report
