import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..core.tensor import check_finite
from ..layers.base import WEIGHT, WTILDE

logger = logging.getLogger(__name__)

# h, b and the shifts c are left out of weight decay
DECAYED_ROLES = (WEIGHT, WTILDE)


@dataclass
class OptimizerState:
    """Momentum buffers keyed by parameter key."""
    buffers: Dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0
    lr: float = 0.0


def lr_at(config, epoch):
    """``lr0`` times every schedule multiplier whose epoch has been reached."""
    if epoch < 0:
        raise ValueError(f"epoch must be nonnegative, got {epoch}")
    lr = config.lr0
    for point, multiplier in config.schedule:
        if epoch >= point:
            lr *= multiplier
    return lr


class SGD:
    """SGD with heavy-ball momentum and role-selective weight decay.

    Each call to ``step`` does ``v <- m v + (g + wd p)`` and ``p <- p - lr v``;
    the caller projects the constrained parameters afterwards.
    """

    def __init__(self, momentum=0.9, weight_decay=5e-4, decayed_roles=DECAYED_ROLES):
        if not 0 <= momentum < 1:
            raise ValueError(f"momentum must be in [0, 1), got {momentum}")
        if weight_decay < 0:
            raise ValueError(f"weight decay must be nonnegative, got {weight_decay}")
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.decayed_roles = tuple(decayed_roles)

    def init_state(self, refs, lr=0.0):
        """Zero velocity for every parameter."""
        return OptimizerState(buffers={ref.key: np.zeros_like(ref.value) for ref in refs}, step=0, lr=lr)

    def step(self, refs, state, lr):
        for ref in refs:
            param = ref.value
            grad = ref.grad
            if grad.shape != param.shape:
                raise ValueError(f"{ref.key}: gradient {grad.shape} does not match parameter {param.shape}")
            if self.weight_decay and ref.role in self.decayed_roles:
                grad = grad + self.weight_decay * param
            buffer = state.buffers[ref.key]
            buffer *= self.momentum
            buffer += grad
            param -= lr * buffer
            check_finite(param, ref.key)
        state.step += 1
        state.lr = lr
        return state
