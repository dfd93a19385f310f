from .optimizer import SGD, OptimizerState, lr_at, DECAYED_ROLES
from .checkpoint import Checkpoint, checkpoint_save, checkpoint_load
from .trainer import (
    EpochMetrics,
    FitResult,
    init_params,
    project_constraints,
    check_constraints,
    train_epoch,
    fit,
)

__all__ = [
    'SGD',
    'OptimizerState',
    'lr_at',
    'DECAYED_ROLES',
    'Checkpoint',
    'checkpoint_save',
    'checkpoint_load',
    'EpochMetrics',
    'FitResult',
    'init_params',
    'project_constraints',
    'check_constraints',
    'train_epoch',
    'fit',
]
