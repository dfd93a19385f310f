import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Tuple

from dotenv import dotenv_values

from ..prox.qmetric import DEFAULT_UNROLL
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

SCHEDULE_PRESETS = {
    # multiplied by 0.2 at each listed epoch
    'cifar': ((60, 0.2), (120, 0.2), (160, 0.2), (200, 0.2)),
    # divided by 10 at each listed epoch
    'svhn': ((80, 0.1), (120, 0.1)),
}
PRESETS = {
    'cifar': {'lr0': 0.1, 'schedule': SCHEDULE_PRESETS['cifar'], 'epochs': 200},
    'svhn': {'lr0': 0.01, 'schedule': SCHEDULE_PRESETS['svhn'], 'epochs': 160},
}


@dataclass(frozen=True)
class TrainConfig:
    arch: str = 'plainnet'
    depth: int = 3
    width: int = 1
    detrame: bool = True
    T: int = DEFAULT_UNROLL
    classes: int = 10
    lr0: float = 0.1
    schedule: Tuple[Tuple[int, float], ...] = field(default=SCHEDULE_PRESETS['cifar'])
    momentum: float = 0.9
    weight_decay: float = 5e-4
    batch: int = 128
    epochs: int = 200
    seed: int = 0
    dataset: str = 'synthetic'
    augment: bool = True
    precision: str = 'float64'
    deterministic: bool = True
    n_train: int = 2000
    n_test: int = 500
    separation: float = 1.0
    output_dir: str = 'runs'

    @classmethod
    def preset(cls, name, **overrides):
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return replace(cls(**PRESETS[name]), **overrides)


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_schedule(text):
    """``cifar``/``svhn`` preset names or ``epoch:multiplier`` pairs separated by commas."""
    text = text.strip()
    if text in SCHEDULE_PRESETS:
        return SCHEDULE_PRESETS[text]
    if not text:
        return ()
    points = []
    for item in text.split(','):
        epoch, multiplier = item.split(':')
        points.append((int(epoch), float(multiplier)))
    return tuple(sorted(points))


_PARSERS = {
    int: int,
    float: float,
    bool: _parse_bool,
    str: str.strip,
}


def load_config(config_path):
    """Read a ``key = value`` training config into a TrainConfig."""
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"config file not found: {config_path}")
    values = dotenv_values(config_path)
    if not values:
        logger.warning("config %s is empty; using defaults", config_path)
    known = {f.name: f for f in fields(TrainConfig)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"Unknown config keys in {config_path}: {', '.join(unknown)}")

    parsed = {}
    problems = []
    for key, raw in values.items():
        if raw is None:
            problems.append(f"{key} has no value")
            continue
        try:
            if key == 'schedule':
                parsed[key] = parse_schedule(raw)
            else:
                parsed[key] = _PARSERS[type(getattr(TrainConfig, key))](raw)
        except (ValueError, TypeError) as e:
            problems.append(f"{key}={raw!r}: {e}")
    if problems:
        raise ConfigError(f"Invalid config values: {'; '.join(problems)}")

    config = TrainConfig(**parsed)
    validate_config(config)
    return config


def validate_config(config):
    """Raise ConfigError naming every invalid field."""
    problems = []
    if config.arch not in ('plainnet', 'resnet'):
        problems.append(f"arch must be plainnet or resnet, got {config.arch!r}")
    if config.lr0 <= 0:
        problems.append(f"lr0 must be positive, got {config.lr0}")
    if not 0 <= config.momentum < 1:
        problems.append(f"momentum must be in [0, 1), got {config.momentum}")
    if config.weight_decay < 0:
        problems.append(f"weight_decay must be nonnegative, got {config.weight_decay}")
    for key in ('batch', 'epochs', 'T', 'width', 'depth', 'n_train', 'n_test'):
        if getattr(config, key) < 1:
            problems.append(f"{key} must be at least 1, got {getattr(config, key)}")
    if config.classes < 2:
        problems.append(f"classes must be at least 2, got {config.classes}")
    if config.precision not in ('float64', 'float32'):
        problems.append(f"precision must be float64 or float32, got {config.precision!r}")
    if config.dataset != 'synthetic' and not config.dataset.startswith('cifar10:'):
        problems.append(f"dataset must be 'synthetic' or 'cifar10:<dir>', got {config.dataset!r}")
    if config.dataset.startswith('cifar10:') and config.classes != 10:
        problems.append(f"cifar10 data has 10 classes, got classes={config.classes}")
    if any(epoch < 0 or multiplier <= 0 for epoch, multiplier in config.schedule):
        problems.append("schedule epochs must be >= 0 and multipliers positive")
    if problems:
        raise ConfigError(f"Invalid training config: {'; '.join(problems)}")
    return config
