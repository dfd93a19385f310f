from .cifar import (
    Dataset,
    load_cifar10,
    read_cifar10_file,
    parse_cifar10_bytes,
    serialize_cifar10,
    channel_stats,
)
from .synthetic import make_synthetic, make_synthetic_splits, class_templates
from .augment import augment, crop_and_flip


def load_dataset(config):
    """Train and test splits named by a training config's ``dataset`` key."""
    if config.dataset == 'synthetic':
        return make_synthetic_splits(config.classes, config.n_train, config.n_test,
                                     config.seed, config.separation)
    train, test = load_cifar10(config.dataset.split(':', 1)[1])
    # stats stay those of the full training split
    return train.subset(config.n_train), test.subset(config.n_test)


__all__ = [
    'Dataset',
    'load_cifar10',
    'read_cifar10_file',
    'parse_cifar10_bytes',
    'serialize_cifar10',
    'channel_stats',
    'make_synthetic',
    'make_synthetic_splits',
    'class_templates',
    'augment',
    'crop_and_flip',
    'load_dataset',
]
