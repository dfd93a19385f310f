from ..prox.qmetric import DEFAULT_UNROLL
from .spec import LayerSpec, NetworkSpec

CLASSES = None  # width of the last convolution is the class count

# (filters, kernel, stride, dropout after the activation)
PLAINNET_LAYOUTS = {
    3: [(96, 3, 1, 0.0), (96, 3, 2, 0.0), (CLASSES, 3, 2, 0.0)],
    6: [(96, 3, 1, 0.0), (96, 3, 1, 0.0), (96, 3, 2, 0.5),
        (192, 3, 1, 0.0), (192, 3, 1, 0.0), (CLASSES, 3, 2, 0.0)],
    9: [(96, 3, 1, 0.0), (96, 3, 1, 0.0), (96, 3, 2, 0.5),
        (192, 3, 1, 0.0), (192, 3, 1, 0.0), (192, 3, 2, 0.5),
        (192, 3, 1, 0.0), (192, 1, 1, 0.0), (CLASSES, 1, 1, 0.0)],
    12: [(96, 3, 1, 0.0), (96, 3, 1, 0.0), (96, 3, 2, 0.5), (192, 3, 1, 0.0),
         (192, 3, 1, 0.0), (192, 3, 2, 0.5), (192, 3, 1, 0.0),
         (192, 3, 2, 0.0), (192, 3, 1, 0.0), (192, 1, 1, 0.0), (CLASSES, 1, 1, 0.0)],
}
INPUT_DROPOUT = 0.2
RESNET_WIDTHS = (16, 32, 64)
RESNET_STRIDES = (1, 2, 2)
RESNET_STEM = 16


def _plainnet(depth, classes, activation, T):
    if depth not in PLAINNET_LAYOUTS:
        raise ValueError(f"unsupported PlainNet depth {depth}; choose from {sorted(PLAINNET_LAYOUTS)}")
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    layers = [LayerSpec('dropout', dropout=INPUT_DROPOUT)]
    for filters, kernel, stride, dropout in PLAINNET_LAYOUTS[depth]:
        filters = classes if filters is CLASSES else filters
        layers.append(LayerSpec('conv', filters=filters, kernel=kernel, stride=stride))
        if activation == 'qrelu':
            # same filter size and channel count as the convolution it follows
            layers.append(LayerSpec('qrelu', filters=filters, kernel=kernel, T=T))
        else:
            layers.append(LayerSpec('relu'))
        if dropout:
            layers.append(LayerSpec('dropout', dropout=dropout))
    layers.append(LayerSpec('gap'))
    layers.append(LayerSpec('classifier'))
    return layers


def build_plainnet(depth, classes=10):
    layers = _plainnet(depth, classes, 'relu', 0)
    return NetworkSpec(name=f"plainnet-{depth}", classes=classes, layers=tuple(layers)).validate()


def build_detrame_plainnet(depth, classes=10, T=DEFAULT_UNROLL):
    """PlainNet with every ReLU replaced by a Q-metric ReLU."""
    layers = _plainnet(depth, classes, 'qrelu', T)
    return NetworkSpec(name=f"detrame-plainnet-{depth}", classes=classes, layers=tuple(layers)).validate()


def build_resnet(n, width=1, classes=10, detrame=False, T=DEFAULT_UNROLL):
    """ResNet with ``6n + 2`` weight layers; stage widths ``(16, 32, 64) * width``.

    ``n=1, width=1`` is ResNet-8; ``n=2, width=4`` gives WideResNet-16-4 widths.
    With ``detrame`` the activation inside each block becomes a 3x3 Q-metric ReLU.
    """
    if n < 1 or width < 1:
        raise ValueError(f"ResNet needs n >= 1 and width >= 1, got n={n}, width={width}")
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    activation = 'qrelu' if detrame else 'relu'
    layers = [LayerSpec('conv', filters=RESNET_STEM, kernel=3), LayerSpec('relu')]
    for base, stride in zip(RESNET_WIDTHS, RESNET_STRIDES):
        for block in range(n):
            layers.append(LayerSpec('residual-block', filters=base * width, kernel=3,
                                    stride=stride if block == 0 else 1,
                                    T=T if detrame else 0, activation=activation))
    layers.append(LayerSpec('gap'))
    layers.append(LayerSpec('classifier', filters=classes))
    prefix = 'detrame-' if detrame else ''
    name = f"{prefix}resnet-{6 * n + 2}" if width == 1 else f"{prefix}wideresnet-{6 * n + 4}-{width}"
    return NetworkSpec(name=name, classes=classes, layers=tuple(layers)).validate()


def build_network_spec(arch, depth, classes, detrame=False, T=DEFAULT_UNROLL, width=1):
    """Spec named by a training config (``arch`` is plainnet or resnet; depth is n for resnet)."""
    if arch == 'plainnet':
        return build_detrame_plainnet(depth, classes, T) if detrame else build_plainnet(depth, classes)
    if arch == 'resnet':
        return build_resnet(depth, width, classes, detrame, T)
    raise ValueError(f"unknown architecture {arch!r}")
