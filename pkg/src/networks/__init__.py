from .spec import (
    LAYER_KINDS,
    LayerSpec,
    NetworkSpec,
    infer_shapes,
    count_parameters,
    structural_diff,
    spec_to_json,
    spec_from_json,
)
from .builders import build_plainnet, build_detrame_plainnet, build_resnet, build_network_spec
from .model import Network, ParamRef

__all__ = [
    'LAYER_KINDS',
    'LayerSpec',
    'NetworkSpec',
    'infer_shapes',
    'count_parameters',
    'structural_diff',
    'spec_to_json',
    'spec_from_json',
    'build_plainnet',
    'build_detrame_plainnet',
    'build_resnet',
    'build_network_spec',
    'Network',
    'ParamRef',
]
