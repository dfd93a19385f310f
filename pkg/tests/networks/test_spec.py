import pytest

from src.networks.builders import build_detrame_plainnet, build_network_spec, build_plainnet, build_resnet
from src.networks.spec import (
    LayerSpec,
    NetworkSpec,
    count_parameters,
    infer_shapes,
    spec_from_json,
    spec_to_json,
    structural_diff,
)
from src.utils.errors import ShapeError


def test_plainnet9_parameter_count():
    assert abs(count_parameters(build_plainnet(9, 10)) - 1.4e6) <= 0.05 * 1.4e6


def test_detrame9_parameter_count():
    assert abs(count_parameters(build_detrame_plainnet(9, 10)) - 3.0e6) <= 0.05 * 3.0e6


@pytest.mark.parametrize('depth', [3, 6, 9, 12])
def test_plainnets_end_in_class_logits(depth):
    for spec in (build_plainnet(depth, 10), build_detrame_plainnet(depth, 10)):
        assert infer_shapes(spec)[-1] == (10,)


def test_detrame_differs_only_at_activations():
    plain = build_plainnet(3, 10)
    detrame = build_detrame_plainnet(3, 10)
    diffs = structural_diff(plain, detrame)
    assert len(diffs) == 3
    for _, a, b in diffs:
        assert a.kind == 'relu' and b.kind == 'qrelu'


def test_structural_diff_needs_equal_lengths():
    with pytest.raises(ValueError):
        structural_diff(build_plainnet(3), build_plainnet(6))


def test_qrelu_must_follow_a_transform():
    layers = (LayerSpec('conv', filters=4, kernel=3), LayerSpec('relu'),
              LayerSpec('qrelu', kernel=3, T=2), LayerSpec('gap'), LayerSpec('classifier', filters=2))
    with pytest.raises(ValueError):
        NetworkSpec('bad', 2, layers).validate()


def test_shape_mismatch_is_reported():
    layers = (LayerSpec('conv', filters=4, kernel=3), LayerSpec('affine', filters=2))
    with pytest.raises(ShapeError):
        NetworkSpec('bad', 2, layers).validate()


def test_unknown_kind_is_rejected():
    with pytest.raises(ValueError):
        NetworkSpec('bad', 2, (LayerSpec('pool'),)).validate()


def test_json_round_trip_keeps_digest():
    spec = build_resnet(1, detrame=True, T=2)
    restored = spec_from_json(spec_to_json(spec))
    assert restored == spec
    assert restored.digest() == spec.digest()


def test_unknown_layer_keys_are_rejected():
    text = spec_to_json(build_plainnet(3)).replace('"activation"', '"colour"', 1)
    with pytest.raises(ValueError):
        spec_from_json(text)


def test_with_unroll_changes_only_qrelu_layers():
    spec = build_detrame_plainnet(3, 10, T=3)
    deeper = spec.with_unroll(5)
    assert all(layer.T == 5 for layer in deeper.layers if layer.kind == 'qrelu')
    assert spec.digest() != deeper.digest()


def test_resnet_names_and_shapes():
    assert build_resnet(1).name == 'resnet-8'
    wide = build_resnet(2, width=4)
    assert wide.name == 'wideresnet-16-4'
    assert infer_shapes(wide)[-2] == (256,)


def test_detrame_resnet_has_more_parameters():
    assert count_parameters(build_resnet(1, detrame=True)) > count_parameters(build_resnet(1))


def test_build_network_spec_dispatch():
    assert build_network_spec('plainnet', 3, 2, detrame=True).name == 'detrame-plainnet-3'
    assert build_network_spec('resnet', 1, 2).name == 'resnet-8'
    with pytest.raises(ValueError):
        build_network_spec('vgg', 3, 2)


def test_unsupported_depth():
    with pytest.raises(ValueError):
        build_plainnet(4)
