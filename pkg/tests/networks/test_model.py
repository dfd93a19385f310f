import numpy as np
import pytest

from src.core.rng import Rng, rng_normal
from src.networks.builders import build_detrame_plainnet, build_resnet
from src.networks.model import Network
from src.networks.spec import count_parameters
from src.training.trainer import init_params
from src.utils.errors import ShapeError
from src.verification.gradcheck import NETWORK_TOL, check_network
from src.verification.suites import small_detrame_spec


@pytest.mark.parametrize('spec', [build_detrame_plainnet(3, 4, T=2), build_resnet(1, classes=4, detrame=True, T=2)])
def test_parameter_count_matches_spec(spec):
    assert Network(spec).parameter_count() == count_parameters(spec)


def test_forward_backward_shapes():
    net = Network(build_detrame_plainnet(3, 2, T=2))
    init_params(net, Rng(0))
    x = rng_normal(Rng(1), (2, 3, 32, 32))
    logits = net.forward(x)
    assert logits.shape == (2, 2)
    assert net.backward(np.ones_like(logits)).shape == x.shape


def test_rejects_wrong_input_shape():
    with pytest.raises(ShapeError):
        Network(build_detrame_plainnet(3, 2)).forward(np.zeros((1, 3, 16, 16)))


def test_parameter_keys_are_unique_and_stable():
    first = [ref.key for ref in Network(build_resnet(1, detrame=True)).parameters()]
    second = [ref.key for ref in Network(build_resnet(1, detrame=True)).parameters()]
    assert first == second
    assert len(set(first)) == len(first)


def test_qrelu_layers_are_found_inside_blocks():
    assert len(Network(build_resnet(1, detrame=True)).qrelu_layers()) == 3


def test_predict_returns_labels():
    net = Network(small_detrame_spec(3))
    init_params(net, Rng(2))
    labels = net.predict(rng_normal(Rng(3), (5, 3, 6, 6)), batch_size=2)
    assert labels.shape == (5,)
    assert labels.min() >= 0 and labels.max() < 3


def test_three_layer_stack_gradients():
    rng = Rng(4)
    net = Network(small_detrame_spec(3))
    init_params(net, rng)
    for layer in net.qrelu_layers():
        layer.params['Wtilde'][...] = rng_normal(rng, layer.params['Wtilde'].shape, 0.0, 0.1)
        layer.project()
    report = check_network(net, rng_normal(rng, (2, 3, 6, 6)), np.array([0, 2]), rng)
    assert report.passed(NETWORK_TOL), report.errors
