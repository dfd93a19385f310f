import numpy as np
import pytest

from src.core.rng import Rng
from src.data.synthetic import make_synthetic
from src.evaluation.metrics import accuracy, evaluate
from src.networks.model import Network
from src.training.trainer import init_params
from src.verification.suites import small_detrame_spec


def test_accuracy_counts_matches():
    assert accuracy([0, 1, 2, 2], [0, 1, 1, 2]) == 0.75
    assert accuracy([], []) == 0.0
    with pytest.raises(ValueError):
        accuracy([0, 1], [0])


def test_evaluate_agrees_with_predict_in_any_batching():
    net = Network(small_detrame_spec(3))
    init_params(net, Rng(0))
    data = make_synthetic(3, 30, seed=1, image_shape=(3, 6, 6))
    whole = evaluate(net, data, batch_size=64)
    pieces = evaluate(net, data, batch_size=7)
    assert whole == pieces
    assert whole.samples == 30
    expected = np.mean(net.predict(data.normalize(data.images)) == data.labels)
    assert whole.accuracy == pytest.approx(expected)
