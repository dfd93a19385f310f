import json

import numpy as np
import pytest

from src.core.rng import Rng, rng_normal, rng_uniform
from src.data.cifar import Dataset
from src.evaluation.robustness import NoiseSweepResult, draw_noise, fooling_rate, noise_sweep
from src.utils.output import save_noise_sweep


class LinearScorer:
    """Argmax of a fixed random linear map; stands in for a trained classifier."""

    def __init__(self, classes, dim, seed=0):
        self.weights = rng_normal(Rng(seed), (classes, dim))

    def predict(self, images, batch_size=256):
        return np.argmax(images.reshape(len(images), -1) @ self.weights.T, axis=1)


@pytest.fixture
def images():
    return rng_uniform(Rng(3), (1000, 3, 32, 32))


def test_noise_energy_matches_rho(images):
    rho = 0.05
    noise = draw_noise(images, rho, Rng(4))
    ratio = (noise ** 2).sum(axis=(1, 2, 3)) / (images ** 2).sum(axis=(1, 2, 3))
    assert abs(ratio.mean() - rho) <= 0.01 * rho


def test_zero_rho_draws_nothing(images):
    assert not np.any(draw_noise(images[:5], 0.0, Rng(0)))
    with pytest.raises(ValueError):
        draw_noise(images[:5], -1.0, Rng(0))


def test_fooling_rate_counts_changes():
    assert fooling_rate([1, 2, 3, 4], [1, 0, 3, 0]) == 0.5
    assert fooling_rate([], []) == 0.0


def test_sweep_endpoints(images):
    labels = np.arange(200) % 10
    data = Dataset(images[:200], labels, 'test')
    scorer = LinearScorer(10, 3 * 32 * 32)
    result = noise_sweep(scorer, data, [0.0, 1e-8, 100.0], seeds=(0, 1), progress=False)
    assert result.fooling_rates[0] == 0.0
    assert result.fooling_rates[1] <= 0.05
    assert result.fooling_rates[2] >= 0.5
    assert result.seeds == [0, 1]


def test_sweep_is_reproducible(images):
    data = Dataset(images[:100], np.arange(100) % 10, 'test')
    scorer = LinearScorer(10, 3 * 32 * 32)
    first = noise_sweep(scorer, data, [0.5], seeds=(2,), progress=False)
    second = noise_sweep(scorer, data, [0.5], seeds=(2,), progress=False)
    assert first == second


def test_saved_sweep_keys(tmp_path):
    result = NoiseSweepResult(rhos=[0.0, 0.1], fooling_rates=[0.0, 0.25], seeds=[0, 1, 2])
    path = save_noise_sweep(result, str(tmp_path / 'sweep.json'))
    with open(path) as f:
        payload = json.load(f)
    assert payload == {'rho': [0.0, 0.1], 'fooling_rate': [0.0, 0.25], 'seeds': [0, 1, 2]}
