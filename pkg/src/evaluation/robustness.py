"""Fooling rate under additive Gaussian noise.

For an image ``x`` of dimension ``dim`` the noise ``v`` has i.i.d. entries
with standard deviation ``sqrt(rho) * ||x|| / sqrt(dim)``, so that
``E ||v||^2 = rho * ||x||^2`` holds image by image. Noise is added in pixel
space, before normalization.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from tqdm import tqdm

from ..core.rng import Rng, rng_normal
from .metrics import EVAL_BATCH

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseSweepResult:
    rhos: List[float]
    fooling_rates: List[float]
    seeds: List[int]

    def to_dict(self):
        return {'rho': list(self.rhos), 'fooling_rate': list(self.fooling_rates), 'seeds': list(self.seeds)}


def draw_noise(images, rho, rng):
    """Per-image Gaussian noise with expected energy ``rho`` times the image energy."""
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    n = images.shape[0]
    dim = int(np.prod(images.shape[1:]))
    norms = np.linalg.norm(images.reshape(n, dim), axis=1)
    scale = np.sqrt(rho) * norms / np.sqrt(dim)
    return rng_normal(rng, images.shape) * scale.reshape((n,) + (1,) * (images.ndim - 1))


def fooling_rate(clean_predictions, noisy_predictions):
    """Fraction of inputs whose predicted label changed."""
    clean_predictions = np.asarray(clean_predictions)
    if clean_predictions.size == 0:
        return 0.0
    return float(np.mean(clean_predictions != np.asarray(noisy_predictions)))


def noise_sweep(net, data, rhos, seeds=(0,), batch_size=EVAL_BATCH, progress=True):
    """Fooling rate per ``rho``, averaged over one noise draw per seed."""
    clean = net.predict(data.normalize(data.images), batch_size=batch_size)
    rates = []
    for rho in tqdm(rhos, desc='noise sweep', disable=not progress):
        if rho == 0:
            rates.append(0.0)
            continue
        per_seed = []
        for seed in seeds:
            noise = draw_noise(data.images, rho, Rng(seed))
            noisy = net.predict(data.normalize(data.images + noise), batch_size=batch_size)
            per_seed.append(fooling_rate(clean, noisy))
        rates.append(float(np.mean(per_seed)))
        logger.info("rho=%g fooling rate %.4f", rho, rates[-1])
    return NoiseSweepResult(rhos=[float(r) for r in rhos], fooling_rates=rates, seeds=[int(s) for s in seeds])
