import numpy as np

from ..core.rng import rng_integers

PAD = 4


def crop_and_flip(images, offsets, flips, pad=PAD):
    """Reflect-pad by ``pad``, crop at per-image ``offsets`` (row, col) and mirror where ``flips``."""
    n, _, h, w = images.shape
    padded = np.pad(images, ((0, 0), (0, 0), (pad, pad), (pad, pad)), mode='reflect')
    out = np.empty_like(images)
    for i in range(n):
        r, c = offsets[i]
        crop = padded[i, :, r:r + h, c:c + w]
        out[i] = crop[:, :, ::-1] if flips[i] else crop
    return out


def augment(images, rng, enabled=True, pad=PAD):
    """Random crop after padding plus horizontal flips with probability 0.5."""
    if not enabled:
        return images
    n = images.shape[0]
    offsets = rng_integers(rng, (n, 2), 0, 2 * pad + 1)
    flips = rng.random((n,)) < 0.5
    return crop_and_flip(images, offsets, flips, pad)
