"""Seeded, platform-independent pseudo-random numbers.

The generator is xorshift128+ (shift triple 23/18/5) run on ``LANES``
independent lanes at once so that draws stay vectorized. Lane states are
seeded from the 64-bit seed through splitmix64. A draw of ``n`` values takes
the next ``n`` words of the interleaved stream (step-major, lane-minor), so
the sequence depends only on the seed and on the order of calls.

Uniforms use the top 53 bits of each word; normals use Box-Muller on pairs
of uniforms.
"""
import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
LANES = 256
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_U64 = np.uint64


def splitmix64(state):
    """One splitmix64 step on a Python int; returns (new_state, output)."""
    state = (state + _SPLITMIX_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Rng:
    """xorshift128+ generator with explicit, serializable state."""

    def __init__(self, seed):
        self.seed = int(seed) & MASK64
        state = self.seed
        words = []
        for _ in range(2 * LANES):
            state, word = splitmix64(state)
            words.append(word)
        self._s0 = np.array(words[0::2], dtype=_U64)
        self._s1 = np.array(words[1::2], dtype=_U64)
        if not np.any(self._s0 | self._s1):
            self._s1[0] = _U64(1)
        self._pending = np.empty(0, dtype=_U64)

    def _advance(self):
        s1 = self._s0
        s0 = self._s1
        result = s0 + s1
        self._s0 = s0
        s1 = s1 ^ (s1 << _U64(23))
        self._s1 = s1 ^ s0 ^ (s1 >> _U64(18)) ^ (s0 >> _U64(5))
        return result

    def next_words(self, count):
        """Next ``count`` raw 64-bit words of the stream."""
        count = int(count)
        chunks = [self._pending]
        available = self._pending.size
        while available < count:
            chunk = self._advance()
            chunks.append(chunk)
            available += chunk.size
        stream = np.concatenate(chunks)
        self._pending = stream[count:].copy()
        return stream[:count]

    def random(self, shape):
        """Uniform samples in [0, 1)."""
        shape = _as_shape(shape)
        count = int(np.prod(shape, dtype=np.int64))
        words = self.next_words(count)
        return ((words >> _U64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)).reshape(shape)

    def get_state(self):
        return {
            'seed': self.seed,
            's0': self._s0.copy(),
            's1': self._s1.copy(),
            'pending': self._pending.copy(),
        }

    def set_state(self, state):
        self.seed = int(state['seed'])
        self._s0 = np.asarray(state['s0'], dtype=_U64).copy()
        self._s1 = np.asarray(state['s1'], dtype=_U64).copy()
        self._pending = np.asarray(state['pending'], dtype=_U64).copy()

    def spawn(self, stream):
        """Independent generator for a named sub-stream (e.g. an epoch index)."""
        _, mixed = splitmix64(self.seed ^ ((int(stream) * _SPLITMIX_GAMMA) & MASK64))
        return Rng(mixed)


def rng_uniform(rng, shape, lo=0.0, hi=1.0):
    """Uniform draws in [lo, hi)."""
    if lo > hi:
        raise ValueError(f"rng_uniform needs lo <= hi, got lo={lo}, hi={hi}")
    return lo + (hi - lo) * rng.random(_as_shape(shape))


def rng_normal(rng, shape, mean=0.0, std=1.0):
    """Gaussian draws by Box-Muller over pairs of uniforms; an odd count drops the last sine."""
    if std < 0:
        raise ValueError(f"rng_normal needs std >= 0, got {std}")
    shape = _as_shape(shape)
    count = int(np.prod(shape, dtype=np.int64))
    pairs = (count + 1) // 2
    u = rng.random((2, pairs))
    radius = np.sqrt(-2.0 * np.log1p(-u[0]))
    angle = 2.0 * np.pi * u[1]
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return mean + std * z[:count].reshape(shape)


def rng_integers(rng, shape, lo, hi):
    """Integers in [lo, hi)."""
    return lo + np.floor(rng.random(_as_shape(shape)) * (hi - lo)).astype(np.int64)


def rng_permutation(rng, n):
    """Permutation of range(n) by sorting uniform keys."""
    return np.argsort(rng.random((n,)), kind='stable')


def _as_shape(shape):
    if isinstance(shape, (int, np.integer)):
        return (int(shape),)
    return tuple(int(s) for s in shape)
