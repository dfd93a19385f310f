from .tensor import Tensor, check_finite, matmul, conv2d, conv2d_grads, conv_output_size, relu
from .rng import Rng, rng_normal, rng_uniform, rng_integers, rng_permutation

__all__ = [
    'Tensor',
    'check_finite',
    'matmul',
    'conv2d',
    'conv2d_grads',
    'conv_output_size',
    'relu',
    'Rng',
    'rng_normal',
    'rng_uniform',
    'rng_integers',
    'rng_permutation',
]
