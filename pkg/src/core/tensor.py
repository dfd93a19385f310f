"""Dense tensor arithmetic shared by every other subpackage.

Tensors are plain ``numpy.ndarray`` values laid out batch x channel x height
x width. Convolutions follow the cross-correlation convention (the kernel is
not flipped), as in mainstream deep-learning libraries.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..utils.errors import NonFiniteError, ShapeError

Tensor = np.ndarray


def check_finite(x, name='tensor'):
    """Raise NonFiniteError if ``x`` holds a NaN or an Inf."""
    if not np.all(np.isfinite(x)):
        bad = int(np.size(x) - np.count_nonzero(np.isfinite(x)))
        raise NonFiniteError(f"{name} has {bad} non-finite entries (shape {np.shape(x)})")
    return x


def matmul(a, b):
    """Matrix product of two 2-D arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul expects matrices, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    return check_finite(a @ b, 'matmul output')


def conv_output_size(size, kernel, stride, padding):
    """Spatial output length of a convolution along one axis."""
    return (size + 2 * padding - kernel) // stride + 1


def _validate_conv(x, kernels, stride, padding, groups):
    if x.ndim != 4 or kernels.ndim != 4:
        raise ShapeError(f"conv2d expects rank-4 input and kernels, got {x.shape} and {kernels.shape}")
    if stride < 1 or padding < 0 or groups < 1:
        raise ShapeError(f"invalid stride={stride}, padding={padding}, groups={groups}")
    n, cin, h, w = x.shape
    cout, cin_g, kh, kw = kernels.shape
    if cin % groups or cout % groups:
        raise ShapeError(f"channels ({cin} in, {cout} out) not divisible by groups={groups}")
    if cin_g * groups != cin:
        raise ShapeError(f"kernels expect {cin_g * groups} input channels, input has {cin}")
    if kh > h + 2 * padding or kw > w + 2 * padding:
        raise ShapeError(f"kernel {kh}x{kw} larger than padded input {h + 2 * padding}x{w + 2 * padding}")


def _columns(x, kh, kw, stride, padding, groups):
    """im2col matrix of shape (groups, N * H' * W', Cin_g * kh * kw), plus (H', W')."""
    if padding:
        x = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
    n, cin, oh, ow = windows.shape[:4]
    cin_g = cin // groups
    windows = windows.reshape(n, groups, cin_g, oh, ow, kh, kw).transpose(1, 0, 3, 4, 2, 5, 6)
    return windows.reshape(groups, n * oh * ow, cin_g * kh * kw), (oh, ow)


def _kernel_matrix(kernels, groups):
    """Kernels as (groups, Cout_g, Cin_g * kh * kw)."""
    cout = kernels.shape[0]
    return kernels.reshape(groups, cout // groups, -1)


def conv2d(x, kernels, stride=1, padding=0, groups=1):
    """2-D cross-correlation.

    Args:
        x: input of shape (N, Cin, H, W)
        kernels: (Cout, Cin // groups, kh, kw)
        stride: positive step between output positions
        padding: zeros added on every spatial side
        groups: number of disjoint channel blocks

    Returns:
        Tensor of shape (N, Cout, H', W') with
        H' = floor((H + 2 * padding - kh) / stride) + 1.
    """
    x = np.asarray(x)
    kernels = np.asarray(kernels)
    _validate_conv(x, kernels, stride, padding, groups)
    n = x.shape[0]
    cout, _, kh, kw = kernels.shape
    cols, (oh, ow) = _columns(x, kh, kw, stride, padding, groups)
    out = cols @ _kernel_matrix(kernels, groups).transpose(0, 2, 1)
    out = out.reshape(groups, n, oh, ow, cout // groups).transpose(1, 0, 4, 2, 3)
    return check_finite(np.ascontiguousarray(out.reshape(n, cout, oh, ow)), 'conv2d output')


def conv2d_grads(upstream, x, kernels, stride=1, padding=0, groups=1):
    """Gradients of ``sum(upstream * conv2d(x, kernels))``.

    Returns:
        (grad_input, grad_kernels) shaped like ``x`` and ``kernels``.
    """
    x = np.asarray(x)
    kernels = np.asarray(kernels)
    upstream = np.asarray(upstream)
    _validate_conv(x, kernels, stride, padding, groups)
    n, cin, h, w = x.shape
    cout, cin_g, kh, kw = kernels.shape
    oh = conv_output_size(h, kh, stride, padding)
    ow = conv_output_size(w, kw, stride, padding)
    if upstream.shape != (n, cout, oh, ow):
        raise ShapeError(f"upstream shape {upstream.shape} != conv2d output {(n, cout, oh, ow)}")

    cols, _ = _columns(x, kh, kw, stride, padding, groups)
    up = upstream.reshape(n, groups, cout // groups, oh, ow).transpose(1, 0, 3, 4, 2)
    up = up.reshape(groups, n * oh * ow, cout // groups)

    grad_kernels = (up.transpose(0, 2, 1) @ cols).reshape(kernels.shape)

    dcols = up @ _kernel_matrix(kernels, groups)
    # (kh, kw, N, Cin, H', W') so every tap is one contiguous slab
    dcols = dcols.reshape(groups, n, oh, ow, cin_g, kh, kw).transpose(5, 6, 1, 0, 4, 2, 3)
    dcols = np.ascontiguousarray(dcols).reshape(kh, kw, n, cin, oh, ow)
    padded = np.zeros((n, cin, h + 2 * padding, w + 2 * padding), dtype=dcols.dtype)
    # fixed accumulation order keeps this bit-reproducible
    for i in range(kh):
        for j in range(kw):
            padded[:, :, i:i + stride * oh:stride, j:j + stride * ow:stride] += dcols[i, j]
    grad_input = padded[:, :, padding:padding + h, padding:padding + w]
    return (check_finite(np.ascontiguousarray(grad_input), 'conv2d input gradient'),
            check_finite(grad_kernels, 'conv2d kernel gradient'))


def relu(x):
    """Elementwise ``max(x, 0)``."""
    return np.maximum(x, 0)
