import logging

import numpy as np

from ..utils.errors import ConvergenceError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


def projected_gradient(smooth, lam, u0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, step=1.0, name='solver'):
    """Minimize ``smooth(u) + lam * sum(u)`` over ``u >= 0``.

    ``smooth`` returns ``(value, gradient)``. The l1 term restricted to the
    nonnegative orthant is linear, so its proximal step is an exact shifted
    ReLU. The stepsize is backtracked until the local curvature along the step
    is below ``1 / step``; it never increases.

    Stops when the largest entry change of a step is at most ``tol``.

    Returns:
        (u, iterations)

    Raises:
        ConvergenceError: when ``max_iter`` steps do not reach ``tol``.
    """
    u = np.maximum(np.asarray(u0, dtype=np.float64), 0.0)
    _, grad = smooth(u)
    for iteration in range(1, max_iter + 1):
        while True:
            candidate = np.maximum(u - step * (grad + lam), 0.0)
            delta = candidate - u
            _, candidate_grad = smooth(candidate)
            moved = float(np.vdot(delta, delta))
            if moved == 0.0 or float(np.vdot(candidate_grad - grad, delta)) <= moved / step:
                break
            step *= 0.5
        u, grad = candidate, candidate_grad
        if moved == 0.0 or np.max(np.abs(delta)) <= tol:
            logger.debug("%s converged after %d iterations (step %.3g)", name, iteration, step)
            return u, iteration
    raise ConvergenceError(f"{name} did not reach tol={tol:g} within {max_iter} iterations")
