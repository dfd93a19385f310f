"""Proximity operator of the nonnegative elastic net under a metric ``Q``.

For a columnwise matrix ``Z`` (k x N) the prox is the minimizer over
``U >= 0`` of

    0.5 * tr((U - Z)^T Q (U - Z)) + (beta / 2) * ||U||_F^2 + lam * ||U||_1.

Three solvers live here: the recurrent update

    U_{t+1} = ReLU(h * Z + Wtilde (U_t - Z) - b),   U_0 = 0,

its preconditioned forward-backward generalization, and a projected
gradient oracle that shares no code with either.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..utils.errors import ConstraintError, ShapeError, StepsizeError
from .solvers import DEFAULT_MAX_ITER, DEFAULT_TOL, projected_gradient

logger = logging.getLogger(__name__)

DEFAULT_UNROLL = 3
VERIFY_TOL = 1e-8
POWER_ITERATIONS = 200
POWER_TOL = 1e-10
DAMPING = 0.9


@dataclass(frozen=True)
class QMetricParams:
    """Learned recurrence weights: zero-diagonal ``Wtilde``, ``h`` in [0, 1], ``b >= 0``."""
    Wtilde: np.ndarray
    h: np.ndarray
    b: np.ndarray
    T: int = DEFAULT_UNROLL

    def __post_init__(self):
        k = self.Wtilde.shape[0]
        if self.Wtilde.shape != (k, k) or self.h.shape != (k,) or self.b.shape != (k,):
            raise ShapeError(
                f"inconsistent shapes Wtilde {self.Wtilde.shape}, h {self.h.shape}, b {self.b.shape}")
        if self.T < 1:
            raise ValueError(f"unroll count must be positive, got {self.T}")
        if np.any(np.diag(self.Wtilde) != 0):
            raise ConstraintError("Wtilde must have an exactly zero diagonal")
        if np.any(self.h < 0) or np.any(self.h > 1):
            raise ConstraintError("h must lie in [0, 1]")
        if np.any(self.b < 0):
            raise ConstraintError("b must be nonnegative")


@dataclass(frozen=True)
class PrecondParams:
    """Diagonal preconditioner ``Theta`` (stored as its diagonal) and stepsize."""
    theta: np.ndarray
    gamma: float

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64).reshape(-1)
        object.__setattr__(self, 'theta', theta)
        if np.any(theta <= 0) or self.gamma <= 0:
            raise StepsizeError("Theta must be positive definite and gamma positive")

    @classmethod
    def jacobi(cls, Q, gamma=1.0):
        return cls(theta=np.diag(Q).copy(), gamma=gamma)


class RecurrenceWeights(NamedTuple):
    Wtilde: np.ndarray
    h: np.ndarray
    b: np.ndarray


class ProxResult(NamedTuple):
    U: np.ndarray
    iterations: int
    converged: bool


def _check_metric(Q):
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ShapeError(f"Q must be square, got {Q.shape}")
    if np.any(np.diag(Q) <= 0):
        raise ConstraintError("Q must have a positive diagonal")
    return Q


def build_reparams(Q, lam, beta=0.0, T=DEFAULT_UNROLL):
    """Recurrence weights equivalent to the prox under ``Q``.

    ``Wtilde[i, l] = -q_il / (q_ii + beta)`` off the diagonal, ``h_i = q_ii / (q_ii + beta)``
    and ``b_i = lam / (q_ii + beta)``.
    """
    Q = _check_metric(Q)
    denom = np.diag(Q) + beta
    Wtilde = -Q / denom[:, None]
    np.fill_diagonal(Wtilde, 0.0)
    return QMetricParams(Wtilde=Wtilde, h=np.diag(Q) / denom, b=lam / denom, T=T)


def spectral_norm(A, iterations=POWER_ITERATIONS, tol=POWER_TOL):
    """Largest singular value of ``A`` by power iteration on ``A^T A``."""
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[1]
    v = 1.0 + np.arange(n) / max(n, 1)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iterations):
        w = A.T @ (A @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        updated = np.sqrt(norm)
        if abs(updated - estimate) <= tol * max(updated, 1.0):
            return float(updated)
        estimate = updated
    return float(estimate)


def stepsize_bound(Q, theta):
    """``2 / ||Theta^{-1/2} Q Theta^{-1/2}||``, the forward-backward stepsize limit."""
    scale = 1.0 / np.sqrt(np.asarray(theta, dtype=np.float64))
    return 2.0 / spectral_norm(scale[:, None] * Q * scale[None, :])


def fb_reparams(Q, lam, beta, pp):
    """Recurrence weights of the preconditioned forward-backward step."""
    Q = _check_metric(Q)
    theta, gamma = pp.theta, pp.gamma
    denom = theta + gamma * beta
    Wtilde = (np.diag(theta) - gamma * Q) / denom[:, None]
    return RecurrenceWeights(Wtilde=Wtilde, h=theta / denom, b=gamma * lam / denom)


def _unroll(Z, Wtilde, h, b, T, tol):
    hz = h[:, None] * Z
    shift = b[:, None]
    U = np.zeros_like(Z)
    for t in range(1, T + 1):
        U_next = np.maximum(hz + Wtilde @ (U - Z) - shift, 0.0)
        change = np.max(np.abs(U_next - U)) if U.size else 0.0
        U = U_next
        if tol is not None and change <= tol:
            return ProxResult(U, t, True)
    return ProxResult(U, T, tol is None)


def _as_columns(Z, k):
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim == 1:
        Z = Z[:, None]
    if Z.shape[0] != k:
        raise ShapeError(f"Z has {Z.shape[0]} rows, metric has size {k}")
    return Z


def qprox_iterate(Z, params, tol=VERIFY_TOL):
    """Run the recurrent update from ``U_0 = 0`` for at most ``params.T`` steps.

    Stops early once successive iterates differ by at most ``tol`` in max
    norm; ``tol=None`` runs the full unroll. The result carries a flag
    telling whether the tolerance was met.
    """
    Z = _as_columns(Z, params.h.shape[0])
    result = _unroll(Z, params.Wtilde, params.h, params.b, params.T, tol)
    if not result.converged:
        logger.debug("recurrent prox stopped at T=%d before tol=%g", params.T, tol)
    return result


def fb_precond_iterate(Z, Q, lam, beta, pp, T, tol=VERIFY_TOL):
    """Preconditioned forward-backward iterations, rewritten as the recurrence.

    Raises:
        StepsizeError: if ``pp.gamma`` is not below the convergence bound.
    """
    Q = _check_metric(Q)
    bound = stepsize_bound(Q, pp.theta)
    if pp.gamma >= bound:
        raise StepsizeError(f"gamma={pp.gamma:g} violates the bound {bound:g}")
    Z = _as_columns(Z, Q.shape[0])
    weights = fb_reparams(Q, lam, beta, pp)
    return _unroll(Z, weights.Wtilde, weights.h, weights.b, T, tol)


def qprox_solve(Q, Z, lam, beta=0.0, T=500, tol=VERIFY_TOL):
    """Prox under ``Q`` through the recurrence, damped when needed.

    The undamped recurrence is a forward-backward step with ``Theta = diag(Q)``
    and ``gamma = 1``. When that stepsize is not admissible for ``Q`` the step
    is scaled down to ``DAMPING`` times the bound and a warning is logged.
    """
    Q = _check_metric(Q)
    pp = PrecondParams.jacobi(Q)
    bound = stepsize_bound(Q, pp.theta)
    if bound > 1.0:
        return qprox_iterate(Z, build_reparams(Q, lam, beta, T), tol=tol)
    gamma = DAMPING * bound
    logger.warning("unit stepsize exceeds the bound %.4g for this metric; damping to gamma=%.4g", bound, gamma)
    return fb_precond_iterate(Z, Q, lam, beta, PrecondParams(pp.theta, gamma), T, tol)


def qprox_oracle(Q, Z, lam, alpha_unused=None, beta=0.0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Reference prox by projected gradient, independent of the recurrence."""
    Q = _check_metric(Q)
    Z = _as_columns(Z, Q.shape[0])
    metric = Q + beta * np.eye(Q.shape[0])
    QZ = Q @ Z

    def smooth(U):
        grad = metric @ U - QZ
        return 0.0, grad

    U, _ = projected_gradient(smooth, lam, np.zeros_like(Z), tol=tol, max_iter=max_iter, name='qprox_oracle')
    return U


def prox_objective(U, Q, Z, lam, beta=0.0):
    """Objective minimized by the metric prox; ``inf`` outside the nonnegative orthant."""
    U = np.asarray(U, dtype=np.float64)
    if np.any(U < 0):
        return np.inf
    D = U - Z
    return float(0.5 * np.sum(D * (Q @ D)) + 0.5 * beta * np.sum(U * U) + lam * np.sum(U))


def q_norm(X, Q):
    """Q-weighted Frobenius norm ``sqrt(tr(X^T Q X))``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    return float(np.sqrt(max(np.sum(X * (Q @ X)), 0.0)))


def fixed_point_residual(U, Q, Z, lam, beta=0.0):
    """Largest violation of the per-entry fixed-point conditions.

    With ``v_ij = (lam + sum_{l != i} q_il (u_lj - z_lj)) / (q_ii + beta)`` every
    entry of the prox equals ``ReLU(q_ii / (q_ii + beta) * z_ij - v_ij)``.
    """
    Q = _check_metric(Q)
    U = _as_columns(U, Q.shape[0])
    Z = _as_columns(Z, Q.shape[0])
    if np.any(U < 0):
        raise ConstraintError("fixed-point residual needs a nonnegative U")
    diag = np.diag(Q)
    off = Q - np.diag(diag)
    denom = (diag + beta)[:, None]
    V = (lam + off @ (U - Z)) / denom
    target = np.maximum(diag[:, None] * Z / denom - V, 0.0)
    return float(np.max(np.abs(U - target))) if U.size else 0.0
