"""Synthesis-dictionary view of a layer and its transform/metric form.

A layer with dictionary ``D`` maps ``x`` to the unique minimizer of

    0.5 * ||x - D a||^2 + lam * ||a||_1 + (beta / 2) * ||a||^2
        + (alpha / 2) * ||a||^2 + d^T a        subject to a >= 0.

The same code is ``prox^Q_{lam psi}(F x - c)`` with ``Q = D^T D + alpha I``,
``F = Q^{-1} D^T`` and ``c = Q^{-1} d``.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..utils.errors import ShapeError
from .solvers import DEFAULT_MAX_ITER, DEFAULT_TOL, projected_gradient

logger = logging.getLogger(__name__)

ALPHA_FLOOR = 1e-9
REGULARIZATION = 1e-10


@dataclass(frozen=True)
class DictionaryFactor:
    D: np.ndarray
    alpha: float
    lam: float
    beta: float = 0.0
    d: np.ndarray = field(default=None)

    def __post_init__(self):
        D = np.atleast_2d(np.asarray(self.D, dtype=np.float64))
        object.__setattr__(self, 'D', D)
        k = D.shape[1]
        d = np.zeros(k) if self.d is None else np.asarray(self.d, dtype=np.float64).reshape(-1)
        if d.shape != (k,):
            raise ShapeError(f"shift d has length {d.size}, dictionary has {k} atoms")
        object.__setattr__(self, 'd', d)
        if self.alpha <= 0:
            logger.warning("alpha=%g is not positive; using %g so Q stays definite", self.alpha, ALPHA_FLOOR)
            object.__setattr__(self, 'alpha', ALPHA_FLOOR)
        if self.lam < 0 or self.beta < 0:
            raise ValueError(f"lam and beta must be nonnegative, got lam={self.lam}, beta={self.beta}")

    @property
    def atoms(self):
        return self.D.shape[1]

    def metric(self):
        return self.D.T @ self.D + self.alpha * np.eye(self.atoms)


@dataclass(frozen=True)
class TransformTriple:
    Q: np.ndarray
    F: np.ndarray
    c: np.ndarray


def spd_solve(Q, rhs):
    """Solve ``Q X = rhs`` through a Cholesky factorization of ``Q``."""
    try:
        factor = cho_factor(Q, lower=True, check_finite=True)
    except LinAlgError:
        scale = max(float(np.max(np.abs(np.diag(Q)))), 1.0)
        logger.warning("Cholesky of Q failed; retrying with %g * I added", REGULARIZATION * scale)
        regularized = Q + REGULARIZATION * scale * np.eye(Q.shape[0])
        factor = cho_factor(regularized, lower=True, check_finite=True)
    return cho_solve(factor, rhs)


def sdl_to_transform(factor):
    """Transform triple ``(Q, F, c)`` of a dictionary factor."""
    Q = factor.metric()
    F = spd_solve(Q, factor.D.T)
    c = spd_solve(Q, factor.d)
    return TransformTriple(Q=Q, F=F, c=c)


def md_objective(factor, x, a):
    """Layer objective at ``a``; ``inf`` outside the nonnegative orthant."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(a < 0):
        return np.inf
    residual = np.asarray(x, dtype=np.float64) - factor.D @ a
    return float(
        0.5 * residual @ residual
        + factor.lam * np.sum(a)
        + 0.5 * (factor.alpha + factor.beta) * a @ a
        + factor.d @ a
    )


def md_direct(factor, x, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Sparse code of ``x`` computed straight from the synthesis objective.

    This is the slow reference: projected gradient on the smooth part with
    the l1 + nonnegativity term handled by its exact prox.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    D = factor.D
    if x.shape[0] != D.shape[0]:
        raise ShapeError(f"x has length {x.shape[0]}, dictionary rows are {D.shape[0]}")
    gram = factor.metric() + factor.beta * np.eye(factor.atoms)
    linear = factor.d - D.T @ x

    def smooth(a):
        ga = gram @ a
        return 0.5 * a @ ga + linear @ a, ga + linear

    a, _ = projected_gradient(smooth, factor.lam, np.zeros(factor.atoms), tol=tol,
                              max_iter=max_iter, name='md_direct')
    return a


@dataclass(frozen=True)
class EquivalenceReport:
    direct: np.ndarray
    via_prox: np.ndarray
    max_abs_diff: float
    tol: float

    @property
    def passed(self):
        return self.max_abs_diff <= self.tol


def equivalence_check(factor, x, tol=1e-6):
    """Compare ``md_direct`` with the metric prox of the affine transform."""
    from .qmetric import qprox_oracle

    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    triple = sdl_to_transform(factor)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    direct = md_direct(factor, x)
    z = (triple.F @ x - triple.c).reshape(-1, 1)
    via_prox = qprox_oracle(triple.Q, z, factor.lam, beta=factor.beta)[:, 0]
    diff = float(np.max(np.abs(direct - via_prox))) if direct.size else 0.0
    return EquivalenceReport(direct=direct, via_prox=via_prox, max_abs_diff=diff, tol=tol)


def stack_transforms(factors, reshapers, classifier):
    """Affine maps ``(W, c)`` and metrics ``Q`` of a stacked dictionary network.

    Args:
        factors: one DictionaryFactor per layer
        reshapers: matrices P(r) applied after layer r, or None for identity
        classifier: final matrix C

    Returns:
        list of (W, c, Q) for layers 1..s, then (W, c, None) for the classifier.
    """
    if reshapers is None:
        reshapers = [None] * len(factors)
    if len(reshapers) != len(factors):
        raise ShapeError(f"{len(factors)} layers need as many reshapers, got {len(reshapers)}")
    stages = []
    previous = None
    for factor, reshaper in zip(factors, reshapers):
        triple = sdl_to_transform(factor)
        W = triple.F if previous is None else triple.F @ previous
        stages.append((W, triple.c, triple.Q))
        previous = np.eye(factor.atoms) if reshaper is None else np.asarray(reshaper, dtype=np.float64)
    C = np.asarray(classifier, dtype=np.float64)
    stages.append((C @ previous, np.zeros(C.shape[0]), None))
    return stages


def ddl_forward_direct(factors, reshapers, classifier, x):
    """Scores ``C x(s)`` with every sparse code computed by ``md_direct``."""
    if reshapers is None:
        reshapers = [None] * len(factors)
    z = np.asarray(x, dtype=np.float64).reshape(-1)
    for factor, reshaper in zip(factors, reshapers):
        z = md_direct(factor, z)
        if reshaper is not None:
            z = np.asarray(reshaper) @ z
    return np.asarray(classifier) @ z


def ddl_forward_transformed(factors, reshapers, classifier, x):
    """Scores of the same network as alternating affine maps and metric proxes."""
    from .qmetric import qprox_oracle

    stages = stack_transforms(factors, reshapers, classifier)
    u = np.asarray(x, dtype=np.float64).reshape(-1)
    for (W, c, Q), factor in zip(stages[:-1], factors):
        z = (W @ u - c).reshape(-1, 1)
        u = qprox_oracle(Q, z, factor.lam, beta=factor.beta)[:, 0]
    W, c, _ = stages[-1]
    return W @ u - c
