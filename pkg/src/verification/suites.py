"""Self-checks run by ``main.py verify``.

Each suite draws random instances from a seeded Rng and compares two
independent computations of the same quantity. ``quick`` shrinks the
instance counts for smoke runs.
"""
import logging
import time
from dataclasses import dataclass
from typing import List

import numpy as np
from tqdm import tqdm

from ..core.rng import Rng, rng_integers, rng_normal, rng_uniform
from ..layers import QReluLayer, ResidualBlock, TransformLayer
from ..networks.model import Network
from ..networks.spec import LayerSpec, NetworkSpec
from ..prox.dictionary import DictionaryFactor, ddl_forward_direct, ddl_forward_transformed, md_objective, equivalence_check
from ..prox.qmetric import (
    PrecondParams,
    build_reparams,
    fb_precond_iterate,
    fb_reparams,
    fixed_point_residual,
    q_norm,
    qprox_iterate,
    qprox_oracle,
    stepsize_bound,
)
from ..training.trainer import init_params
from ..utils.errors import DetrameError
from .gradcheck import LAYER_TOL, NETWORK_TOL, check_layer, check_network

logger = logging.getLogger(__name__)

EQUIVALENCE_TOL = 1e-6
IDENTITY_TOL = 1e-14
NONEXPANSIVE_SLACK = 1e-10
# normalized spectral norm at most this keeps gamma = 1 admissible
UNIT_STEP_NORM = 1.6
SOLVER_TOL = 1e-12
SOLVER_STEPS = 200000


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def random_factor(rng, m=None, k=None, with_shift=False):
    """Dictionary factor with ``m <= 8`` rows, ``k <= 12`` atoms and ``alpha >= 0.1``."""
    m = int(rng_integers(rng, 1, 2, 9)[0]) if m is None else m
    k = int(rng_integers(rng, 1, 2, 13)[0]) if k is None else k
    D = rng_normal(rng, (m, k), 0.0, 1.0 / np.sqrt(m))
    alpha = float(rng_uniform(rng, 1, 0.1, 1.0)[0])
    lam = float(rng_uniform(rng, 1, 0.01, 0.5)[0])
    beta = float(rng_uniform(rng, 1, 0.0, 0.5)[0])
    d = rng_normal(rng, k, 0.0, 0.1) if with_shift else None
    return DictionaryFactor(D=D, alpha=alpha, lam=lam, beta=beta, d=d)


def unit_step_metric(rng, k):
    """``D^T D + alpha I`` with alpha doubled until the unit stepsize is admissible."""
    m = int(rng_integers(rng, 1, 2, 9)[0])
    D = rng_normal(rng, (m, k), 0.0, 1.0 / np.sqrt(m))
    alpha = 0.1
    Q = D.T @ D + alpha * np.eye(k)
    while 2.0 / stepsize_bound(Q, np.diag(Q)) > UNIT_STEP_NORM:
        alpha *= 2
        Q = D.T @ D + alpha * np.eye(k)
    return Q


def equivalence_suite(count, rng, progress=True):
    worst = 0.0
    failures = 0
    for i in tqdm(range(count), desc='layer equivalence', disable=not progress):
        factor = random_factor(rng, with_shift=i % 2 == 1)
        x = rng_normal(rng, factor.D.shape[0])
        report = equivalence_check(factor, x, tol=EQUIVALENCE_TOL)
        worst = max(worst, report.max_abs_diff)
        # no feasible nudge of the code lowers the objective
        nudged = np.maximum(report.direct + rng_normal(rng, factor.atoms, 0.0, 1e-3), 0.0)
        if not report.passed or md_objective(factor, x, nudged) < md_objective(factor, x, report.direct) - 1e-12:
            failures += 1
    return failures == 0, f"{count} instances, max |diff| {worst:.2e}"


def prox_agreement_suite(count, rng, progress=True):
    worst = 0.0
    worst_residual = 0.0
    for _ in tqdm(range(count), desc='prox agreement', disable=not progress):
        k = int(rng_integers(rng, 1, 2, 13)[0])
        Q = unit_step_metric(rng, k)
        lam = float(rng_uniform(rng, 1, 0.01, 0.5)[0])
        beta = float(rng_uniform(rng, 1, 0.0, 0.5)[0])
        Z = rng_normal(rng, (k, 3))
        recurrent = qprox_iterate(Z, build_reparams(Q, lam, beta, T=SOLVER_STEPS), tol=SOLVER_TOL).U
        pp = PrecondParams.jacobi(Q, gamma=0.5 * stepsize_bound(Q, np.diag(Q)))
        preconditioned = fb_precond_iterate(Z, Q, lam, beta, pp, SOLVER_STEPS, tol=SOLVER_TOL).U
        oracle = qprox_oracle(Q, Z, lam, beta=beta)
        worst = max(worst, np.max(np.abs(recurrent - oracle)), np.max(np.abs(preconditioned - oracle)))
        for U in (recurrent, preconditioned, oracle):
            worst_residual = max(worst_residual, fixed_point_residual(U, Q, Z, lam, beta))
    passed = worst <= EQUIVALENCE_TOL and worst_residual <= EQUIVALENCE_TOL
    return passed, f"{count} instances, max |diff| {worst:.2e}, max residual {worst_residual:.2e}"


def identity_suite(count, rng, progress=True):
    worst = 0.0
    diagonal_zero = True
    for _ in tqdm(range(count), desc='unit-step identity', disable=not progress):
        factor = random_factor(rng)
        Q = factor.metric()
        params = build_reparams(Q, factor.lam, factor.beta)
        weights = fb_reparams(Q, factor.lam, factor.beta, PrecondParams.jacobi(Q, 1.0))
        worst = max(worst,
                    np.max(np.abs(params.Wtilde - weights.Wtilde)),
                    np.max(np.abs(params.h - weights.h)),
                    np.max(np.abs(params.b - weights.b)))
        diagonal_zero &= bool(np.all(np.diag(params.Wtilde) == 0) and np.all(np.diag(weights.Wtilde) == 0))
    return worst <= IDENTITY_TOL and diagonal_zero, f"{count} instances, max |diff| {worst:.2e}"


def nonexpansive_suite(pairs, rng, progress=True):
    factor = random_factor(rng, m=6, k=8)
    Q = factor.metric()
    Z1 = rng_normal(rng, (8, pairs))
    Z2 = rng_normal(rng, (8, pairs))
    with tqdm(total=2, desc='nonexpansive', disable=not progress) as bar:
        U1 = qprox_oracle(Q, Z1, factor.lam, beta=factor.beta)
        bar.update()
        U2 = qprox_oracle(Q, Z2, factor.lam, beta=factor.beta)
        bar.update()
    worst = 0.0
    for j in range(pairs):
        ratio = q_norm(U1[:, j] - U2[:, j], Q) / max(q_norm(Z1[:, j] - Z2[:, j], Q), 1e-300)
        worst = max(worst, ratio)
    return worst <= 1.0 + NONEXPANSIVE_SLACK, f"{pairs} pairs, max ratio {worst:.12f}"


def random_qrelu(rng, channels, kernel=None, T=3, groups=1):
    """Q-metric ReLU with random weights inside the constraint sets."""
    if kernel is None:
        layer = QReluLayer.dense(channels, T=T)
    else:
        layer = QReluLayer.convolution(channels, kernel, T=T, groups=groups)
    layer.params['Wtilde'][...] = rng_uniform(rng, layer.params['Wtilde'].shape, -0.3, 0.3)
    layer.params['h'][...] = rng_uniform(rng, channels, 0.5, 1.0)
    layer.params['b'][...] = rng_uniform(rng, channels, 0.0, 0.1)
    layer.project()
    return layer


def _random_transform(layer, rng):
    for value in layer.params.values():
        value[...] = rng_normal(rng, value.shape, 0.0, 0.5)
    return layer


def small_detrame_spec(classes=3):
    layers = (
        LayerSpec('conv', filters=4, kernel=3),
        LayerSpec('qrelu', filters=4, kernel=3, T=3),
        LayerSpec('conv', filters=4, kernel=3, stride=2),
        LayerSpec('qrelu', filters=4, kernel=3, T=3),
        LayerSpec('conv', filters=classes, kernel=1),
        LayerSpec('qrelu', filters=classes, kernel=1, T=3),
        LayerSpec('gap'),
        LayerSpec('classifier'),
    )
    return NetworkSpec(name='detrame-stack-3', classes=classes, layers=layers, input_shape=(3, 6, 6)).validate()


def gradient_suite(rng, quick=False, progress=True):
    cases = [
        ('dense transform', _random_transform(TransformLayer.dense(5, 4), rng), (3, 5)),
        ('conv transform', _random_transform(TransformLayer.convolution(2, 3, 3, stride=2), rng), (2, 2, 5, 5)),
    ]
    for T in ((1, 3) if quick else (1, 3, 5)):
        cases.append((f"dense qrelu T={T}", random_qrelu(rng, 5, T=T), (4, 5)))
        cases.append((f"conv qrelu T={T}", random_qrelu(rng, 4, kernel=3, T=T), (2, 4, 4, 4)))
    cases.append(('grouped conv qrelu T=3', random_qrelu(rng, 4, kernel=3, T=3, groups=2), (2, 4, 4, 4)))
    block = ResidualBlock(2, 3, stride=2, detrame=True, T=2)
    for _, child in block.children():
        if isinstance(child, QReluLayer):
            child.params['Wtilde'][...] = rng_uniform(rng, child.params['Wtilde'].shape, -0.3, 0.3)
            child.params['h'][...] = 0.9
            child.params['b'][...] = 0.01
            child.project()
        else:
            _random_transform(child, rng)
    cases.append(('residual block', block, (2, 2, 5, 5)))

    worst_layer = 0.0
    failed = []
    for name, layer, shape in tqdm(cases, desc='layer gradients', disable=not progress):
        report = check_layer(layer, rng_normal(rng, shape), rng, name=name)
        worst_layer = max(worst_layer, report.max_error)
        if not report.passed(LAYER_TOL):
            failed.append(name)

    net = Network(small_detrame_spec())
    init_params(net, rng)
    for layer in net.qrelu_layers():
        layer.params['Wtilde'][...] = rng_uniform(rng, layer.params['Wtilde'].shape, -0.2, 0.2)
        layer.project()
    x = rng_normal(rng, (2, 3, 6, 6))
    labels = rng_integers(rng, 2, 0, 3)
    report = check_network(net, x, labels, rng)
    if not report.passed(NETWORK_TOL):
        failed.append(report.name)
    detail = f"{len(cases)} layers max rel err {worst_layer:.1e}, stack {report.max_error:.1e}"
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    return not failed, detail


def multilayer_suite(count, rng, progress=True):
    worst = 0.0
    for _ in tqdm(range(count), desc='multilayer', disable=not progress):
        first = random_factor(rng, m=6, k=8)
        second = random_factor(rng, m=5, k=7)
        reshaper = rng_normal(rng, (5, 8), 0.0, 0.5)
        classifier = rng_normal(rng, (3, 7))
        x = rng_normal(rng, 6)
        direct = ddl_forward_direct([first, second], [reshaper, None], classifier, x)
        transformed = ddl_forward_transformed([first, second], [reshaper, None], classifier, x)
        worst = max(worst, float(np.max(np.abs(direct - transformed))))
    return worst <= EQUIVALENCE_TOL, f"{count} networks, max |diff| {worst:.2e}"


def _run(name, suite):
    started = time.perf_counter()
    try:
        passed, detail = suite()
    except DetrameError as e:
        logger.error("suite %s raised %s", name, e)
        passed, detail = False, f"{type(e).__name__}: {e}"
    result = SuiteResult(name, bool(passed), detail, time.perf_counter() - started)
    logger.info("%s: %s (%s) in %.1fs", name, 'pass' if passed else 'FAIL', detail, result.seconds)
    return result


def run_suites(quick=False, seed=0, progress=True) -> List[SuiteResult]:
    """Run every suite with its own sub-stream of ``seed``."""
    root = Rng(seed)
    instances = 10 if quick else 100
    pairs = 100 if quick else 1000
    suites = [
        ('layer equivalence', lambda: equivalence_suite(instances, root.spawn(1), progress)),
        ('prox agreement', lambda: prox_agreement_suite(instances, root.spawn(2), progress)),
        ('unit-step identity', lambda: identity_suite(instances, root.spawn(3), progress)),
        ('nonexpansive', lambda: nonexpansive_suite(pairs, root.spawn(4), progress)),
        ('gradients', lambda: gradient_suite(root.spawn(5), quick, progress)),
        ('multilayer', lambda: multilayer_suite(3 if quick else 10, root.spawn(6), progress)),
    ]
    return [_run(name, suite) for name, suite in suites]
