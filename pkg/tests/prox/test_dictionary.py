import logging
import itertools

import numpy as np
import pytest

from src.core.rng import Rng, rng_normal, rng_uniform
from src.prox.dictionary import (
    ALPHA_FLOOR,
    DictionaryFactor,
    ddl_forward_direct,
    ddl_forward_transformed,
    md_direct,
    md_objective,
    sdl_to_transform,
    stack_transforms,
    equivalence_check,
)
from src.utils.errors import ShapeError
from src.verification.suites import random_factor


def test_zero_dictionary_gives_identity_metric():
    triple = sdl_to_transform(DictionaryFactor(D=np.zeros((2, 3)), alpha=1.0, lam=0.1))
    assert np.array_equal(triple.Q, np.eye(3))
    assert np.array_equal(triple.F, np.zeros((3, 2)))
    assert np.array_equal(triple.c, np.zeros(3))


def test_identity_dictionary_with_shift():
    triple = sdl_to_transform(DictionaryFactor(D=np.eye(2), alpha=1.0, lam=0.1, d=np.array([2.0, 2.0])))
    assert np.allclose(triple.Q, 2 * np.eye(2))
    assert np.allclose(triple.F, 0.5 * np.eye(2))
    assert np.allclose(triple.c, [1.0, 1.0])


def test_transform_residuals(rng):
    D = rng_normal(rng, (4, 6))
    d = rng_normal(rng, 6)
    triple = sdl_to_transform(DictionaryFactor(D=D, alpha=0.5, lam=0.1, d=d))
    assert np.allclose(triple.Q, triple.Q.T)
    assert np.min(np.linalg.eigvalsh(triple.Q)) >= 0.5 - 1e-10
    assert np.max(np.abs(triple.Q @ triple.F - D.T)) <= 1e-10
    assert np.max(np.abs(triple.Q @ triple.c - d)) <= 1e-10


def test_shift_length_is_checked():
    with pytest.raises(ShapeError):
        DictionaryFactor(D=np.eye(2), alpha=1.0, lam=0.1, d=np.ones(3))


def test_zero_dictionary_code_is_zero():
    factor = DictionaryFactor(D=np.zeros((3, 4)), alpha=1.0, lam=1.0)
    assert np.array_equal(md_direct(factor, np.array([1.0, -2.0, 3.0])), np.zeros(4))


def test_scalar_soft_threshold_with_alpha_floor(caplog):
    """alpha = 0 is floored; the code is the soft-thresholded input."""
    with caplog.at_level(logging.WARNING):
        factor = DictionaryFactor(D=np.eye(1), alpha=0.0, lam=0.5)
    assert factor.alpha == ALPHA_FLOOR
    assert 'alpha' in caplog.text
    assert md_direct(factor, np.array([2.0]))[0] == pytest.approx(1.5, abs=1e-8)


def test_code_beats_a_local_grid(rng):
    factor = DictionaryFactor(D=rng_normal(rng, (4, 6)), alpha=0.3, lam=0.2)
    x = rng_normal(rng, 4)
    a = md_direct(factor, x)
    best = md_objective(factor, x, a)
    # grid of +-1e-3 moves over pairs of coordinates
    for i, j in itertools.combinations(range(6), 2):
        for di, dj in itertools.product((-1e-3, 0.0, 1e-3), repeat=2):
            b = a.copy()
            b[i] += di
            b[j] += dj
            assert md_objective(factor, x, b) >= best - 1e-12


def test_code_is_nonnegative_and_minimal(rng):
    factor = random_factor(rng, with_shift=True)
    x = rng_normal(rng, factor.D.shape[0])
    a = md_direct(factor, x)
    assert np.all(a >= 0)
    best = md_objective(factor, x, a)
    for _ in range(1000):
        b = np.maximum(a + rng_normal(rng, a.shape, 0.0, 0.05), 0.0)
        assert md_objective(factor, x, b) >= best - 1e-12


def test_objective_is_infinite_outside_orthant():
    factor = DictionaryFactor(D=np.eye(2), alpha=1.0, lam=0.1)
    assert md_objective(factor, np.zeros(2), np.array([-1.0, 0.0])) == np.inf


def test_equivalence_zero_dictionary():
    report = equivalence_check(DictionaryFactor(D=np.zeros((2, 3)), alpha=1.0, lam=0.5), np.array([1.0, 2.0]))
    assert report.passed
    assert report.max_abs_diff == 0.0


def test_equivalence_random_instances():
    rng = Rng(99)
    for i in range(20):
        factor = random_factor(rng, with_shift=i % 2 == 0)
        report = equivalence_check(factor, rng_normal(rng, factor.D.shape[0]))
        assert report.passed, report.max_abs_diff


def test_equivalence_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        equivalence_check(DictionaryFactor(D=np.eye(2), alpha=1.0, lam=0.1), np.ones(2), tol=0.0)


def test_stacked_network_two_ways(rng):
    first = DictionaryFactor(D=rng_normal(rng, (6, 8), 0.0, 0.4), alpha=0.5, lam=0.05)
    second = DictionaryFactor(D=rng_normal(rng, (5, 7), 0.0, 0.4), alpha=0.5, lam=0.05,
                              d=rng_uniform(rng, 7, -0.1, 0.1))
    reshaper = rng_normal(rng, (5, 8), 0.0, 0.5)
    classifier = rng_normal(rng, (3, 7))
    x = rng_normal(rng, 6)
    direct = ddl_forward_direct([first, second], [reshaper, None], classifier, x)
    transformed = ddl_forward_transformed([first, second], [reshaper, None], classifier, x)
    assert np.max(np.abs(direct - transformed)) <= 1e-6


def test_stack_transforms_composes_reshapers(rng):
    first = DictionaryFactor(D=rng_normal(rng, (6, 8)), alpha=0.5, lam=0.05)
    second = DictionaryFactor(D=rng_normal(rng, (5, 7)), alpha=0.5, lam=0.05)
    reshaper = rng_normal(rng, (5, 8))
    classifier = rng_normal(rng, (3, 7))
    stages = stack_transforms([first, second], [reshaper, None], classifier)
    assert len(stages) == 3
    assert np.allclose(stages[0][0], sdl_to_transform(first).F)
    assert np.allclose(stages[1][0], sdl_to_transform(second).F @ reshaper)
    assert np.allclose(stages[2][0], classifier)
    assert stages[2][2] is None


def test_stack_transforms_checks_reshaper_count(rng):
    factor = DictionaryFactor(D=np.eye(2), alpha=1.0, lam=0.1)
    with pytest.raises(ShapeError):
        stack_transforms([factor], [None, None], np.eye(2))
