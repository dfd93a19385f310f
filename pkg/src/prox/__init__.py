from .solvers import projected_gradient
from .dictionary import (
    DictionaryFactor,
    TransformTriple,
    EquivalenceReport,
    sdl_to_transform,
    md_objective,
    md_direct,
    equivalence_check,
    stack_transforms,
    ddl_forward_direct,
    ddl_forward_transformed,
)
from .qmetric import (
    DEFAULT_UNROLL,
    QMetricParams,
    PrecondParams,
    ProxResult,
    build_reparams,
    fb_reparams,
    qprox_iterate,
    qprox_solve,
    qprox_oracle,
    fb_precond_iterate,
    fixed_point_residual,
    prox_objective,
    q_norm,
    spectral_norm,
    stepsize_bound,
)

__all__ = [
    'projected_gradient',
    'DictionaryFactor',
    'TransformTriple',
    'EquivalenceReport',
    'sdl_to_transform',
    'md_objective',
    'md_direct',
    'equivalence_check',
    'stack_transforms',
    'ddl_forward_direct',
    'ddl_forward_transformed',
    'DEFAULT_UNROLL',
    'QMetricParams',
    'PrecondParams',
    'ProxResult',
    'build_reparams',
    'fb_reparams',
    'qprox_iterate',
    'qprox_solve',
    'qprox_oracle',
    'fb_precond_iterate',
    'fixed_point_residual',
    'prox_objective',
    'q_norm',
    'spectral_norm',
    'stepsize_bound',
]
