from .metrics import EvalResult, accuracy, evaluate
from .robustness import NoiseSweepResult, draw_noise, fooling_rate, noise_sweep

__all__ = [
    'EvalResult',
    'accuracy',
    'evaluate',
    'NoiseSweepResult',
    'draw_noise',
    'fooling_rate',
    'noise_sweep',
]
