from .gradcheck import GradReport, relative_error, numeric_grad, check_layer, check_network
from .suites import SuiteResult, run_suites, random_factor, random_qrelu, small_detrame_spec

__all__ = [
    'GradReport',
    'relative_error',
    'numeric_grad',
    'check_layer',
    'check_network',
    'SuiteResult',
    'run_suites',
    'random_factor',
    'random_qrelu',
    'small_detrame_spec',
]
