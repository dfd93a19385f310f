from .core import *
from .prox import *
from .layers import *
from .networks import *
from .config import *
from .training import *
from .data import *
from .evaluation import *
from .verification import *
from .utils import *

__version__ = '0.1'

__all__ = (
    core.__all__ +
    prox.__all__ +
    layers.__all__ +
    networks.__all__ +
    config.__all__ +
    training.__all__ +
    data.__all__ +
    evaluation.__all__ +
    verification.__all__ +
    utils.__all__
)
