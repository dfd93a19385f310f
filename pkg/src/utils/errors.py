class DetrameError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(DetrameError, ValueError):
    """Array shapes do not compose."""


class NonFiniteError(DetrameError, ArithmeticError):
    """A NaN or Inf appeared in a value that must stay finite."""


class ConvergenceError(DetrameError, RuntimeError):
    """An iterative solver hit its iteration cap before its tolerance."""


class ConstraintError(DetrameError, ValueError):
    """Parameters fall outside their constraint set."""


class StepsizeError(DetrameError, ValueError):
    """A forward-backward stepsize violates the convergence bound."""


class ConfigError(DetrameError, ValueError):
    """Invalid or unknown configuration values."""


class DataFormatError(DetrameError, ValueError):
    """A dataset file does not follow its binary format."""


class CheckpointError(DetrameError, IOError):
    """A checkpoint file is unreadable, corrupted or from another version."""


class TrainingError(DetrameError, RuntimeError):
    """Training diverged or was given unusable inputs."""
