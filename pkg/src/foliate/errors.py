"""Exception hierarchy shared by the library and the CLI."""


class ModelValidationError(ValueError):
    """Input data does not describe a valid foliated model."""


class JacobiError(ModelValidationError):
    pass


class IntegrabilityError(ModelValidationError):
    pass


class NotRiemannianError(ModelValidationError):
    pass


class NotUnimodularError(ModelValidationError):
    pass


class MetricHomotopyError(ModelValidationError):
    pass


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
