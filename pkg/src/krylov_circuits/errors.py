"""Exception hierarchy shared by the simulation modules and the CLI."""


class KrylovCircuitError(Exception):
    """Base class; carries the CLI exit code it maps to."""

    exit_code = 1


class InvalidParameterError(KrylovCircuitError, ValueError):
    exit_code = 2


class InvalidDimensionError(InvalidParameterError):
    pass


class LayerError(InvalidParameterError):
    pass


class NormalizationError(InvalidParameterError):
    pass


class InsufficientDataError(InvalidParameterError):
    pass


class AggregationError(InvalidParameterError):
    pass


class ConfigError(InvalidParameterError):
    pass


class EstimationError(KrylovCircuitError):
    """h0 could not be bracketed; ``partial`` holds whatever was computed."""

    exit_code = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ResourceCapError(KrylovCircuitError):
    exit_code = 3


class NumericalInconsistencyError(KrylovCircuitError, ArithmeticError):
    exit_code = 4
