"""Exception types raised by the library and the benchmark harness."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedFunctionError(ValueError):
    """The requested benchmark function does not support the operation."""


class BudgetExhaustedError(RuntimeError):
    """An evaluation was requested after the budget ran out."""


class NoQualifyingOptimaError(ValueError):
    """A run located no global optimum, so a per-optimum metric is undefined."""


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""
