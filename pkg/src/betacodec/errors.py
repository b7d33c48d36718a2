"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is outside its admissible range (bad base, leak, mu, ...)."""


class UnboundedStateError(RuntimeError):
    """An encoder state left the configured ceiling: the quantizer parameters
    are not inside a certified boundedness range."""


class NoSignalError(RuntimeError):
    """A (x, -x) bitstream pair differenced to the all-zero sequence; with an
    ideal quantizer the pair carries no base information."""


class NoRootError(RuntimeError):
    """No admissible root of the coefficient polynomial was found inside the
    search window at the requested residual tolerance."""


class StructureViolationError(RuntimeError):
    """A bitstream or polynomial does not have the structure the operation
    requires (period-3 law, exact divisibility, sparse quotient pattern)."""


class ConfigError(ValueError):
    """An experiment configuration file is malformed."""
