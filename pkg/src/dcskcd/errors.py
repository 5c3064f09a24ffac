"""Exception types raised across the package."""


class DcskError(Exception):
    """Base class for all package errors."""


class ConfigurationError(DcskError, ValueError):
    """A parameter set violates a structural constraint."""


class UnsupportedConfigurationError(ConfigurationError):
    """The requested combination is valid but has no implementation."""


class InvalidSeedError(DcskError, ValueError):
    """A chaotic generator seed lands on a fixed point of the map."""


class InvalidOrderError(ConfigurationError):
    """Walsh matrix order is not a power of two."""


class FramingError(DcskError, ValueError):
    """Received waveform length does not match the frame layout."""


class InvalidUserError(DcskError, ValueError):
    """User index outside 1..U."""


class DivergenceError(DcskError, ValueError):
    """A moment generating function was evaluated outside its domain."""


class PrecisionError(DcskError, ArithmeticError):
    """A series or quadrature failed to reach its tolerance."""
