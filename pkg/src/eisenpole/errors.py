class EisenpoleError(Exception):
    pass


class ConfigError(EisenpoleError):
    """Bad group label, parabolic index, flag value or output path."""


class PreconditionError(EisenpoleError):
    pass


class InconclusiveError(EisenpoleError):
    """Every retained Laurent coefficient vanished symbolically."""
