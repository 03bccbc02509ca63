"""Exception types shared across the package."""


class LossymonError(Exception):
    """Base class for all domain errors raised by this package."""


class RegexParseError(LossymonError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AlphabetMismatchError(LossymonError):
    pass


class StateExplosionError(LossymonError):
    """Subset construction exceeded the configured state cap."""


class CapExceededError(LossymonError):
    """A brute-force enumeration exceeded its configured cap."""


class UnknownSymbolError(LossymonError):
    pass


class ModelError(LossymonError):
    """Invalid loss model (empty inverse language, bad alphabet, ...)."""


class SpecValidationError(LossymonError):
    """Property specification failed schema validation."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class TrivialPropertyWarning(UserWarning):
    """The built property can never be violated, or violates everything."""
