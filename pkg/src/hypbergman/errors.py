"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Unknown model selector, unsupported option, or malformed config."""


class PreconditionError(ValueError):
    """An operation was called outside its stated domain."""


class ResourceLimitError(RuntimeError):
    """An enumeration exceeded its element cap."""

    def __init__(self, cap: int, message: str = ""):
        self.cap = cap
        super().__init__(message or f"element cap {cap} exceeded")
