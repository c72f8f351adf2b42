"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """An enumeration or brute-force budget was exceeded."""


class ContextMismatch(ValueError):
    """Operands belong to different field contexts."""


class ConfigError(ValueError):
    """Malformed experiment configuration; the message names the offending field."""


class WordPoolError(ValueError):
    """More composition words were requested than the pool contains."""
