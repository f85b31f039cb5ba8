"""Exception hierarchy shared across the toolkit.

``ConfigError`` subclasses signal bad parameters or unsatisfiable input
requirements (CLI exit code 3); everything else derived from
``ParlascopeError`` is a runtime failure (exit code 1).
"""


class ParlascopeError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ParlascopeError):
    """Invalid configuration, parameters, or unsatisfiable input constraints."""


class InsufficientClassError(ConfigError):
    """A labeled class cannot be populated with the requested number of instances."""

    def __init__(self, task: str, label: int, required: int, available: int):
        self.task = task
        self.label = label
        self.required = required
        self.available = available
        super().__init__(
            f"insufficient class population for task {task!r}, label {label}: "
            f"required {required}, available {available}"
        )


class StratificationError(ConfigError):
    """A class is too small to appear on both sides of a stratified split."""


class TeiParseError(ParlascopeError):
    """Malformed XML in a session transcript."""


class TeiSchemaError(ParlascopeError):
    """Well-formed XML that is missing required session metadata."""

    def __init__(self, field: str, detail: str = ""):
        self.field = field
        msg = f"missing required session metadata: {field}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class StoreError(ParlascopeError):
    """Corrupt or unreadable speech store file."""


class UnannotatedError(ParlascopeError):
    """A record without token annotations reached a step that requires them."""


class ProtocolError(ParlascopeError):
    """External scorer sent a response that violates the line protocol."""
