"""Exception types shared across the package."""


class TangleForgeError(Exception):
    """Base class for library errors."""


class ParseError(TangleForgeError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ResourceError(TangleForgeError):
    """A search exceeded its node budget or a size cap."""


class PropertyViolation(TangleForgeError):
    """A checked structural property failed; carries an optional witness."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)
