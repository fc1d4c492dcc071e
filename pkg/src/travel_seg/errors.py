"""
Exception hierarchy for travel-seg.
The CLI maps each family to its own exit code.
"""


class TravelError(Exception):
    """Base class for every error raised by travel_seg."""

    exit_code = 5


class InputError(TravelError):
    """Unreadable or malformed input (scan files, label files, frame sets)."""

    exit_code = 3


class ScanFormatError(InputError):
    """A scan file does not match its declared format."""


class LabelSizeError(InputError):
    """A label file disagrees with the point count it is paired with."""


class ConfigError(TravelError):
    """A configuration value is unknown or out of range."""

    exit_code = 4

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class OracleGuardError(TravelError):
    """The euclidean oracle refuses clouds above its size guard."""

    exit_code = 3
