"""Exception hierarchy shared by the library and the command-line frontend."""


class BSPRError(Exception):
    """Base class for all errors raised by :mod:`bspr`."""

    exit_code = 1


class InvalidConfigError(BSPRError, ValueError):
    """Malformed network description or out-of-range argument."""

    exit_code = 1


class NumericalError(BSPRError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value."""

    exit_code = 2


class EnumerationCapError(BSPRError):
    """An exhaustive enumeration would exceed the configured size cap."""

    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds enumeration cap {cap}")
