"""Exception types raised by the library."""


class DupReadError(ValueError):
    """Base class for all library errors."""


class InvalidSymbolError(DupReadError):
    pass


class NotAReadVectorError(DupReadError):
    """The vector is not the l-read vector of any sequence."""


class DecodingError(DupReadError):
    pass


class SizeGuardError(DupReadError):
    """An exhaustive enumeration would exceed the configured size limit."""
