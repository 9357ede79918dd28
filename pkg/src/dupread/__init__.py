"""Codes correcting tandem duplications in l-read composition vectors."""

from .errors import DecodingError, DupReadError, InvalidSymbolError, NotAReadVectorError, SizeGuardError
from .seqcore import Params, invert_read, read_vector

__version__ = "0.1.0"

__all__ = [
    "DecodingError",
    "DupReadError",
    "InvalidSymbolError",
    "NotAReadVectorError",
    "Params",
    "SizeGuardError",
    "invert_read",
    "read_vector",
]
