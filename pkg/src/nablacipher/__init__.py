"""Measurement-by-radix-schedule cipher: codec, keyed cipher, file formats and analysis harness."""
from .cipher import Ciphertext, NablaKey, decrypt, encrypt, keygen, layer, unlayer, validate_key
from .errors import (
    BudgetExceeded,
    FormatError,
    IntegrityError,
    InvalidKey,
    InvalidNabla,
    LengthMismatch,
    NablaError,
    ParameterError,
    RangeError,
    UsageError,
)
from .formats import dump_ciphertext, dump_key, parse_ciphertext, parse_key
from .numeral import (
    BitSequence,
    Plainvalue,
    bits_from_int,
    bytes_from_plain,
    int_from_bits,
    measure,
    plain_from_bytes,
    recompose,
)

__version__ = "0.1.0"
