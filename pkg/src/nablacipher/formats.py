"""Text formats for keys and ciphertexts.

Both are UTF-8, LF-terminated, with decimal integers written without leading
zeros and separated by single spaces::

    NABLAKEY 1          NABLACT 1
    k=<K>               bits=<L>
    p0=<P0>             k=<K>
    nabla=<d1> ... <dK> <c1>
    dq=<q1> ... <qK>    ...
    dr=<r1> ... <rK>    <cK>

Parsing is strict: unknown versions, misplaced or repeated fields, and
malformed integers all raise :class:`FormatError`.
"""
from __future__ import annotations

import re

import gmpy2

from .cipher import Ciphertext, NablaKey
from .errors import FormatError

__all__ = [
    "dump_key",
    "parse_key",
    "dump_ciphertext",
    "parse_ciphertext",
    "to_decimal",
    "from_decimal",
]

KEY_MAGIC = "NABLAKEY"
CT_MAGIC = "NABLACT"
VERSION = 1

_NATURAL = re.compile(r"0|[1-9][0-9]*")
# CPython's int<->str is quadratic; large values go through GMP.
_GMP_THRESHOLD = 4000


def to_decimal(n: int) -> str:
    if n < 0:
        raise ValueError("only naturals are serialized")
    if n.bit_length() > _GMP_THRESHOLD:
        return gmpy2.mpz(n).digits(10)
    return str(n)


def from_decimal(text: str) -> int:
    if not _NATURAL.fullmatch(text):
        raise FormatError(f"malformed integer: {text[:40]!r}")
    if len(text) > _GMP_THRESHOLD // 3:
        return int(gmpy2.mpz(text))
    return int(text)


def _lines(data: bytes | str) -> list[str]:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("not valid UTF-8") from exc
    if "\r" in data:
        raise FormatError("CR characters are not allowed")
    if not data.endswith("\n"):
        raise FormatError("missing final LF")
    return data[:-1].split("\n")


def _header(line: str, magic: str) -> None:
    parts = line.split(" ")
    if len(parts) != 2 or parts[0] != magic:
        raise FormatError(f"expected header {magic!r}, got {line[:40]!r}")
    if parts[1] != str(VERSION):
        raise FormatError(f"unsupported {magic} version {parts[1]!r}")


def _fields(lines: list[str], names: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for line, name in zip(lines, names):
        field, sep, rest = line.partition("=")
        if not sep:
            raise FormatError(f"expected '{name}=...', got {line[:40]!r}")
        if field in out:
            raise FormatError(f"duplicate field {field!r}")
        if field != name:
            raise FormatError(f"expected field {name!r}, got {field!r}")
        out[field] = rest
    return out


def _naturals(text: str, count: int, name: str) -> tuple[int, ...]:
    parts = text.split(" ") if text else []
    if len(parts) != count:
        raise FormatError(f"{name} has {len(parts)} entries, expected {count}")
    return tuple(from_decimal(p) for p in parts)


def _count(text: str, name: str) -> int:
    k = from_decimal(text)
    if k < 1:
        raise FormatError(f"{name} must be at least 1")
    return k


def dump_key(key: NablaKey) -> bytes:
    def row(xs):
        return " ".join(map(to_decimal, xs))

    text = (
        f"{KEY_MAGIC} {VERSION}\n"
        f"k={key.k}\n"
        f"p0={to_decimal(key.p0)}\n"
        f"nabla={row(key.nabla)}\n"
        f"dq={row(key.deltaQ)}\n"
        f"dr={row(key.deltaR)}\n"
    )
    return text.encode("utf-8")


def parse_key(data: bytes | str) -> NablaKey:
    lines = _lines(data)
    if len(lines) != 6:
        raise FormatError(f"key file must have 6 lines, found {len(lines)}")
    _header(lines[0], KEY_MAGIC)
    f = _fields(lines[1:], ["k", "p0", "nabla", "dq", "dr"])
    k = _count(f["k"], "k")
    return NablaKey(
        nabla=_naturals(f["nabla"], k, "nabla"),
        deltaQ=_naturals(f["dq"], k, "dq"),
        deltaR=_naturals(f["dr"], k, "dr"),
        p0=from_decimal(f["p0"]),
    )


def dump_ciphertext(c: Ciphertext) -> bytes:
    parts = [f"{CT_MAGIC} {VERSION}", f"bits={c.bit_len}", f"k={c.k}"]
    parts.extend(to_decimal(v) for v in c.values)
    return ("\n".join(parts) + "\n").encode("utf-8")


def parse_ciphertext(data: bytes | str) -> Ciphertext:
    lines = _lines(data)
    if len(lines) < 4:
        raise FormatError("ciphertext file is truncated")
    _header(lines[0], CT_MAGIC)
    f = _fields(lines[1:3], ["bits", "k"])
    bit_len = from_decimal(f["bits"])
    k = _count(f["k"], "k")
    if len(lines) != 3 + k:
        raise FormatError(f"expected {k} value lines, found {len(lines) - 3}")
    return Ciphertext(tuple(from_decimal(v) for v in lines[3:]), bit_len)
