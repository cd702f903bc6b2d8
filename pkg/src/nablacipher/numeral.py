"""Bit sequences as natural numbers, and their measurement by a radix schedule.

A bit sequence is read with its *leftmost* written bit as the coefficient of
``2**0``, so ``101000001`` is ``2**0 + 2**2 + 2**8 = 261``.  Trailing zeros
carry no value, which is why a :class:`Plainvalue` keeps its bit length.

A schedule ("nabla") is a strictly decreasing list of positive integers
ending in 1.  Measuring ``S`` by it is a greedy mixed-radix decomposition:
divide by each element in turn and carry the remainder forward.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidNabla, LengthMismatch, RangeError

__all__ = [
    "BitSequence",
    "Plainvalue",
    "int_from_bits",
    "bits_from_int",
    "plain_from_bytes",
    "bytes_from_plain",
    "nabla_violations",
    "check_nabla",
    "measure",
    "recompose",
]


@dataclass(frozen=True)
class BitSequence:
    bits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_str(cls, text: str) -> BitSequence:
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class Plainvalue:
    """A natural number together with the bit length it was read from."""

    value: int
    bit_len: int

    def __post_init__(self):
        if self.value < 0 or self.bit_len < 0:
            raise ValueError("value and bit_len must be non-negative")

    def fits(self) -> bool:
        return self.value.bit_length() <= self.bit_len


def int_from_bits(seq: BitSequence | str) -> Plainvalue:
    text = str(seq) if isinstance(seq, BitSequence) else seq
    if isinstance(seq, str) and any(ch not in "01" for ch in text):
        raise ValueError(f"not a bit string: {text!r}")
    value = int(text[::-1], 2) if text else 0
    return Plainvalue(value, len(text))


def bits_from_int(p: Plainvalue) -> BitSequence:
    if not p.fits():
        raise RangeError(f"{p.value} does not fit in {p.bit_len} bits")
    if p.bit_len == 0:
        return BitSequence()
    text = format(p.value, "b")[::-1].ljust(p.bit_len, "0")
    return BitSequence.from_str(text)


def plain_from_bytes(data: bytes) -> Plainvalue:
    """Bit ``b`` of byte ``i`` lands at position ``8*i + b``: little-endian base 256."""
    return Plainvalue(int.from_bytes(data, "little"), 8 * len(data))


def bytes_from_plain(p: Plainvalue) -> bytes:
    if p.bit_len % 8:
        raise RangeError(f"bit length {p.bit_len} is not a whole number of bytes")
    if not p.fits():
        raise RangeError(f"{p.value} does not fit in {p.bit_len} bits")
    return p.value.to_bytes(p.bit_len // 8, "little")


def nabla_violations(nabla: Sequence[int]) -> list[str]:
    problems = []
    if len(nabla) == 0:
        return ["nabla is empty"]
    if any(not isinstance(d, int) or d < 1 for d in nabla):
        problems.append("nabla elements must be positive integers")
    if any(a <= b for a, b in zip(nabla, nabla[1:])):
        problems.append("nabla not strictly decreasing")
    if nabla[-1] != 1:
        problems.append("nabla does not end in 1")
    return problems


def check_nabla(nabla: Iterable[int]) -> tuple[int, ...]:
    nabla = tuple(nabla)
    problems = nabla_violations(nabla)
    if problems:
        raise InvalidNabla("; ".join(problems))
    return nabla


def measure(S: int, nabla: Sequence[int]) -> list[int]:
    """Quotients of ``S`` measured by ``nabla``.

    ``q_i = S_i // nabla_i`` with ``S_1 = S`` and ``S_{i+1} = S_i % nabla_i``.
    The last element is 1, so the final remainder vanishes and
    ``recompose(measure(S, nabla), nabla) == S``.
    """
    if S < 0:
        raise ValueError("cannot measure a negative value")
    check_nabla(nabla)
    out = []
    for d in nabla:
        q, S = divmod(S, d)
        out.append(q)
    return out


def recompose(quotients: Sequence[int], nabla: Sequence[int]) -> int:
    if len(quotients) != len(nabla):
        raise LengthMismatch(f"{len(quotients)} quotients for {len(nabla)} radix elements")
    return sum(q * d for q, d in zip(quotients, nabla))
