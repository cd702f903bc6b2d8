"""The keyed measurement cipher.

Encryption scales the plaintext value by ``p0`` and measures it by the key's
radix schedule, multiplying each quotient by ``deltaQ[i]`` and each carried
remainder by ``deltaR[i]``::

    S = value * p0
    for i in range(k):
        c[i] = (S // nabla[i]) * deltaQ[i]
        S = (S % nabla[i]) * deltaR[i]

Decryption undoes this from the last coordinate backwards.  Every step is an
exact division, and a failed division is reported as :class:`IntegrityError`,
which is how a wrong key or a corrupted ciphertext is usually noticed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import InvalidKey, IntegrityError, LengthMismatch, ParameterError, RangeError
from .numeral import Plainvalue, bytes_from_plain, nabla_violations, plain_from_bytes

__all__ = [
    "NablaKey",
    "Ciphertext",
    "EntropySource",
    "validate_key",
    "encrypt",
    "decrypt",
    "keygen",
    "layer",
    "unlayer",
]


@dataclass(frozen=True)
class NablaKey:
    nabla: tuple[int, ...]
    deltaQ: tuple[int, ...]
    deltaR: tuple[int, ...]
    p0: int

    def __post_init__(self):
        for name in ("nabla", "deltaQ", "deltaR"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def k(self) -> int:
        return len(self.nabla)

    @classmethod
    def identity(cls, nabla: Sequence[int] = (1,)) -> NablaKey:
        """Unit multipliers and ``p0 = 1``: encryption reduces to plain measurement."""
        k = len(nabla)
        return cls(tuple(nabla), (1,) * k, (1,) * k, 1)


@dataclass(frozen=True)
class Ciphertext:
    values: tuple[int, ...]
    bit_len: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def k(self) -> int:
        return len(self.values)


class EntropySource(Protocol):
    def randint(self, a: int, b: int) -> int: ...


def validate_key(key: NablaKey) -> list[str]:
    """Every invariant the key violates; an empty list means the key is usable."""
    problems = []
    k = len(key.nabla)
    if len(key.deltaQ) != k or len(key.deltaR) != k:
        problems.append(
            f"length mismatch: nabla={k}, deltaQ={len(key.deltaQ)}, deltaR={len(key.deltaR)}"
        )
    problems.extend(nabla_violations(key.nabla))
    if any(not isinstance(d, int) or d < 1 for d in key.deltaQ):
        problems.append("deltaQ entries must be integers >= 1")
    if any(not isinstance(d, int) or d < 1 for d in key.deltaR):
        problems.append("deltaR entries must be integers >= 1")
    if not isinstance(key.p0, int) or key.p0 < 1:
        problems.append("p0 must be an integer >= 1")
    return problems


def _require_valid(key: NablaKey) -> None:
    problems = validate_key(key)
    if problems:
        raise InvalidKey(problems)


def encrypt(p: Plainvalue, key: NablaKey) -> Ciphertext:
    _require_valid(key)
    if not p.fits():
        raise RangeError(f"{p.value} does not fit in {p.bit_len} bits")
    S = p.value * key.p0
    values = []
    for d, dq, dr in zip(key.nabla, key.deltaQ, key.deltaR):
        q, r = divmod(S, d)
        values.append(q * dq)
        S = r * dr
    return Ciphertext(tuple(values), p.bit_len)


def decrypt(c: Ciphertext, key: NablaKey) -> Plainvalue:
    _require_valid(key)
    if c.k != key.k:
        raise LengthMismatch(f"ciphertext has {c.k} values, key has {key.k}")
    quotients = []
    for i, (ci, dq) in enumerate(zip(c.values, key.deltaQ), start=1):
        q, r = divmod(ci, dq)
        if r:
            raise IntegrityError(i, "deltaQ")
        quotients.append(q)
    S = 0  # nabla ends in 1, so the remainder after the last step is zero
    for i in range(key.k, 0, -1):
        carried, r = divmod(S, key.deltaR[i - 1])
        if r:
            raise IntegrityError(i, "deltaR")
        S = quotients[i - 1] * key.nabla[i - 1] + carried
    value, r = divmod(S, key.p0)
    if r:
        raise IntegrityError(0, "p0")
    if value.bit_length() > c.bit_len:
        raise RangeError(f"recovered value does not fit in {c.bit_len} bits")
    return Plainvalue(value, c.bit_len)


def _distinct(rng: EntropySource, lo: int, hi: int, count: int) -> list[int]:
    population = hi - lo + 1
    if count > population:
        raise ParameterError(f"cannot draw {count} distinct values from [{lo}, {hi}]")
    if 2 * count > population:
        # dense draw: partial Fisher-Yates over the whole range
        pool = list(range(lo, hi + 1))
        for j in range(count):
            t = rng.randint(j, population - 1)
            pool[j], pool[t] = pool[t], pool[j]
        return pool[:count]
    seen: set[int] = set()
    while len(seen) < count:
        seen.add(rng.randint(lo, hi))
    return list(seen)


def keygen(k: int, magnitude_bits: int, rng: EntropySource | None = None) -> NablaKey:
    """Draw a random key.

    ``rng`` defaults to :class:`random.SystemRandom`; pass a seeded
    :class:`random.Random` for reproducible keys.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    if magnitude_bits < 2:
        raise ParameterError("magnitude_bits must be at least 2")
    if rng is None:
        rng = random.SystemRandom()
    top = 1 << magnitude_bits
    nabla = sorted(_distinct(rng, 2, top, k - 1), reverse=True) + [1]
    deltaQ = [rng.randint(1, top) for _ in range(k)]
    deltaR = [rng.randint(1, top) for _ in range(k)]
    p0 = rng.randint(1, top)
    key = NablaKey(tuple(nabla), tuple(deltaQ), tuple(deltaR), p0)
    _require_valid(key)
    return key


def layer(c: Ciphertext, key2: NablaKey) -> Ciphertext:
    """Encrypt the canonical serialization of ``c`` under a second key."""
    from .formats import dump_ciphertext

    return encrypt(plain_from_bytes(dump_ciphertext(c)), key2)


def unlayer(c2: Ciphertext, key2: NablaKey) -> Ciphertext:
    from .formats import parse_ciphertext

    return parse_ciphertext(bytes_from_plain(decrypt(c2, key2)))


def random_plainvalue(rng: random.Random, max_bits: int) -> Plainvalue:
    bit_len = rng.randint(0, max_bits)
    return Plainvalue(rng.getrandbits(bit_len) if bit_len else 0, bit_len)


def random_key(rng: random.Random, max_k: int = 16, max_bits: int = 64) -> NablaKey:
    return keygen(rng.randint(1, max_k), rng.randint(2, max_bits), rng)
