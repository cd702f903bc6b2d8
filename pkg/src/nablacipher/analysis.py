"""Desk-scale cryptanalysis of the measurement cipher.

Every attack here enumerates a finite :class:`KeySpace` exhaustively, so the
counts it reports are exact.  Keys are addressed by a mixed-radix index
(schedule outermost, then ``deltaQ``, ``deltaR`` and ``p0``), which lets the
space be cut into contiguous ranges and scanned in parallel without changing
any result.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .cipher import Ciphertext, NablaKey, decrypt, encrypt, keygen, layer, unlayer
from .errors import BudgetExceeded, LengthMismatch, NablaError
from .formats import dump_ciphertext
from .numeral import Plainvalue, plain_from_bytes

__all__ = [
    "DEFAULT_BUDGET",
    "KeySpace",
    "Finding",
    "AttackReport",
    "LeakRecord",
    "CiphertextStats",
    "bruteforce_known_plaintext",
    "ciphertext_only_ambiguity",
    "reuse_leakage",
    "ciphertext_stats",
    "chi_square_bytes",
    "expansion_monte_carlo",
    "layer_wrong_key_rate",
    "format_report",
    "report_fields",
]

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class KeySpace:
    """All keys of length ``k`` with every entry bounded by the given maxima.

    Schedules draw their first ``k-1`` elements from ``[2, nabla_max]`` and
    end in 1; multipliers range over ``[1, delta_max]`` and ``p0`` over
    ``[1, p0_max]``.
    """

    k: int
    nabla_max: int
    delta_max: int
    p0_max: int

    def __post_init__(self):
        if min(self.k, self.nabla_max, self.delta_max, self.p0_max) < 1:
            raise ValueError("all keyspace bounds must be >= 1")

    @property
    def nabla_count(self) -> int:
        return math.comb(self.nabla_max - 1, self.k - 1)

    @property
    def size(self) -> int:
        return self.nabla_count * self.delta_max ** (2 * self.k) * self.p0_max

    def _unrank_nabla(self, rank: int) -> tuple[int, ...]:
        # lexicographic unranking of (k-1)-subsets of [nabla_max, ..., 2]
        items = list(range(self.nabla_max, 1, -1))
        r = self.k - 1
        out = []
        start = 0
        while r:
            for pos in range(start, len(items)):
                block = math.comb(len(items) - pos - 1, r - 1)
                if rank < block:
                    out.append(items[pos])
                    start = pos + 1
                    r -= 1
                    break
                rank -= block
        return tuple(out) + (1,)

    def _unrank_deltas(self, rank: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.k):
            rank, d = divmod(rank, self.delta_max)
            digits.append(d + 1)
        return tuple(reversed(digits))

    def key_at(self, index: int) -> NablaKey:
        if not 0 <= index < self.size:
            raise IndexError(index)
        block = self.delta_max**self.k
        rest, p0 = divmod(index, self.p0_max)
        rest, dr = divmod(rest, block)
        nabla_rank, dq = divmod(rest, block)
        return NablaKey(
            self._unrank_nabla(nabla_rank),
            self._unrank_deltas(dq),
            self._unrank_deltas(dr),
            p0 + 1,
        )

    def index_of(self, key: NablaKey) -> Optional[int]:
        """Position of ``key`` in enumeration order, or ``None`` if outside the space."""
        if key.k != self.k or len(key.deltaQ) != self.k or len(key.deltaR) != self.k:
            return None
        if not 1 <= key.p0 <= self.p0_max:
            return None
        if any(not 1 <= d <= self.delta_max for d in key.deltaQ + key.deltaR):
            return None
        candidates = combinations(range(self.nabla_max, 1, -1), self.k - 1)
        head = key.nabla[:-1]
        if key.nabla[-1] != 1:
            return None
        for nabla_rank, combo in enumerate(candidates):
            if combo == head:
                break
        else:
            return None

        def digits(xs):
            n = 0
            for x in xs:
                n = n * self.delta_max + (x - 1)
            return n

        block = self.delta_max**self.k
        return ((nabla_rank * block + digits(key.deltaQ)) * block + digits(key.deltaR)) * self.p0_max + key.p0 - 1

    def keys(self, start: int = 0, stop: Optional[int] = None) -> Iterator[tuple[int, NablaKey]]:
        stop = self.size if stop is None else min(stop, self.size)
        for index in range(start, stop):
            yield index, self.key_at(index)


@dataclass(frozen=True)
class Finding:
    index: int
    key: NablaKey
    plaintext: Optional[int] = None


@dataclass
class AttackReport:
    candidates_tested: int
    consistent_keys: int
    distinct_plaintexts: int
    elapsed: float
    details: list[Finding] = field(default_factory=list)
    space_size: int = 0


def _check_budget(space: KeySpace, budget: int) -> None:
    if space.size > budget:
        raise BudgetExceeded(space.size, budget)


def _scan(task):
    mode, space, start, stop, payload, max_details = task
    tested = consistent = 0
    plaintexts: set[int] = set()
    details = []
    for index, key in space.keys(start, stop):
        tested += 1
        if mode == "known":
            p, c = payload
            try:
                ok = encrypt(p, key) == c
            except NablaError:
                ok = False
            recovered = p.value if ok else None
        else:
            try:
                recovered = decrypt(payload, key).value
                ok = True
            except NablaError:
                ok = False
        if ok:
            consistent += 1
            plaintexts.add(recovered)
            if max_details is None or len(details) < max_details:
                details.append(Finding(index, key, recovered))
    return tested, consistent, plaintexts, details


def _run(mode, space, payload, budget, jobs, max_details) -> AttackReport:
    _check_budget(space, budget)
    t0 = time.perf_counter()
    size = space.size
    if jobs <= 1 or size < 2:
        parts = [_scan((mode, space, 0, size, payload, max_details))]
    else:
        chunks = min(size, jobs * 4)
        bounds = [size * j // chunks for j in range(chunks + 1)]
        tasks = [(mode, space, a, b, payload, max_details) for a, b in zip(bounds, bounds[1:])]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan, tasks))
    tested = sum(p[0] for p in parts)
    consistent = sum(p[1] for p in parts)
    plaintexts = set().union(*(p[2] for p in parts))
    details = sorted((d for p in parts for d in p[3]), key=lambda d: d.index)
    if max_details is not None:
        details = details[:max_details]
    return AttackReport(
        candidates_tested=tested,
        consistent_keys=consistent,
        distinct_plaintexts=len(plaintexts),
        elapsed=time.perf_counter() - t0,
        details=details,
        space_size=size,
    )


def bruteforce_known_plaintext(
    p: Plainvalue,
    c: Ciphertext,
    space: KeySpace,
    *,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    max_details: Optional[int] = 64,
) -> AttackReport:
    """Count the keys in ``space`` that map ``p`` to exactly ``c``."""
    return _run("known", space, (p, c), budget, jobs, max_details)


def ciphertext_only_ambiguity(
    c: Ciphertext,
    space: KeySpace,
    *,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    max_details: Optional[int] = 64,
) -> AttackReport:
    """Count the keys under which ``c`` decrypts cleanly, and the plaintexts they give."""
    return _run("ambiguity", space, c, budget, jobs, max_details)


@dataclass(frozen=True)
class LeakRecord:
    index: int
    gcd: int

    @property
    def leaks(self) -> bool:
        return self.gcd > 1


def reuse_leakage(c1: Ciphertext, c2: Ciphertext) -> list[LeakRecord]:
    """Per-coordinate gcds of two ciphertexts made under the same key.

    Each coordinate is a multiple of the key's ``deltaQ`` entry, so the gcd
    is too: any gcd above 1 exposes key material.
    """
    if c1.k != c2.k:
        raise LengthMismatch(f"ciphertexts have {c1.k} and {c2.k} values")
    return [LeakRecord(i, math.gcd(a, b)) for i, (a, b) in enumerate(zip(c1.values, c2.values), start=1)]


@dataclass(frozen=True)
class CiphertextStats:
    expansion_ratio: Optional[float]
    value_bits: tuple[int, ...]
    plaintext_bits: int
    chi_square: float
    serialized_bytes: int

    @property
    def total_value_bits(self) -> int:
        return sum(self.value_bits)


def chi_square_bytes(data: bytes) -> float:
    """Pearson statistic of the byte histogram against a uniform distribution over 256 values."""
    if not data:
        return 0.0
    counts = np.bincount(np.frombuffer(data, dtype=np.uint8), minlength=256)
    expected = len(data) / 256
    return float(((counts - expected) ** 2).sum() / expected)


def ciphertext_stats(c: Ciphertext, p: Plainvalue) -> CiphertextStats:
    value_bits = tuple(v.bit_length() for v in c.values)
    ratio = sum(value_bits) / p.bit_len if p.bit_len else None
    blob = dump_ciphertext(c)
    return CiphertextStats(ratio, value_bits, p.bit_len, chi_square_bytes(blob), len(blob))


def expansion_monte_carlo(
    trials: int = 100, size_bytes: int = 1024, k: int = 4, magnitude_bits: int = 32, seed: int = 0
) -> float:
    """Mean expansion ratio over random plaintexts and keys drawn from ``seed``."""
    rng = random.Random(seed)
    ratios = []
    for _ in range(trials):
        p = plain_from_bytes(rng.randbytes(size_bytes))
        key = keygen(k, magnitude_bits, rng)
        ratios.append(ciphertext_stats(encrypt(p, key), p).expansion_ratio)
    return sum(ratios) / len(ratios)


def layer_wrong_key_rate(
    trials: int = 1000, k: int = 4, magnitude_bits: int = 32, seed: int = 0
) -> float:
    """Fraction of wrong second-layer keys that make unlayering fail outright."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        inner = encrypt(plain_from_bytes(rng.randbytes(rng.randint(0, 64))), keygen(k, magnitude_bits, rng))
        outer = layer(inner, keygen(k, magnitude_bits, rng))
        try:
            unlayer(outer, keygen(k, magnitude_bits, rng))
        except NablaError:
            failures += 1
    return failures / trials


def report_fields(report: AttackReport) -> dict[str, str]:
    fields = {
        "space_size": str(report.space_size),
        "candidates_tested": str(report.candidates_tested),
        "consistent_keys": str(report.consistent_keys),
        "distinct_plaintexts": str(report.distinct_plaintexts),
    }
    if report.details:
        first = report.details[0]
        fields["first_index"] = str(first.index)
        fields["first_key"] = _key_str(first.key)
    fields["elapsed_s"] = f"{report.elapsed:.6f}"
    return fields


def _key_str(key: NablaKey) -> str:
    def row(xs):
        return ",".join(map(str, xs))

    return f"nabla={row(key.nabla)};dq={row(key.deltaQ)};dr={row(key.deltaR)};p0={key.p0}"


def format_report(title: str, fields: dict[str, str]) -> str:
    width = max(map(len, fields), default=0)
    lines = [title]
    lines.extend(f"  {name.ljust(width)}  {value}" for name, value in fields.items())
    return "\n".join(lines) + "\n"
