"""Command-line front end.

    nablacipher keygen --k N --bits B --out KEY [--seed S]
    nablacipher encrypt --key KEY --in FILE --out CT
    nablacipher decrypt --key KEY --in CT --out FILE
    nablacipher analyze {bruteforce,ambiguity,reuse,stats} ...

Exit status: 0 success, 1 usage or I/O error, 2 integrity or validation
failure, 3 keyspace over budget.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import analysis
from .analysis import DEFAULT_BUDGET
from .cipher import decrypt, encrypt, keygen
from .errors import BudgetExceeded, NablaError, UsageError
from .formats import dump_ciphertext, dump_key, parse_ciphertext, parse_key, to_decimal
from .numeral import bytes_from_plain, plain_from_bytes

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_BUDGET = 3

_ANALYSES = ("bruteforce", "ambiguity", "reuse", "stats")


@dataclass
class CommandConfig:
    subcommand: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    keys: list[Path] = field(default_factory=list)
    k: Optional[int] = None
    magnitude_bits: Optional[int] = None
    seed: Optional[int] = None
    analysis: Optional[str] = None
    ciphertexts: list[Path] = field(default_factory=list)
    plaintext: Optional[Path] = None
    nabla_max: int = 8
    delta_max: int = 4
    p0_max: int = 4
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    report: Optional[Path] = None

    def check(self) -> None:
        need = {
            "keygen": ("output", "k", "magnitude_bits"),
            "encrypt": ("input", "output"),
            "decrypt": ("input", "output"),
        }.get(self.subcommand, ())
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            raise UsageError(f"{self.subcommand}: missing {', '.join(missing)}")
        if self.subcommand in ("encrypt", "decrypt") and len(self.keys) != 1:
            raise UsageError(f"{self.subcommand}: exactly one --key is required")
        if self.k is not None and self.k < 1:
            raise UsageError("--k must be >= 1")
        if self.magnitude_bits is not None and self.magnitude_bits < 2:
            raise UsageError("--bits must be >= 2")
        if self.input is not None and self.output is not None and _same_file(self.input, self.output):
            raise UsageError("output path must differ from input path")
        if self.subcommand == "analyze":
            self._check_analysis()

    def _check_analysis(self) -> None:
        wanted = {"bruteforce": 1, "ambiguity": 1, "reuse": 2, "stats": 1}[self.analysis]
        if len(self.ciphertexts) != wanted:
            raise UsageError(f"analyze {self.analysis}: expected {wanted} --cipher path(s)")
        if self.analysis in ("bruteforce", "stats") and self.plaintext is None:
            raise UsageError(f"analyze {self.analysis}: --plain is required")
        if min(self.nabla_max, self.delta_max, self.p0_max, self.jobs, self.budget) < 1:
            raise UsageError("keyspace bounds, --budget and --jobs must be >= 1")


def _same_file(a: Path, b: Path) -> bool:
    try:
        return a.resolve() == b.resolve() or (b.exists() and os.path.samefile(a, b))
    except OSError:
        return False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nablacipher", description="Measurement cipher toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="generate a random key file")
    p.add_argument("--k", type=int, required=True, help="number of radix elements")
    p.add_argument("--bits", type=int, required=True, dest="magnitude_bits", help="bit size of random entries")
    p.add_argument("--out", type=Path, required=True, dest="output")
    p.add_argument("--seed", type=int, help="deterministic generator (tests only, not secure)")

    for name, what in (("encrypt", "a file"), ("decrypt", "a ciphertext file")):
        p = sub.add_parser(name, help=f"{name} {what}")
        p.add_argument("--key", type=Path, required=True, action="append", dest="keys")
        p.add_argument("--in", type=Path, required=True, dest="input")
        p.add_argument("--out", type=Path, required=True, dest="output")

    p = sub.add_parser("analyze", help="run a cryptanalysis experiment")
    p.add_argument("analysis", choices=_ANALYSES)
    p.add_argument("--cipher", type=Path, action="append", dest="ciphertexts", default=[])
    p.add_argument("--plain", type=Path, dest="plaintext")
    p.add_argument("--k", type=int, help="key length to enumerate (default: from ciphertext)")
    p.add_argument("--nabla-max", type=int, default=8)
    p.add_argument("--delta-max", type=int, default=4)
    p.add_argument("--p0-max", type=int, default=4)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", type=Path, help="also write key=value lines to this file")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> CommandConfig:
    ns = vars(build_parser().parse_args(argv))
    known = CommandConfig.__dataclass_fields__
    config = CommandConfig(**{k: v for k, v in ns.items() if k in known and v is not None})
    config.check()
    return config


def write_atomic(path: Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _keygen(config: CommandConfig) -> None:
    rng = random.Random(config.seed) if config.seed is not None else None
    key = keygen(config.k, config.magnitude_bits, rng)
    write_atomic(config.output, dump_key(key))


def _encrypt(config: CommandConfig) -> None:
    key = parse_key(config.keys[0].read_bytes())
    p = plain_from_bytes(config.input.read_bytes())
    write_atomic(config.output, dump_ciphertext(encrypt(p, key)))


def _decrypt(config: CommandConfig) -> None:
    key = parse_key(config.keys[0].read_bytes())
    c = parse_ciphertext(config.input.read_bytes())
    write_atomic(config.output, bytes_from_plain(decrypt(c, key)))


def _analyze(config: CommandConfig) -> None:
    cts = [parse_ciphertext(path.read_bytes()) for path in config.ciphertexts]
    if config.analysis == "reuse":
        records = analysis.reuse_leakage(*cts)
        fields = {f"gcd_{r.index}": to_decimal(r.gcd) for r in records}
        fields["leaking_indices"] = ",".join(str(r.index) for r in records if r.leaks)
        title = "key reuse leakage"
    elif config.analysis == "stats":
        p = plain_from_bytes(config.plaintext.read_bytes())
        s = analysis.ciphertext_stats(cts[0], p)
        fields = {
            "expansion_ratio": "undefined" if s.expansion_ratio is None else repr(s.expansion_ratio),
            "value_bits": ",".join(map(str, s.value_bits)),
            "total_value_bits": str(s.total_value_bits),
            "plaintext_bits": str(s.plaintext_bits),
            "serialized_bytes": str(s.serialized_bytes),
            "chi_square": f"{s.chi_square:.6f}",
        }
        title = "ciphertext statistics"
    else:
        c = cts[0]
        space = analysis.KeySpace(config.k or c.k, config.nabla_max, config.delta_max, config.p0_max)
        opts = dict(budget=config.budget, jobs=config.jobs)
        if config.analysis == "bruteforce":
            p = plain_from_bytes(config.plaintext.read_bytes())
            report = analysis.bruteforce_known_plaintext(p, c, space, **opts)
            title = "known-plaintext brute force"
        else:
            report = analysis.ciphertext_only_ambiguity(c, space, **opts)
            title = "ciphertext-only ambiguity"
        fields = analysis.report_fields(report)
    sys.stdout.write(analysis.format_report(title, fields))
    if config.report is not None:
        body = "".join(f"{name}={value}\n" for name, value in fields.items())
        write_atomic(config.report, body.encode("utf-8"))


_HANDLERS = {"keygen": _keygen, "encrypt": _encrypt, "decrypt": _decrypt, "analyze": _analyze}


def run(config: CommandConfig) -> int:
    try:
        config.check()
        _HANDLERS[config.subcommand](config)
    except UsageError as exc:
        print(f"nablacipher: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"nablacipher: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NablaError as exc:
        print(f"nablacipher: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except OSError as exc:
        print(f"nablacipher: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"nablacipher: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
