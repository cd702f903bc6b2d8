#!/usr/bin/env python3
"""Recover deltaQ from a handful of ciphertexts encrypted under one key.

Every coordinate c_i is a multiple of deltaQ_i, so the running gcd over
several messages converges to deltaQ_i (times a small cofactor).
"""
import argparse
import math
import random

from nablacipher.analysis import reuse_leakage
from nablacipher.cipher import encrypt, keygen
from nablacipher.numeral import plain_from_bytes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--messages", type=int, default=8)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--bits", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    key = keygen(args.k, args.bits, rng)
    cts = [encrypt(plain_from_bytes(rng.randbytes(32)), key) for _ in range(args.messages)]
    acc = [0] * args.k
    for c1, c2 in zip(cts, cts[1:]):
        acc = [math.gcd(a, r.gcd) for a, r in zip(acc, reuse_leakage(c1, c2))]
    for i, (g, dq) in enumerate(zip(acc, key.deltaQ), start=1):
        tag = "exact" if g == dq else f"x{g // dq}" if g else "no data"
        print(f"index {i}: gcd={g} deltaQ={dq} ({tag})")


if __name__ == "__main__":
    main()
