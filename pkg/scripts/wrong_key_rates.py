#!/usr/bin/env python3
"""How often does a random wrong key get rejected, as a function of key magnitude?"""
import argparse
import random

from nablacipher.analysis import layer_wrong_key_rate
from nablacipher.cipher import decrypt, encrypt, keygen
from nablacipher.errors import NablaError
from nablacipher.numeral import plain_from_bytes


def decrypt_rejection_rate(trials, k, bits, rng):
    rejected = 0
    for _ in range(trials):
        p = plain_from_bytes(rng.randbytes(rng.randint(1, 64)))
        c = encrypt(p, keygen(k, bits, rng))
        try:
            decrypt(c, keygen(k, bits, rng))
        except NablaError:
            rejected += 1
    return rejected / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'bits':>5}{'decrypt rejects':>18}{'unlayer rejects':>18}")
    for bits in (3, 4, 6, 8, 16, 32, 64):
        d = decrypt_rejection_rate(args.trials, args.k, bits, rng)
        lay = layer_wrong_key_rate(args.trials, args.k, bits, seed=rng.randrange(2**32))
        print(f"{bits:>5}{d:>18.4f}{lay:>18.4f}")


if __name__ == "__main__":
    main()
