#!/usr/bin/env python3
"""Count ciphertext-only ambiguity over a family of toy keyspaces.

For each space, a key is drawn from inside it, a random one-byte plaintext
is encrypted, and every key in the space is tried as a decryption key.
"""
import argparse
import random

from nablacipher.analysis import KeySpace, ciphertext_only_ambiguity
from nablacipher.cipher import encrypt
from nablacipher.numeral import Plainvalue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    spaces = [KeySpace(1, 1, 8, 8), KeySpace(2, 8, 4, 4), KeySpace(2, 16, 4, 4), KeySpace(3, 8, 3, 3)]
    print(f"{'space':<28}{'size':>10}{'keys ok':>10}{'plaintexts':>12}")
    for space in spaces:
        for _ in range(args.trials):
            key = space.key_at(rng.randrange(space.size))
            p = Plainvalue(rng.getrandbits(8), 8)
            report = ciphertext_only_ambiguity(encrypt(p, key), space, jobs=args.jobs)
            label = f"k={space.k} n<={space.nabla_max} d<={space.delta_max} p<={space.p0_max}"
            print(f"{label:<28}{space.size:>10}{report.consistent_keys:>10}{report.distinct_plaintexts:>12}")


if __name__ == "__main__":
    main()
