#!/usr/bin/env python3
"""Mean ciphertext expansion for 1 KiB plaintexts across key shapes."""
import argparse

from nablacipher.analysis import expansion_monte_carlo


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'k':>4}{'bits':>6}{'mean ratio':>14}")
    for k in (1, 4, 16):
        for bits in (8, 32, 64, 256):
            ratio = expansion_monte_carlo(args.trials, args.size, k, bits, args.seed)
            print(f"{k:>4}{bits:>6}{ratio:>14.6f}")


if __name__ == "__main__":
    main()
