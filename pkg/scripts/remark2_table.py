"""Smallest admissible prime and base genus for the small certified triples.

Also reports the smallest prime power congruent to -1 mod k, to confirm
the prime found is minimal among prime powers.

    python scripts/remark2_table.py [--rank D]
"""

import argparse
import time

from dessinaut.triangle import Triple, find_q, modulus_k, smallest_prime_power_residue

TRIPLES = [Triple(2, 3, 13), Triple(2, 3, 21), Triple(2, 4, 9), Triple(4, 6, 12),
           Triple(2, 3, 17), Triple(2, 3, 19), Triple(7, 11, 13), Triple(8, 9, 10)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rank", type=int, default=0, help="required lower bound on the genus")
    args = ap.parse_args()
    print("%-12s %6s %8s %8s %6s %10s" % ("triple", "k", "ppower", "q", "g", "ms"))
    for t in TRIPLES:
        s = time.perf_counter()
        r = find_q(t, args.rank)
        pp = smallest_prime_power_residue(modulus_k(t), r.q)
        ms = 1000 * (time.perf_counter() - s)
        print("%-12s %6d %8d %8d %6d %10.2f" % (t, r.k, pp, r.q, r.g, ms))


if __name__ == "__main__":
    main()
