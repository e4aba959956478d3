"""Generic Morse disks: compare the rank of pi1 of the orbit with the number of
internal edges and report the distribution.

    python3 scripts/generic_morse_experiment.py --n 500
"""

from __future__ import annotations

import argparse
from collections import Counter

from surforbit import corpus
from surforbit import groupexpr as gx
from surforbit import orbitcalc as oc
from surforbit import reebmodel as rm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=None)
    a = ap.parse_args()

    rng = corpus.default_rng(a.seed)
    ranks = Counter()
    bad = 0
    for _ in range(a.n):
        m = corpus.generic_morse_disk(rng)
        r = oc.compute(m)
        k = rm.pi0_delta_rank(m, m.X)
        rank = gx.free_rank(r.pi1_orbit)
        ok = gx.in_family(r.pi1_orbit, "ccZ") and rank == k == r.homotopy.weak_equiv_torus_rank
        bad += not ok
        ranks[rank] += 1
    print("rank  count")
    for k in sorted(ranks):
        print(f"{k:>4}  {ranks[k]}")
    print(f"{a.n - bad}/{a.n} models satisfy pi1 = Z^k with k = internal edges")


if __name__ == "__main__":
    main()
