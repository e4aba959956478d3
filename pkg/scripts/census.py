"""Realize every sequence of ssZBtPt up to a given depth and recompute it from the model.

    python3 scripts/census.py --depth 2 --param 2
"""

from __future__ import annotations

import argparse
import random

from surforbit import corpus
from surforbit import orbitcalc as oc
from surforbit import seqcalc as sc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="ssZBtPt")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--param", type=int, default=2)
    ap.add_argument("--samples", type=int, default=3000,
                    help="random simple models to draw for the hit count")
    a = ap.parse_args()

    targets = sc.enumerate_seq_family(a.family, a.depth, a.param)
    ok = 0
    for s in targets:
        model = corpus.realize_sequence(s)
        got = oc.compute(model).seq
        hit = sc.seq_equiv(got, s)
        ok += hit
        print(f"{'ok ' if hit else 'BAD'}  {model.surface.kind:<8}  {sc.build_script(s)}")
    print(f"realized {ok}/{len(targets)} sequences of {a.family}, depth <= {a.depth}")

    # how many of them does random sampling of simple models reach?
    rng: random.Random = corpus.default_rng()
    keys = {sc.canonical(s): 0 for s in targets}
    for i in range(a.samples):
        m = corpus.simple_morse_disk(rng) if i % 2 else corpus.simple_morse_cylinder(rng)
        k = sc.canonical(oc.compute(m).seq)
        if k in keys:
            keys[k] += 1
    hit = sum(1 for v in keys.values() if v)
    print(f"random simple models reached {hit}/{len(keys)} of them in {a.samples} draws")


if __name__ == "__main__":
    main()
