#!/usr/bin/env python3
"""Sweep the signature classifier against the exhaustive orbit search.

Enumerates all reachable canonical systems over a small prime field up
to the given sizes, compares every pair of matching shape with both
deciders, and reports agreement plus wall-clock time.  Also checks a
handful of randomly transformed representatives, where the orbit search
must find the witness triple constructively.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ringsys import (
    PrimeField,
    RingMatrix,
    certificate_from_action,
    feedback_equivalent_pairs_bruteforce,
    invert,
    orbit_crosscheck,
)


def random_transformed_checks(p: int, rng: random.Random, count: int) -> int:
    ring = PrimeField(p)
    found = 0
    for _ in range(count):
        n, m = rng.randint(1, 3), rng.randint(1, 2)
        a = RingMatrix.from_rows(ring, [[rng.randrange(p) for _ in range(n)] for _ in range(n)], cols=n)
        b = RingMatrix.from_rows(ring, [[rng.randrange(p) for _ in range(m)] for _ in range(n)], cols=m)
        while True:
            pm = RingMatrix.from_rows(ring, [[rng.randrange(p) for _ in range(n)] for _ in range(n)], cols=n)
            if invert(pm) is not None:
                break
        while True:
            qm = RingMatrix.from_rows(ring, [[rng.randrange(p) for _ in range(m)] for _ in range(m)], cols=m)
            if invert(qm) is not None:
                break
        km = RingMatrix.from_rows(ring, [[rng.randrange(p) for _ in range(n)] for _ in range(m)], cols=n)
        certificate_from_action(a, b, pm, km, qm)
        a2 = pm @ (a + b @ km) @ invert(pm)
        b2 = pm @ b @ qm
        if not feedback_equivalent_pairs_bruteforce(a, b, a2, b2):
            raise SystemExit(f"orbit search missed a constructed witness (n={n}, m={m})")
        found += 1
    return found


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--field", type=int, default=2, choices=[2, 3])
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--max-m", type=int, default=2)
    parser.add_argument("--bound", type=int, default=1_000_000)
    parser.add_argument("--transformed", type=int, default=10, help="extra constructive checks")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    start = time.monotonic()
    records = orbit_crosscheck(p=args.field, max_n=args.max_n, max_m=args.max_m, bound=args.bound)
    for r in records:
        mark = "ok" if r.agree else "DISAGREE"
        print(
            f"n={r.n} m={r.m}  {str(r.left):>10} vs {str(r.right):<10}"
            f"  classifier={r.classifier!s:<5} oracle={r.oracle!s:<5} [{mark}]"
        )
    disagreements = sum(1 for r in records if not r.agree)
    constructive = 0
    if args.field == 2 and args.transformed:
        constructive = random_transformed_checks(args.field, random.Random(args.seed), args.transformed)
    elapsed = time.monotonic() - start
    print(
        f"{len(records)} comparisons, {disagreements} disagreements, "
        f"{constructive} constructive witnesses, {elapsed:.2f}s"
    )
    return 0 if disagreements == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
