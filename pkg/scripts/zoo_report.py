"""Recompute the invariant table of every builtin and compare it with the frozen expectations."""

import sys
import time

from foliate import zoo
from foliate.lichnerowicz import betti, twisted_betti
from foliate.signature import basic_signature


def main() -> int:
    bad = 0
    for e in zoo.all_entries():
        t = time.perf_counter()
        b = e.model.basic
        got = {"basic_betti": betti(b), "twisted_betti": twisted_betti(b),
               "taut": not any(e.model.mean_curvature.kappa_b_coords),
               "sigma": basic_signature(b).sigma if e.model.oriented and b.q % 2 == 0 else None}
        diff = {k: (v, e.expected.get(k)) for k, v in got.items() if e.expected.get(k) != v}
        bad += bool(diff)
        status = "ok" if not diff else f"MISMATCH {diff}"
        print(f"{e.name:22s} {got['basic_betti']!s:18s} {got['twisted_betti']!s:18s} "
              f"taut={got['taut']!s:5s} sigma={got['sigma']!s:4s} {time.perf_counter() - t:6.2f}s  {status}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
