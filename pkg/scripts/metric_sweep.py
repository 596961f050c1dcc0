"""Sweep every frame model of the zoo along its metric homotopy and report invariants per sample."""

import sys
from fractions import Fraction

from foliate import zoo
from foliate.cli import sweep_doc


def main() -> int:
    samples = [Fraction(i, 8) for i in range(9)]
    varied = []
    for e in zoo.all_entries():
        if e.model.lie is None:
            continue
        doc = sweep_doc(e.model, samples)
        first = doc["rows"][0]
        print(f"{e.name:22s} samples={len(samples)} basic={first['basic_betti']} "
              f"twisted={first['twisted_betti']} sigma={first.get('sigma')} constant={doc['constant']}")
        if not doc["constant"]:
            varied.append(e.name)
    return 1 if varied else 0


if __name__ == "__main__":
    sys.exit(main())
