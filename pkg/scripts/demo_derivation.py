"""Run all four derivation variants on the seven-label demo matrix and print the maps."""

import argparse
import logging

from p2v.derivation import VARIANTS, DerivationConfig, derive
from p2v.scoring import ConfusionMatrix
from p2v.transcripts import PhonemeInventory
from p2v.visemes import format_partition

LABELS = ["P1", "P2", "P3", "P4", "P5", "P6", "P7"]
ROWS = [
    [1, 0, 0, 0, 0, 0, 4],
    [0, 0, 0, 2, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 1],
    [0, 2, 1, 0, 2, 0, 0],
    [3, 0, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 4, 0],
    [1, 0, 3, 0, 0, 0, 1],
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-confusion", type=int, default=1)
    ap.add_argument("-v", "--verbose", action="store_true", help="log each relaxation merge")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    inv = PhonemeInventory.from_pairs([(x, "c") for x in LABELS])
    cm = ConfusionMatrix.from_rows(LABELS, ROWS)
    for v in VARIANTS:
        trace = []
        m = derive(cm, DerivationConfig(v, inv, args.min_confusion), trace=trace)
        print(f"{v}: {format_partition(members for _, members in m.classes)}")
        for ev in trace:
            scores = ", ".join(f"{k}={s}" for k, s in ev.scores.items())
            print(f"    {ev.phoneme}: {ev.source} -> {ev.target} ({scores})")


if __name__ == "__main__":
    main()
