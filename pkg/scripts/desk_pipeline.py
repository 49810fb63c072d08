"""Desk-scale simulate -> score -> derive -> compare run over synthetic speakers.

Writes the per speaker/variant CSV to stdout (or --out) and the Friedman/Nemenyi
report to stderr (or --report).
"""

import argparse
import sys
from pathlib import Path

from p2v.pipeline import PipelineConfig, run_pipeline
from p2v.scoring import costs_for


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--speakers", type=int, default=12)
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--groups", type=int, default=6)
    ap.add_argument("--p-correct", type=float, default=0.55)
    ap.add_argument("--p-del", type=float, default=0.02)
    ap.add_argument("--p-ins", type=float, default=0.02)
    ap.add_argument("--costs", choices=["htk", "unit"], default="htk")
    ap.add_argument("--seed", type=int, default=2017)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--report", type=Path)
    args = ap.parse_args()

    cfg = PipelineConfig(speakers=args.speakers, repeats=args.repeats, groups=args.groups,
                         p_correct=args.p_correct, p_del=args.p_del, p_ins=args.p_ins,
                         seed=args.seed, costs=costs_for(args.costs))
    res = run_pipeline(cfg)
    if args.out:
        args.out.write_text(res.to_csv())
    else:
        sys.stdout.write(res.to_csv())
    if args.report:
        args.report.write_text(res.report)
    else:
        sys.stderr.write(res.report)


if __name__ == "__main__":
    main()
