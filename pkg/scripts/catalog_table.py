"""Print the bundled literature maps with built and published viseme:phoneme counts."""

import argparse

from p2v.visemes import compression_factor, counts, load_catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mismatches", action="store_true", help="only rows that disagree")
    args = ap.parse_args()

    cat = load_catalog()
    print(f"{'map':<22} {'built':>7} {'cf':>7}   {'published':>9} {'cf':>5}")
    for m in cat:
        nv, np_ = counts(m)
        pv, pp, pcf = cat.published(m.name)
        same = (nv, np_) == (pv, pp)
        if args.mismatches and same:
            continue
        flag = "" if same else "  *"
        print(f"{m.name:<22} {nv:>3}:{np_:<3} {compression_factor(m):7.4f}   "
              f"{pv:>4}:{pp:<4} {pcf:5.2f}{flag}")


if __name__ == "__main__":
    main()
