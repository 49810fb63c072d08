"""Command-line entry point.

Machine-readable output (CSV, map files) goes to stdout or ``--out``; the
resolved configuration and any commentary go to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .channel import parse_channel, simulate
from .derivation import TIE_BREAK_VERSION, VARIANTS, DerivationConfig, derive
from .errors import DataError, InvariantViolation
from .pipeline import PipelineConfig, run_pipeline
from .scoring import align_transcripts, confusion_from_alignments, costs_for, parse_confusion_csv, scores_csv
from .stats import Q_TABLE_VERSION, compare_report, parse_scores_csv
from .transcripts import (
    Level,
    check_labels,
    parse_dictionary,
    parse_inventory,
    parse_transcript,
    words_to_phonemes,
)
from .visemes import (
    CATALOG_VERSION,
    apply_map,
    compression_factor,
    counts,
    default_inventory,
    format_cf,
    load_catalog,
    load_map,
    pair_maps,
    validate_map,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("p2v")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _inventory(args):
    if getattr(args, "inventory", None):
        return parse_inventory(_read(args.inventory))
    return default_inventory()


# ----------------------------------------------------------------- commands

def cmd_maps(args) -> int:
    inv = _inventory(args)
    if args.maps_cmd == "list":
        cat = load_catalog(inv)
        lines = ["name,kind,visemes,phonemes,cf,published"]
        for m in cat:
            nv, np_ = counts(m)
            lines.append(f"{m.name},{m.kind},{nv},{np_},{format_cf(compression_factor(m))},"
                         f"{m.meta.get('published', '')}")
        _write(None, "\n".join(lines) + "\n")
    elif args.maps_cmd == "show":
        m = load_map(args.name, inv)
        report = validate_map(m)
        for line in report.lines():
            log.warning("%s: %s", m.name, line)
        _write(None, m.to_text())
    elif args.maps_cmd == "cf":
        _write(None, format_cf(compression_factor(load_map(args.name, inv))) + "\n")
    elif args.maps_cmd == "pair":
        m = pair_maps(load_map(args.vowel, inv), load_map(args.consonant, inv), inv,
                      strict=args.strict)
        _write(args.out, m.to_text())
    return EXIT_OK


def cmd_transcribe(args) -> int:
    inv = _inventory(args)
    d = parse_dictionary(_read(args.dict), inv)
    words = parse_transcript(_read(args.words), Level.WORD)
    phones = words_to_phonemes(words, d)
    if args.map:
        out = apply_map(load_map(args.map, inv), phones, merge_repeats=args.merge_repeats)
    else:
        out = phones
    _write(args.out, out.to_text())
    return EXIT_OK


def cmd_score(args) -> int:
    level = Level(args.level)
    ref = parse_transcript(_read(args.ref), level)
    hyp = parse_transcript(_read(args.hyp), level)
    alignments = align_transcripts(ref, hyp, costs_for(args.costs))
    _write(args.out, scores_csv(alignments))
    if args.confusion_out:
        seen = ref.labels() | hyp.labels()
        if level is Level.PHONEME:
            inv = _inventory(args)
            check_labels(ref, inv)
            check_labels(hyp, inv)
            labels = inv.sort(seen)
        else:
            labels = sorted(seen)
        cm = confusion_from_alignments(alignments, labels)
        _write(args.confusion_out, cm.to_csv())
    return EXIT_OK


def cmd_derive(args) -> int:
    inv = _inventory(args)
    text = _read(args.confusion)
    cm = parse_confusion_csv(text)
    cfg = DerivationConfig(args.variant, inv, args.min_confusion)
    trace: list = []
    m = derive(cm, cfg, trace=trace, name=args.name or args.variant)
    report = validate_map(m)
    if not report.ok:
        raise InvariantViolation("; ".join(report.lines()))
    for ev in trace:
        log.info("merged %s into %s (%s)", ev.phoneme, ev.target,
                 ", ".join(f"{k}={v}" for k, v in ev.scores.items()))
    digest = hashlib.sha256(cm.to_csv().encode()).hexdigest()[:16]
    m = type(m)(m.name, m.classes, m.garbage, m.silence, m.inventory, m.kind, m.split, m.meta,
                (f"variant: {args.variant}", f"min-confusion: {args.min_confusion}",
                 f"matrix-sha256: {digest}", f"tie-break: {TIE_BREAK_VERSION}"))
    _write(args.out, m.to_text())
    return EXIT_OK


def cmd_compare(args) -> int:
    grid = parse_scores_csv(_read(args.scores))
    _write(args.out, compare_report(grid, args.alpha))
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = parse_channel(_read(args.channel))
    if args.seed is not None:
        model = model.with_seed(args.seed)
    ref = parse_transcript(_read(args.ref), args.level)
    _write(args.out, simulate(ref, model).to_text())
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = PipelineConfig(speakers=args.speakers, repeats=args.repeats, groups=args.groups,
                         p_correct=args.p_correct, p_del=args.p_del, p_ins=args.p_ins,
                         seed=2017 if args.seed is None else args.seed,
                         costs=costs_for(args.costs))
    result = run_pipeline(cfg)
    _write(args.out, result.to_csv())
    if args.report:
        _write(args.report, result.report)
    elif result.report:
        sys.stderr.write(result.report)
    return EXIT_OK


# ------------------------------------------------------------------ parsing

def _globals_parser(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--inventory", default=default, help="inventory file (default: bundled BEEP set)")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="no config echo or commentary on stderr")
    p.add_argument("--seed", type=int, default=default, help="random seed override")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _globals_parser(suppress=True)
    parser = argparse.ArgumentParser(prog="p2v", parents=[_globals_parser(suppress=False)],
                                     description="Phoneme-to-viseme map toolkit.")
    parser.add_argument("--version", action="version",
                        version=f"p2v {__version__} (catalog {CATALOG_VERSION}, q-table {Q_TABLE_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    maps = sub.add_parser("maps", parents=[common], help="literature map catalog")
    msub = maps.add_subparsers(dest="maps_cmd", required=True)
    msub.add_parser("list", parents=[common])
    p = msub.add_parser("show", parents=[common])
    p.add_argument("name")
    p = msub.add_parser("cf", parents=[common])
    p.add_argument("name")
    p = msub.add_parser("pair", parents=[common])
    p.add_argument("vowel")
    p.add_argument("consonant")
    p.add_argument("--strict", action="store_true", help="fail on any shared phoneme")
    p.add_argument("--out")
    maps.set_defaults(func=cmd_maps)

    p = sub.add_parser("transcribe", parents=[common], help="words -> phonemes (-> visemes)")
    p.add_argument("--words", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--map", help="catalog name or map file; output visemes")
    p.add_argument("--merge-repeats", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transcribe)

    p = sub.add_parser("score", parents=[common], help="align and score transcripts")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--level", choices=[lv.value for lv in Level], default="phoneme")
    p.add_argument("--costs", choices=["htk", "unit"], default="htk")
    p.add_argument("--confusion-out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("derive", parents=[common], help="derive a speaker-dependent map")
    p.add_argument("--confusion", required=True)
    p.add_argument("--variant", choices=VARIANTS, required=True)
    p.add_argument("--min-confusion", type=int, default=1)
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("compare", parents=[common], help="Friedman + Nemenyi CD report")
    p.add_argument("--scores", required=True)
    p.add_argument("--alpha", type=float, choices=[0.05, 0.10], default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[common], help="pass a transcript through a noisy channel")
    p.add_argument("--channel", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--level", choices=[lv.value for lv in Level], default="phoneme")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", parents=[common], help="simulate -> score -> derive -> compare")
    p.add_argument("--speakers", type=int, default=4)
    p.add_argument("--repeats", type=int, default=7)
    p.add_argument("--groups", type=int, default=6)
    p.add_argument("--p-correct", type=float, default=0.55)
    p.add_argument("--p-del", type=float, default=0.02)
    p.add_argument("--p-ins", type=float, default=0.02)
    p.add_argument("--costs", choices=["htk", "unit"], default="htk")
    p.add_argument("--report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pipeline)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="p2v: %(message)s", stream=sys.stderr, force=True)
    if not args.quiet:
        config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        sys.stderr.write("p2v: config " + json.dumps(config, sort_keys=True) + "\n")
    try:
        return args.func(args)
    except (DataError, OSError, UnicodeDecodeError) as e:
        sys.stderr.write(f"p2v: error: {e}\n")
        return EXIT_DATA
    except InvariantViolation as e:
        sys.stderr.write(f"p2v: internal invariant violated: {e}\n")
        return EXIT_INTERNAL
    except ValueError as e:
        sys.stderr.write(f"p2v: error: {e}\n")
        return EXIT_DATA
    except Exception as e:  # noqa: BLE001
        sys.stderr.write(f"p2v: internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
