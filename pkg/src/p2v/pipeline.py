"""Desk-scale end-to-end run: simulate -> score -> derive -> compare.

Each synthetic speaker gets a channel whose confusions live inside a random
planted grouping of the vocabulary's phonemes. A training pass produces the
phoneme confusion matrix the B1-B4 maps are derived from; a second,
independently seeded pass is scored at viseme level under every map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .channel import ChannelModel, simulate
from .derivation import VARIANTS, DerivationConfig, derive
from .scoring import HTK_COSTS, AlignCosts, align_transcripts, confusion_from_alignments, score
from .stats import ScoreGrid, compare_report
from .transcripts import Level, PronunciationDict, Transcript, parse_dictionary
from .visemes import apply_map, compression_factor, default_inventory, load_catalog, pair_maps


@dataclass
class PipelineConfig:
    speakers: int = 4
    repeats: int = 7
    groups: int = 6
    p_correct: float = 0.55
    p_del: float = 0.02
    p_ins: float = 0.02
    seed: int = 2017
    costs: AlignCosts = HTK_COSTS
    baseline: tuple[str, str] | None = ("lee-vowels", "lee-consonants")


@dataclass
class PipelineResult:
    rows: list = field(default_factory=list)  # (speaker, variant, C, A, CF)
    report: str = ""

    def to_csv(self) -> str:
        lines = ["speaker,variant,C,A,CF"]
        lines += [f"{s},{v},{c:.4f},{a:.4f},{cf:.4f}" for s, v, c, a, cf in self.rows]
        return "\n".join(lines) + "\n"


def alphabet_dictionary(inventory=None) -> PronunciationDict:
    inv = inventory or default_inventory()
    text = (resources.files("p2v") / "data" / "alphabet.txt").read_text(encoding="utf-8")
    return parse_dictionary(text, inv)


def _planted_groups(phonemes, n_groups, rng):
    order = list(rng.permutation(len(phonemes)))
    groups = [[] for _ in range(min(n_groups, len(phonemes)))]
    for i, idx in enumerate(order):
        groups[i % len(groups)].append(phonemes[idx])
    return groups


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    inv = default_inventory()
    d = alphabet_dictionary(inv)
    words = sorted(d.entries)
    ref = Transcript(Level.PHONEME, tuple(d.first(w) for _ in range(cfg.repeats) for w in words))
    phonemes = inv.sort({p for u in ref for p in u})

    baseline = None
    if cfg.baseline is not None:
        cat = load_catalog(inv)
        baseline = pair_maps(cat.get(cfg.baseline[0]), cat.get(cfg.baseline[1]), inv)

    result = PipelineResult()
    grid_rows = []
    methods = list(VARIANTS) + ([baseline.name] if baseline is not None else [])
    for s in range(cfg.speakers):
        speaker = f"S{s + 1}"
        rng = np.random.Generator(np.random.PCG64(cfg.seed + 7919 * (s + 1)))
        groups = _planted_groups(phonemes, cfg.groups, rng)
        channel = ChannelModel.block(groups, cfg.p_correct, cfg.p_del, cfg.p_ins,
                                     seed=int(rng.integers(2 ** 32)))
        train = simulate(ref, channel)
        cm = confusion_from_alignments(align_transcripts(ref, train, cfg.costs), phonemes)
        test_hyp = simulate(ref, channel.with_seed(int(rng.integers(2 ** 32))))
        maps = [derive(cm, DerivationConfig(v, inv), name=v) for v in VARIANTS]
        if baseline is not None:
            maps.append(baseline)
        row = []
        for m in maps:
            st = score(align_transcripts(apply_map(m, ref), apply_map(m, test_hyp), cfg.costs))
            cf = compression_factor(m)
            result.rows.append((speaker, m.name, st.C, st.A, cf))
            row.append(st.C)
        grid_rows.append(row)
    if cfg.speakers >= 2:
        grid = ScoreGrid(tuple(methods), tuple(f"S{s + 1}" for s in range(cfg.speakers)),
                         np.array(grid_rows))
        result.report = compare_report(grid)
    return result
