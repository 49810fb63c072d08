"""Speaker-dependent viseme derivation from a phoneme confusion matrix.

Variants::

    B1  mixed vowels/consonants, strict
    B2  split vowels/consonants, strict
    B3  mixed, strict then relaxed
    B4  split, strict then relaxed

The strict pass groups phonemes that are pairwise confused (cliques of the
confusion graph), biggest group first. The relaxed pass then folds leftover
single-phoneme visemes into the viseme they are most confused with.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import EmptyConfusion, LabelMismatch, UnknownPhoneme
from .scoring import ConfusionMatrix
from .transcripts import PhonemeInventory
from .visemes import VisemeMap

log = logging.getLogger(__name__)

VARIANTS = ("B1", "B2", "B3", "B4")
TIE_BREAK_VERSION = "size>mass>lex/1"


@dataclass(frozen=True)
class DerivationConfig:
    variant: str
    inventory: PhonemeInventory
    min_confusion: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.min_confusion < 1:
            raise ValueError("min_confusion must be >= 1")

    @property
    def split(self) -> bool:
        return self.variant in ("B2", "B4")

    @property
    def relaxed(self) -> bool:
        return self.variant in ("B3", "B4")


class ConfusionGraph:
    """Undirected graph over non-silence matrix labels.

    Edge weight is ``counts[a][b] + counts[b][a]``; an edge exists when that
    total reaches ``min_confusion`` and, in split mode, both ends share a
    vowel/consonant class.
    """

    def __init__(self, m: ConfusionMatrix, inventory: PhonemeInventory,
                 min_confusion: int = 1, split: bool = False):
        self.inventory = inventory
        self.split = split
        self.min_confusion = min_confusion
        self.nodes = [x for x in m.labels if not inventory.is_silence(x)]
        idx = [m.index(x) for x in self.nodes]
        sub = m.counts[np.ix_(idx, idx)]
        self._w = sub + sub.T
        self._pos = {x: i for i, x in enumerate(self.nodes)}
        self.adj: dict[str, set[str]] = {x: set() for x in self.nodes}
        for i, a in enumerate(self.nodes):
            for j in range(i + 1, len(self.nodes)):
                b = self.nodes[j]
                if self._w[i, j] >= min_confusion and self.compatible(a, b):
                    self.adj[a].add(b)
                    self.adj[b].add(a)

    def compatible(self, a: str, b: str) -> bool:
        if not self.split:
            return True
        return self.inventory.class_of(a) == self.inventory.class_of(b)

    def weight(self, a: str, b: str) -> int:
        """Raw symmetric confusion count between two distinct labels."""
        return int(self._w[self._pos[a], self._pos[b]])

    def edge_weight(self, a: str, b: str) -> int:
        return self.weight(a, b) if b in self.adj[a] else 0

    def mass(self, group: Iterable[str]) -> int:
        g = sorted(group)
        return sum(self.weight(a, b) for i, a in enumerate(g) for b in g[i + 1:])


def mutually_confusable(g: ConfusionGraph, group: Iterable[str]) -> bool:
    group = list(dict.fromkeys(group))
    if len(group) < 2:
        raise ValueError("a candidate viseme needs at least two phonemes")
    for p in group:
        if p not in g.adj:
            raise ValueError(f"{p!r} is not a node of the confusion graph")
    return all(b in g.adj[a] for i, a in enumerate(group) for b in group[i + 1:])


def _best_clique(g: ConfusionGraph, nodes: set[str]) -> tuple[str, ...] | None:
    """Largest clique within ``nodes``; ties by confusion mass, then sorted names.

    Bron-Kerbosch with pivoting, pruned by the best size found so far.
    """
    best: list = [None, 0, 0]  # clique, size, mass

    def consider(clique):
        size = len(clique)
        key = tuple(sorted(clique))
        mass = g.mass(key)
        b, bsize, bmass = best
        if (size > bsize or (size == bsize and mass > bmass)
                or (size == bsize and mass == bmass and key < b)):
            best[:] = [key, size, mass]

    def expand(r, p, x):
        if len(r) + len(p) < best[1]:
            return
        if not p and not x:
            if len(r) >= 2:
                consider(r)
            return
        if not p:
            return
        pivot = max(sorted(p | x), key=lambda u: len(g.adj[u] & p))
        for v in sorted(p - g.adj[pivot]):
            nv = g.adj[v] & nodes
            expand(r | {v}, p & nv, x & nv)
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(nodes), frozenset())
    return best[0]


def _check_labels(m: ConfusionMatrix, inv: PhonemeInventory) -> None:
    if len(m.labels) == 0:
        raise EmptyConfusion("confusion matrix has no labels")
    for x in m.labels:
        if x not in inv and not inv.is_silence(x):
            raise UnknownPhoneme(x)


def _finish(name, groups, m, cfg, garbage, meta) -> VisemeMap:
    inv = cfg.inventory
    classes = tuple((f"V{i + 1:02d}", tuple(inv.sort(g))) for i, g in enumerate(groups))
    silence = {s.name for s in inv if s.is_silence} | {x for x in m.labels if inv.is_silence(x)}
    return VisemeMap(name, classes, frozenset(garbage), frozenset(silence), inv,
                     "combined", cfg.split, meta)


def _garbage(m: ConfusionMatrix, inv: PhonemeInventory, assigned: set[str]) -> set[str]:
    return {s.name for s in inv if not s.is_silence and s.name not in assigned}


def derive_strict(m: ConfusionMatrix, cfg: DerivationConfig, name: str | None = None) -> VisemeMap:
    inv = cfg.inventory
    _check_labels(m, inv)
    g = ConfusionGraph(m, inv, cfg.min_confusion, cfg.split)
    diag = {x: int(m.counts[m.index(x), m.index(x)]) for x in g.nodes}
    off = {x: sum(g.weight(x, y) for y in g.nodes if y != x) for x in g.nodes}

    groups: list[tuple[str, ...]] = []
    # never recognised and never confused: nothing to cluster on
    silent = {x for x in g.nodes if diag[x] == 0 and off[x] == 0}
    for x in g.nodes:
        if diag[x] > 0 and off[x] == 0:
            groups.append((x,))
    free = {x for x in g.nodes if x not in silent and (x,) not in groups}
    while True:
        clique = _best_clique(g, free)
        if clique is None:
            break
        groups.append(clique)
        free -= set(clique)
    groups.extend((x,) for x in g.nodes if x in free)

    assigned = {p for grp in groups for p in grp}
    meta = {"variant": cfg.variant, "tie-break": TIE_BREAK_VERSION}
    return _finish(name or f"{cfg.variant}-strict", groups, m, cfg, _garbage(m, inv, assigned), meta)


@dataclass(frozen=True)
class MergeEvent:
    phoneme: str
    source: str
    scores: dict = field(compare=False)  # viseme label -> total confusion
    target: str


def relax(strict_map: VisemeMap, m: ConfusionMatrix, cfg: DerivationConfig,
          trace: list | None = None, name: str | None = None) -> VisemeMap:
    """Fold confusable single-phoneme visemes into their most-confused viseme.

    Singletons are visited in creation order and targets are recomputed against
    the map as it stands, so an earlier merge can change a later choice. Ties
    go to the earliest-created viseme. Each merge is logged and, when ``trace``
    is given, appended to it as a `MergeEvent`.
    """
    inv = cfg.inventory
    _check_labels(m, inv)
    placed = set(strict_map.covered()) | strict_map.garbage | strict_map.silence
    for x in m.labels:
        if x not in placed:
            raise LabelMismatch(f"matrix label {x!r} is not in map {strict_map.name!r}")
    for x in strict_map.covered():
        if x not in m:
            raise LabelMismatch(f"map phoneme {x!r} is not a matrix label")

    g = ConfusionGraph(m, inv, cfg.min_confusion, cfg.split)
    current: dict[str, list[str]] = {label: list(members) for label, members in strict_map.classes}
    for label in list(current):
        members = current.get(label)
        if members is None or len(members) != 1:
            continue
        p = members[0]
        scores = {}
        for other, grp in current.items():
            if other == label or not grp:
                continue
            if cfg.split and not all(g.compatible(p, q) for q in grp):
                continue
            scores[other] = sum(g.edge_weight(p, q) for q in grp)
        if not scores:
            continue
        target = max(scores, key=lambda k: scores[k])  # first maximum = earliest created
        if scores[target] <= 0:
            continue
        log.info("relax: %s from %s -> %s (scores %s)", p, label, target,
                 ", ".join(f"{k}={v}" for k, v in scores.items()))
        if trace is not None:
            trace.append(MergeEvent(p, label, dict(scores), target))
        current[target].append(p)
        del current[label]

    groups = [tuple(v) for v in current.values()]
    meta = dict(strict_map.meta)
    meta["variant"] = cfg.variant
    return _finish(name or cfg.variant, groups, m, cfg, strict_map.garbage, meta)


def derive(m: ConfusionMatrix, cfg: DerivationConfig, trace: list | None = None,
           name: str | None = None) -> VisemeMap:
    strict = derive_strict(m, cfg, name=name)
    if not cfg.relaxed:
        meta = dict(strict.meta, variant=cfg.variant)
        return VisemeMap(name or cfg.variant, strict.classes, strict.garbage, strict.silence,
                         strict.inventory, strict.kind, cfg.split, meta)
    return relax(strict, m, cfg, trace=trace, name=name or cfg.variant)
