"""Reference/hypothesis alignment, correctness and accuracy, confusion matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, EmptyPair, EmptyReference, LabelMismatch, UnknownLabel
from .transcripts import Transcript

HIT, SUB, DEL, INS = "hit", "sub", "del", "ins"
DEL_COLUMN = "<DEL>"
INS_ROW = "<INS>"


@dataclass(frozen=True)
class AlignCosts:
    substitution: int
    insertion: int
    deletion: int
    mode: str = "custom"

    def __post_init__(self):
        if min(self.substitution, self.insertion, self.deletion) < 0:
            raise ValueError("alignment costs must be non-negative")


# HResults' default penalties
HTK_COSTS = AlignCosts(10, 7, 7, "htk")
UNIT_COSTS = AlignCosts(1, 1, 1, "unit")


def costs_for(mode: str) -> AlignCosts:
    try:
        return {"htk": HTK_COSTS, "unit": UNIT_COSTS}[mode]
    except KeyError:
        raise ValueError(f"unknown cost mode {mode!r}") from None


@dataclass(frozen=True)
class AlignOp:
    kind: str
    ref: str | None
    hyp: str | None


@dataclass(frozen=True)
class Alignment:
    ops: tuple[AlignOp, ...]

    def ref_labels(self) -> list[str]:
        return [op.ref for op in self.ops if op.kind != INS]

    def hyp_labels(self) -> list[str]:
        return [op.hyp for op in self.ops if op.kind != DEL]

    def count(self, kind: str) -> int:
        return sum(1 for op in self.ops if op.kind == kind)

    def cost(self, costs: AlignCosts) -> int:
        per = {HIT: 0, SUB: costs.substitution, DEL: costs.deletion, INS: costs.insertion}
        return sum(per[op.kind] for op in self.ops)

    def stats(self) -> "AlignmentStats":
        return AlignmentStats(N=len(self.ref_labels()), H=self.count(HIT), S=self.count(SUB),
                              D=self.count(DEL), I=self.count(INS))


def align(ref: Sequence[str], hyp: Sequence[str], costs: AlignCosts = HTK_COSTS) -> Alignment:
    """Minimum-cost alignment of ``hyp`` against ``ref``.

    Among co-optimal alignments the backtrace (run from the end of both
    strings) prefers the diagonal move, then a deletion, then an insertion.
    """
    ref, hyp = list(ref), list(hyp)
    n, m = len(ref), len(hyp)
    if n == 0 and m == 0:
        raise EmptyPair("reference and hypothesis are both empty")
    sub, ins, dele = costs.substitution, costs.insertion, costs.deletion
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = i * dele
    for j in range(1, m + 1):
        d[0][j] = j * ins
    for i in range(1, n + 1):
        row, prev, r = d[i], d[i - 1], ref[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (0 if r == hyp[j - 1] else sub)
            row[j] = min(diag, prev[j] + dele, row[j - 1] + ins)

    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            same = ref[i - 1] == hyp[j - 1]
            if d[i][j] == d[i - 1][j - 1] + (0 if same else sub):
                ops.append(AlignOp(HIT if same else SUB, ref[i - 1], hyp[j - 1]))
                i, j = i - 1, j - 1
                continue
        if i > 0 and d[i][j] == d[i - 1][j] + dele:
            ops.append(AlignOp(DEL, ref[i - 1], None))
            i -= 1
        else:
            ops.append(AlignOp(INS, None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return Alignment(tuple(ops))


@dataclass(frozen=True)
class AlignmentStats:
    N: int
    H: int
    S: int
    D: int
    I: int  # noqa: E741

    @property
    def correctness_ratio(self) -> Fraction:
        if self.N == 0:
            raise EmptyReference("no reference labels")
        return Fraction(self.N - self.D - self.S, self.N)

    @property
    def accuracy_ratio(self) -> Fraction:
        if self.N == 0:
            raise EmptyReference("no reference labels")
        return Fraction(self.N - self.D - self.S - self.I, self.N)

    @property
    def C(self) -> float:
        return float(self.correctness_ratio)

    @property
    def A(self) -> float:
        return float(self.accuracy_ratio)

    def __add__(self, other: "AlignmentStats") -> "AlignmentStats":
        return AlignmentStats(self.N + other.N, self.H + other.H, self.S + other.S,
                              self.D + other.D, self.I + other.I)


def score(alignments: Iterable[Alignment]) -> AlignmentStats:
    total = AlignmentStats(0, 0, 0, 0, 0)
    n = 0
    for a in alignments:
        total = total + a.stats()
        n += 1
    if n == 0 or total.N == 0:
        raise EmptyReference("scoring needs at least one reference label")
    return total


def align_transcripts(ref: Transcript, hyp: Transcript,
                      costs: AlignCosts = HTK_COSTS) -> list[Alignment]:
    if len(ref) != len(hyp):
        raise DataError(f"reference has {len(ref)} utterances, hypothesis has {len(hyp)}")
    out = []
    for r, h in zip(ref, hyp):
        if not r and not h:
            out.append(Alignment(()))
        else:
            out.append(align(r, h, costs))
    return out


def scores_csv(alignments: Sequence[Alignment]) -> str:
    """Per-utterance counts plus a TOTAL row carrying C and A (4 decimals)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["utterance_id", "N", "H", "S", "D", "I", "C", "A"])
    for i, a in enumerate(alignments):
        s = a.stats()
        c, acc = (f"{s.C:.4f}", f"{s.A:.4f}") if s.N else ("", "")
        w.writerow([i, s.N, s.H, s.S, s.D, s.I, c, acc])
    t = score(alignments)
    w.writerow(["TOTAL", t.N, t.H, t.S, t.D, t.I, f"{t.C:.4f}", f"{t.A:.4f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed ``[true][predicted]`` with deletion/insertion margins."""

    labels: tuple[str, ...]
    counts: np.ndarray
    del_margin: np.ndarray
    ins_margin: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        k = len(labels)
        if len(set(labels)) != k:
            raise DataError("duplicate labels in confusion matrix")
        counts = np.array(self.counts, dtype=np.int64).reshape(k, k)
        dm = np.array(self.del_margin, dtype=np.int64).reshape(k)
        im = np.array(self.ins_margin, dtype=np.int64).reshape(k)
        if (counts < 0).any() or (dm < 0).any() or (im < 0).any():
            raise DataError("confusion counts must be non-negative")
        for arr in (counts, dm, im):
            arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "del_margin", dm)
        object.__setattr__(self, "ins_margin", im)
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(labels)})

    @classmethod
    def zeros(cls, labels: Sequence[str]) -> "ConfusionMatrix":
        k = len(labels)
        return cls(tuple(labels), np.zeros((k, k)), np.zeros(k), np.zeros(k))

    @classmethod
    def from_rows(cls, labels: Sequence[str], rows, del_margin=None, ins_margin=None):
        k = len(labels)
        return cls(tuple(labels), np.asarray(rows),
                   np.zeros(k) if del_margin is None else del_margin,
                   np.zeros(k) if ins_margin is None else ins_margin)

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return (self.labels == other.labels and np.array_equal(self.counts, other.counts)
                and np.array_equal(self.del_margin, other.del_margin)
                and np.array_equal(self.ins_margin, other.ins_margin))

    __hash__ = None

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def get(self, true: str, pred: str) -> int:
        return int(self.counts[self.index(true), self.index(pred)])

    @property
    def n_reference(self) -> int:
        return int(self.counts.sum() + self.del_margin.sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + list(self.labels) + [DEL_COLUMN])
        for i, lab in enumerate(self.labels):
            w.writerow([lab] + [int(x) for x in self.counts[i]] + [int(self.del_margin[i])])
        w.writerow([INS_ROW] + [int(x) for x in self.ins_margin] + [0])
        return buf.getvalue()


def parse_confusion_csv(text: str) -> ConfusionMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError("empty confusion CSV")
    header = [c.strip() for c in rows[0]]
    has_del = header[-1] == DEL_COLUMN
    labels = header[1:-1] if has_del else header[1:]
    labels = [x.upper() for x in labels]
    k = len(labels)
    counts = np.zeros((k, k), dtype=np.int64)
    dm = np.zeros(k, dtype=np.int64)
    im = np.zeros(k, dtype=np.int64)
    seen = set()
    width = k + (1 if has_del else 0)
    for r in rows[1:]:
        name = r[0].strip()
        try:
            values = [int(c) for c in r[1:]]
        except ValueError:
            raise DataError(f"non-integer count in row {name!r}") from None
        if len(values) != width:
            raise DataError(f"row {name!r} has {len(values)} values, expected {width}")
        if name == INS_ROW:
            im[:] = values[:k]
            continue
        name = name.upper()
        if name not in labels:
            raise UnknownLabel(name)
        if name in seen:
            raise DataError(f"duplicate row {name!r}")
        seen.add(name)
        i = labels.index(name)
        counts[i] = values[:k]
        if has_del:
            dm[i] = values[k]
    return ConfusionMatrix(tuple(labels), counts, dm, im)


def confusion_from_alignments(alignments: Iterable[Alignment],
                              labels: Sequence[str]) -> ConfusionMatrix:
    """Hits on the diagonal, substitutions off it; deletions and insertions in the margins."""
    index = {x: i for i, x in enumerate(labels)}
    k = len(labels)
    counts = np.zeros((k, k), dtype=np.int64)
    dm = np.zeros(k, dtype=np.int64)
    im = np.zeros(k, dtype=np.int64)

    def ix(label):
        try:
            return index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    for a in alignments:
        for op in a.ops:
            if op.kind in (HIT, SUB):
                counts[ix(op.ref), ix(op.hyp)] += 1
            elif op.kind == DEL:
                dm[ix(op.ref)] += 1
            else:
                im[ix(op.hyp)] += 1
    return ConfusionMatrix(tuple(labels), counts, dm, im)


def sum_confusions(ms: Sequence[ConfusionMatrix]) -> ConfusionMatrix:
    if not ms:
        raise DataError("nothing to sum")
    labels = ms[0].labels
    for m in ms[1:]:
        if m.labels != labels:
            raise LabelMismatch("confusion matrices have different label lists")
    return ConfusionMatrix(labels, sum(m.counts for m in ms), sum(m.del_margin for m in ms),
                           sum(m.ins_margin for m in ms))


def per_class_precision(m: ConfusionMatrix) -> dict[str, float]:
    """Pr{v | v-hat}: diagonal over column total. Never-predicted labels are left out."""
    col = m.counts.sum(axis=0)
    return {lab: float(m.counts[i, i]) / float(col[i])
            for i, lab in enumerate(m.labels) if col[i] > 0}
