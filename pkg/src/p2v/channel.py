"""A seeded noisy recognizer channel for desk-scale pipeline tests.

Random source: numpy's PCG64 bit generator, seeded per utterance with
``seed ^ utterance_index``. Each gap (before the first token and after every
token) draws one uniform for the insertion decision and, on insertion, one
more for the inserted label. Each token draws one uniform against the
cumulative row ``[p_del, sub_probs[i, 0], sub_probs[i, 1], ...]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, UnknownLabel
from .transcripts import Transcript, normalize_token

TOL = 1e-9


@dataclass(frozen=True)
class ChannelModel:
    labels: tuple[str, ...]
    sub_probs: np.ndarray  # P(output=j, kept | input=i); row + p_del == 1
    p_del: np.ndarray
    p_ins: float
    ins_dist: np.ndarray
    seed: int = 0

    def __post_init__(self):
        labels = tuple(self.labels)
        k = len(labels)
        sub = np.array(self.sub_probs, dtype=float).reshape(k, k)
        pd = np.array(self.p_del, dtype=float).reshape(k)
        ins = np.array(self.ins_dist, dtype=float).reshape(k)
        if len(set(labels)) != k or k == 0:
            raise DataError("channel labels must be unique and non-empty")
        if (sub < 0).any() or (pd < 0).any() or (ins < 0).any():
            raise DataError("channel probabilities must be non-negative")
        bad = np.abs(sub.sum(axis=1) + pd - 1.0) > TOL
        if bad.any():
            raise DataError(f"substitution row + deletion must sum to 1 for {labels[int(np.argmax(bad))]}")
        if not 0.0 <= self.p_ins <= 0.5:
            raise DataError("p_ins must lie in [0, 0.5]")
        if abs(ins.sum() - 1.0) > TOL:
            raise DataError("insertion distribution must sum to 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DataError("seed must be a 64-bit unsigned integer")
        for arr in (sub, pd, ins):
            arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sub_probs", sub)
        object.__setattr__(self, "p_del", pd)
        object.__setattr__(self, "ins_dist", ins)
        object.__setattr__(self, "p_ins", float(self.p_ins))
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def identity(cls, labels, seed: int = 0) -> "ChannelModel":
        k = len(labels)
        return cls(tuple(labels), np.eye(k), np.zeros(k), 0.0, np.full(k, 1.0 / k), seed)

    @classmethod
    def block(cls, blocks, p_correct: float, p_del: float = 0.0, p_ins: float = 0.0,
              seed: int = 0) -> "ChannelModel":
        """Confusions only inside each block; off-diagonal mass spread evenly within the block."""
        labels = [x for b in blocks for x in b]
        k = len(labels)
        pos = {x: i for i, x in enumerate(labels)}
        sub = np.zeros((k, k))
        keep = 1.0 - p_del
        for b in blocks:
            for x in b:
                i = pos[x]
                if len(b) == 1:
                    sub[i, i] = keep
                    continue
                sub[i, i] = keep * p_correct
                for y in b:
                    if y != x:
                        sub[i, pos[y]] = keep * (1.0 - p_correct) / (len(b) - 1)
        return cls(tuple(labels), sub, np.full(k, p_del), p_ins, np.full(k, 1.0 / k), seed)

    def with_seed(self, seed: int) -> "ChannelModel":
        return ChannelModel(self.labels, self.sub_probs, self.p_del, self.p_ins, self.ins_dist, seed)

    def to_text(self) -> str:
        lines = ["labels: " + " ".join(self.labels)]
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                if self.sub_probs[i, j] > 0:
                    lines.append(f"sub: {a} {b} {float(self.sub_probs[i, j])!r}")
        for i, a in enumerate(self.labels):
            if self.p_del[i] > 0:
                lines.append(f"del: {a} {float(self.p_del[i])!r}")
        for j, b in enumerate(self.labels):
            lines.append(f"ins: {b} {float(self.ins_dist[j])!r}")
        lines.append(f"p_ins: {self.p_ins!r}")
        lines.append(f"seed: {self.seed}")
        return "\n".join(lines) + "\n"


def parse_channel(text: str) -> ChannelModel:
    """Read a channel file.

    Missing diagonal ``sub`` entries default to whatever keeps the row (plus
    deletion) summing to one; a missing ``ins`` block means uniform insertions.
    """
    labels = None
    subs, dels, ins = [], [], []
    p_ins, seed = 0.0, 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        parts = rest.split()
        try:
            if key == "labels":
                labels = [normalize_token(x) for x in parts]
            elif key == "sub":
                subs.append((normalize_token(parts[0]), normalize_token(parts[1]), float(parts[2])))
            elif key == "del":
                dels.append((normalize_token(parts[0]), float(parts[1])))
            elif key == "ins":
                ins.append((normalize_token(parts[0]), float(parts[1])))
            elif key == "p_ins":
                p_ins = float(parts[0])
            elif key == "seed":
                seed = int(parts[0])
            else:
                raise DataError(f"line {lineno}: unknown key {key!r}")
        except (IndexError, ValueError):
            raise DataError(f"line {lineno}: malformed {raw!r}") from None
    if not labels:
        raise DataError("channel file has no 'labels:' line")
    pos = {x: i for i, x in enumerate(labels)}
    k = len(labels)

    def ix(x):
        if x not in pos:
            raise UnknownLabel(x)
        return pos[x]

    sub = np.zeros((k, k))
    explicit_diag = set()
    for a, b, p in subs:
        sub[ix(a), ix(b)] = p
        if a == b:
            explicit_diag.add(a)
    pd = np.zeros(k)
    for a, p in dels:
        pd[ix(a)] = p
    for i, a in enumerate(labels):
        if a not in explicit_diag:
            sub[i, i] = max(0.0, 1.0 - pd[i] - (sub[i].sum() - sub[i, i]))
    if ins:
        dist = np.zeros(k)
        for b, p in ins:
            dist[ix(b)] = p
    else:
        dist = np.full(k, 1.0 / k)
    return ChannelModel(tuple(labels), sub, pd, p_ins, dist, seed)


def _simulate_utterance(utt, model: ChannelModel, pos: dict, rng: np.random.Generator):
    k = len(model.labels)
    ins_cum = np.cumsum(model.ins_dist)
    out = []

    def gap():
        if model.p_ins > 0 and rng.random() < model.p_ins:
            j = min(int(np.searchsorted(ins_cum, rng.random(), side="right")), k - 1)
            out.append(model.labels[j])

    gap()
    for x in utt:
        i = pos[x]
        cum = np.cumsum(np.concatenate(([model.p_del[i]], model.sub_probs[i])))
        u = rng.random()
        j = int(np.searchsorted(cum, u, side="right"))
        if j > 0:
            out.append(model.labels[min(j - 1, k - 1)])
        gap()
    return tuple(out)


def simulate(t: Transcript, model: ChannelModel) -> Transcript:
    pos = {x: i for i, x in enumerate(model.labels)}
    for utt in t:
        for x in utt:
            if x not in pos:
                raise UnknownLabel(x)
    out = []
    for n, utt in enumerate(t):
        rng = np.random.Generator(np.random.PCG64(model.seed ^ n))
        out.append(_simulate_utterance(utt, model, pos, rng))
    return Transcript(t.level, tuple(out))
