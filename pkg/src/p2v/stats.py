"""Comparing viseme sets across speakers: ranks, Friedman test, Nemenyi critical difference."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

from .errors import DataError, TooFewMethods, TooFewSamples, UnsupportedK

Q_TABLE_VERSION = "demsar2006+srange/1"

# Two-tailed Nemenyi q_alpha (studentized range at infinite df, divided by sqrt 2).
# k = 2..10 from Demsar (2006, JMLR 7, Table 5a/5b); k = 11..20 computed from the
# studentized range distribution and rounded to three decimals.
Q_ALPHA = {
    0.05: (1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
           3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544),
    0.10: (1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920,
           2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319),
}
K_MIN, K_MAX = 2, 20


@dataclass(frozen=True)
class ScoreGrid:
    methods: tuple[str, ...]
    datasets: tuple[str, ...]
    values: np.ndarray  # datasets x methods

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        n, k = len(self.datasets), len(self.methods)
        if values.shape != (n, k):
            raise DataError(f"score grid is {values.shape}, expected {(n, k)}")
        if not np.isfinite(values).all():
            raise DataError("score grid has missing or non-finite cells")
        if k < 2:
            raise TooFewMethods("need at least two methods")
        if n < 2:
            raise TooFewSamples("need at least two datasets")
        values.setflags(write=False)
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class RankTable:
    methods: tuple[str, ...]
    ranks: np.ndarray

    @property
    def mean_ranks(self) -> np.ndarray:
        return self.ranks.mean(axis=0)

    @property
    def n(self) -> int:
        return self.ranks.shape[0]

    @property
    def k(self) -> int:
        return self.ranks.shape[1]


def rank_scores(g: ScoreGrid) -> RankTable:
    """Rank each dataset's scores, 1 = best (highest); ties share the average rank."""
    ranks = np.vstack([rankdata(-row, method="average") for row in g.values])
    return RankTable(g.methods, ranks)


def chi2_sf(x: float, df: int) -> float:
    if x <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def friedman(r: RankTable) -> tuple[float, float]:
    """Friedman chi-square on mean ranks (no tie correction) and its p-value."""
    n, k = r.n, r.k
    if k < 2:
        raise TooFewMethods("need at least two methods")
    if n < 2:
        raise TooFewSamples("need at least two datasets")
    mr = r.mean_ranks
    stat = 12.0 * n / (k * (k + 1)) * (float(np.sum(mr ** 2)) - k * (k + 1) ** 2 / 4.0)
    stat = max(stat, 0.0)  # rounding can leave -1e-15 for all-tied grids
    return stat, chi2_sf(stat, k - 1)


def q_alpha(k: int, alpha: float = 0.05) -> float:
    if alpha not in Q_ALPHA:
        raise DataError(f"alpha must be one of {sorted(Q_ALPHA)}")
    if not K_MIN <= k <= K_MAX:
        raise UnsupportedK(f"k={k} outside bundled table range {K_MIN}..{K_MAX}")
    return Q_ALPHA[alpha][k - K_MIN]


def nemenyi_cd(k: int, n: int, alpha: float = 0.05) -> float:
    if n < 1:
        raise TooFewSamples("need at least one dataset")
    return q_alpha(k, alpha) * math.sqrt(k * (k + 1) / (6.0 * n))


def mean_se(values: Sequence[float]) -> tuple[float, float]:
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise TooFewSamples("standard error needs at least two values")
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def significance_matrix(mean_ranks: Sequence[float], cd: float) -> np.ndarray:
    """``out[i, j]`` is True when methods i and j are NOT significantly different."""
    mr = np.asarray(mean_ranks, dtype=float)
    return np.abs(mr[:, None] - mr[None, :]) <= cd


def cd_groups(methods: Sequence[str], mean_ranks: Sequence[float], cd: float) -> list[tuple[str, ...]]:
    """Maximal runs of rank-ordered methods whose span is within the CD.

    These are the horizontal bars of a critical-difference diagram.
    """
    order = sorted(range(len(methods)), key=lambda i: (mean_ranks[i], methods[i]))
    mr = [mean_ranks[i] for i in order]
    spans = []
    for a in range(len(order)):
        b = a
        while b + 1 < len(order) and mr[b + 1] - mr[a] <= cd:
            b += 1
        if b > a:
            spans.append((a, b))
    spans = [s for s in spans if not any(o != s and o[0] <= s[0] and s[1] <= o[1] for o in spans)]
    return [tuple(methods[order[i]] for i in range(a, b + 1)) for a, b in spans]


def parse_scores_csv(text: str) -> ScoreGrid:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise DataError("scores CSV needs a header and at least one row")
    header = [c.strip() for c in rows[0]]
    methods = header[1:]
    datasets, values = [], []
    for r in rows[1:]:
        if len(r) != len(header):
            raise DataError(f"row {r[0]!r} has {len(r) - 1} scores, expected {len(methods)}")
        datasets.append(r[0].strip())
        try:
            values.append([float(c) for c in r[1:]])
        except ValueError:
            raise DataError(f"non-numeric score in row {r[0]!r}") from None
    return ScoreGrid(tuple(methods), tuple(datasets), np.array(values))


def compare_report(g: ScoreGrid, alpha: float = 0.05) -> str:
    r = rank_scores(g)
    stat, p = friedman(r)
    cd = nemenyi_cd(r.k, r.n, alpha)
    mr = r.mean_ranks
    lines = [f"# methods={r.k} datasets={r.n} alpha={alpha}", "method,mean_rank,mean_score,se"]
    for j, m in enumerate(g.methods):
        mean, se = mean_se(g.values[:, j])
        lines.append(f"{m},{mr[j]:.4f},{mean:.4f},{se:.4f}")
    lines.append(f"friedman,{stat:.6f},{p:.6g}")
    lines.append(f"cd,{cd:.6f}")
    for i, grp in enumerate(cd_groups(g.methods, list(mr), cd), 1):
        lines.append(f"group{i}," + ",".join(grp))
    return "\n".join(lines) + "\n"
