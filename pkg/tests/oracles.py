"""Brute-force reference implementations used only by the tests.

Nothing here imports the code under test.
"""

import itertools


def alignment_costs(ref, hyp, sub, ins, dele):
    """Yield the total cost of every edit script turning ref into hyp."""
    if not ref and not hyp:
        yield 0
        return
    if ref and hyp:
        step = 0 if ref[0] == hyp[0] else sub
        for c in alignment_costs(ref[1:], hyp[1:], sub, ins, dele):
            yield step + c
    if ref:
        for c in alignment_costs(ref[1:], hyp, sub, ins, dele):
            yield dele + c
    if hyp:
        for c in alignment_costs(ref, hyp[1:], sub, ins, dele):
            yield ins + c


def min_alignment_cost(ref, hyp, sub, ins, dele):
    return min(alignment_costs(tuple(ref), tuple(hyp), sub, ins, dele))


def strict_clusters(labels, counts, classes=None, min_confusion=1):
    """Strict clustering by scanning every subset in (size, mass, name) order.

    ``counts`` is a list of rows indexed [true][pred]. ``classes`` maps label to
    a class tag; when given, groups must be class-pure. Returns (groups in
    creation order, garbage labels).
    """
    n = len(labels)

    def w(i, j):
        return counts[i][j] + counts[j][i]

    diag = [counts[i][i] for i in range(n)]
    off = [sum(w(i, j) for j in range(n) if j != i) for i in range(n)]
    garbage = {labels[i] for i in range(n) if diag[i] == 0 and off[i] == 0}
    groups = [(labels[i],) for i in range(n) if diag[i] > 0 and off[i] == 0]
    remaining = [i for i in range(n) if labels[i] not in garbage and (labels[i],) not in groups]

    def ok(subset):
        for a, b in itertools.combinations(subset, 2):
            if w(a, b) < min_confusion:
                return False
            if classes is not None and classes[labels[a]] != classes[labels[b]]:
                return False
        return True

    def mass(subset):
        return sum(w(a, b) for a, b in itertools.combinations(subset, 2))

    while True:
        candidates = [s for r in range(len(remaining), 1, -1)
                      for s in itertools.combinations(remaining, r)]
        candidates.sort(key=lambda s: (-len(s), -mass(s), sorted(labels[i] for i in s)))
        chosen = next((s for s in candidates if ok(s)), None)
        if chosen is None:
            break
        groups.append(tuple(labels[i] for i in chosen))
        remaining = [i for i in remaining if i not in chosen]
    groups.extend((labels[i],) for i in remaining)
    return groups, garbage


def average_ranks_desc(row):
    """Rank 1 = largest; ties get the mean of the positions they occupy."""
    order = sorted(range(len(row)), key=lambda i: -row[i])
    ranks = [0.0] * len(row)
    pos = 0
    while pos < len(order):
        end = pos
        while end + 1 < len(order) and row[order[end + 1]] == row[order[pos]]:
            end += 1
        avg = (pos + 1 + end + 1) / 2
        for t in range(pos, end + 1):
            ranks[order[t]] = avg
        pos = end + 1
    return ranks


def friedman_from_rank_sums(rank_rows):
    """chi2_F = 12/(N k (k+1)) * sum R_j^2 - 3 N (k+1), with R_j the rank sums."""
    n = len(rank_rows)
    k = len(rank_rows[0])
    sums = [sum(r[j] for r in rank_rows) for j in range(k)]
    return 12.0 / (n * k * (k + 1)) * sum(s * s for s in sums) - 3.0 * n * (k + 1)
