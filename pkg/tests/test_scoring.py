import random
from fractions import Fraction

import numpy as np
import pytest

from oracles import min_alignment_cost
from p2v.errors import EmptyPair, EmptyReference, LabelMismatch, UnknownLabel
from p2v.scoring import (
    HTK_COSTS,
    UNIT_COSTS,
    AlignmentStats,
    ConfusionMatrix,
    align,
    align_transcripts,
    confusion_from_alignments,
    parse_confusion_csv,
    per_class_precision,
    score,
    scores_csv,
    sum_confusions,
)
from p2v.transcripts import parse_transcript

REF = "ONCE UPON A MIDNIGHT DREARY".split()
HYP = "ONCE UPON UPON MIDNIGHT DREARY DREARY".split()


def test_identical_strings_are_all_hits():
    s = align(list("ABCD"), list("ABCD")).stats()
    assert (s.N, s.H, s.S, s.D, s.I) == (4, 4, 0, 0, 0)


def test_single_deletion_matches_enumeration():
    a = align(["A", "B", "C"], ["A", "C"])
    assert a.stats().D == 1 and a.stats().S == 0
    assert [op.ref for op in a.ops if op.kind == "del"] == ["B"]
    for costs in (HTK_COSTS, UNIT_COSTS):
        best = min_alignment_cost("ABC", "AC", costs.substitution, costs.insertion, costs.deletion)
        assert align("ABC", "AC", costs).cost(costs) == best


def test_empty_pair():
    with pytest.raises(EmptyPair):
        align([], [])


def test_one_sided_empty():
    assert align(["A", "B"], []).stats().D == 2
    assert align([], ["A"]).stats().I == 1


def test_worked_sentence_minimum_cost_alignment():
    # a minimum-cost aligner pairs A with the second UPON and inserts one DREARY
    a = align(REF, HYP, HTK_COSTS)
    s = a.stats()
    assert (s.S, s.D, s.I) == (1, 0, 1)
    assert a.cost(HTK_COSTS) == 17 == min_alignment_cost(REF, HYP, 10, 7, 7)
    assert s.correctness_ratio == Fraction(4, 5)
    assert s.accuracy_ratio == Fraction(3, 5)


def test_worked_sentence_narrated_edit_script():
    # scoring the narrated script (one deletion, two insertions) directly
    s = AlignmentStats(N=5, H=4, S=0, D=1, I=2)
    assert s.C == pytest.approx(0.8, abs=1e-12)
    assert s.A == pytest.approx(0.4, abs=1e-12)


def test_perfect_and_insert_only():
    ref = [str(i) for i in range(10)]
    s = align(ref, ref).stats()
    assert s.C == s.A == 1.0
    s = align(ref, ref + ["X"] * 10).stats()
    assert s.C == 1.0 and s.A == 0.0


def test_accuracy_can_go_negative():
    s = align(["A"], ["A", "B", "C"]).stats()
    assert s.accuracy_ratio == Fraction(-1, 1)


def test_empty_reference():
    with pytest.raises(EmptyReference):
        AlignmentStats(0, 0, 0, 0, 3).C
    with pytest.raises(EmptyReference):
        score([])


def test_tie_break_prefers_substitution_over_del_ins():
    # unit costs: sub (1) beats del+ins (2); the diagonal is taken
    a = align(["A"], ["B"], UNIT_COSTS)
    assert [op.kind for op in a.ops] == ["sub"]


def test_random_pairs_against_brute_force():
    rng = random.Random(11)
    for _ in range(200):
        ref = [rng.choice("ABCD") for _ in range(rng.randint(0, 5))]
        hyp = [rng.choice("ABCD") for _ in range(rng.randint(0 if ref else 1, 5))]
        for costs in (HTK_COSTS, UNIT_COSTS):
            a = align(ref, hyp, costs)
            assert a.ref_labels() == ref and a.hyp_labels() == hyp
            assert a.cost(costs) == min_alignment_cost(ref, hyp, costs.substitution,
                                                       costs.insertion, costs.deletion)


def test_scores_csv_layout():
    ref = parse_transcript("A B C\nA B\n", "phoneme")
    hyp = parse_transcript("A B C\nA\n", "phoneme")
    text = scores_csv(align_transcripts(ref, hyp))
    lines = text.splitlines()
    assert lines[0] == "utterance_id,N,H,S,D,I,C,A"
    assert lines[1] == "0,3,3,0,0,0,1.0000,1.0000"
    assert lines[2] == "1,2,1,0,1,0,0.5000,0.5000"
    assert lines[3] == "TOTAL,5,4,0,1,0,0.8000,0.8000"


def test_confusion_hits_only_is_diagonal():
    a = [align(list("ABC"), list("ABC"))]
    cm = confusion_from_alignments(a, ["A", "B", "C"])
    assert np.array_equal(cm.counts, np.eye(3, dtype=int))
    assert cm.del_margin.sum() == cm.ins_margin.sum() == 0


def test_confusion_single_substitution():
    cm = confusion_from_alignments([align(["P1"], ["P7"])], ["P1", "P7"])
    assert cm.get("P1", "P7") == 1
    assert cm.get("P7", "P1") == 0


def test_confusion_hand_tally():
    ref = parse_transcript("A B C\nA B\nC A\nB\n", "phoneme")
    hyp = parse_transcript("A B C\nA C\nC\nB A\n", "phoneme")
    cm = confusion_from_alignments(align_transcripts(ref, hyp), ["A", "B", "C"])
    expected = [[2, 0, 0], [0, 2, 1], [0, 0, 2]]
    assert cm.counts.tolist() == expected
    assert cm.del_margin.tolist() == [1, 0, 0]
    assert cm.ins_margin.tolist() == [1, 0, 0]
    assert cm.n_reference == ref.n_labels


def test_confusion_unknown_label():
    with pytest.raises(UnknownLabel):
        confusion_from_alignments([align(["A"], ["Z"])], ["A"])


def test_confusion_csv_round_trip(demo_matrix):
    cm = ConfusionMatrix.from_rows(["A", "B"], [[3, 1], [0, 2]], del_margin=[1, 0], ins_margin=[0, 4])
    assert parse_confusion_csv(cm.to_csv()) == cm
    assert parse_confusion_csv(demo_matrix.to_csv()) == demo_matrix


def test_sum_confusions():
    a = ConfusionMatrix.from_rows("XYZ", [[1, 2, 0], [0, 1, 0], [3, 0, 1]])
    b = ConfusionMatrix.from_rows("XYZ", [[0, 1, 1], [2, 0, 0], [0, 0, 5]])
    assert sum_confusions([a]) == a
    assert sum_confusions([a, ConfusionMatrix.zeros("XYZ")]) == a
    assert sum_confusions([a, b]).counts.tolist() == [[1, 3, 1], [2, 1, 0], [3, 0, 6]]
    with pytest.raises(LabelMismatch):
        sum_confusions([a, ConfusionMatrix.zeros("XY")])


def test_precision():
    assert per_class_precision(ConfusionMatrix.from_rows("AB", np.diag([2, 5]))) == {"A": 1.0, "B": 1.0}
    cm = ConfusionMatrix.from_rows("AB", [[3, 0], [1, 0]])
    assert per_class_precision(cm) == {"A": 0.75}


def test_precision_demo_column(demo_matrix):
    assert per_class_precision(demo_matrix)["P6"] == 1.0
