from fractions import Fraction

import pytest

from p2v.errors import DegenerateMap, MapFormatError, OverlapError, UnknownMap, UnknownPhoneme
from p2v.transcripts import Level, Transcript, parse_dictionary, parse_inventory, parse_transcript
from p2v.visemes import (
    GAR,
    SIL,
    VisemeMap,
    apply_map,
    compression_factor,
    compression_ratio,
    counts,
    format_cf,
    identity_map,
    is_split_pure,
    load_map,
    pair_maps,
    parse_map,
    validate_map,
)

# Classes read off the worked sentence; only the phonemes that sentence uses.
MONTGOMERY_FRAGMENT = """\
name: montgomery-fragment
kind: combined
v01: P B M
v04: T D N
v05: S Z
v07: R
v09: W
v10: IH
v11: AY
v12: AH AX OH
v16: IA IY
"""
SENTENCE_DICT = """\
ONCE  W AH N S
UPON  AX P OH N
A  AX
MIDNIGHT  M IH D N AY T
DREARY  D R IA R IY
"""
SENTENCE_VISEMES = ("v09 v12 v04 v05 - v12 v01 v12 v04 - v12 - "
                    "v01 v10 v04 v11 v04 - v04 v07 v16 v07 v16")


def test_catalog_has_23_maps(catalog):
    assert len(catalog) == 23
    assert len(catalog.vowel_maps) == 8
    assert len(catalog.consonant_maps) == 15


def test_every_catalog_map_validates(catalog):
    for m in catalog:
        report = validate_map(m)
        assert report.ok, (m.name, report.lines())


def test_catalog_split_flags_match_purity(catalog):
    for m in catalog:
        if m.split:
            assert is_split_pure(m), m.name


def test_lee_consonants_cf(catalog):
    m = catalog.get("lee-consonants")
    assert counts(m) == (6, 24)
    assert compression_ratio(m) == Fraction(1, 4)
    assert format_cf(compression_factor(m)) == "0.2500"


def test_woodward_cf_rounding(catalog):
    m = catalog.get("woodward-consonants")
    assert counts(m) == (4, 24)
    assert format_cf(compression_factor(m)) == "0.1667"
    # the literature table truncates to 0.16; still within the 0.01 band
    assert abs(compression_factor(m) - catalog.published(m.name)[2]) <= 0.01


def test_identity_map_cf_is_one(inventory):
    assert compression_factor(identity_map(inventory)) == 1.0


def test_degenerate_map(inventory):
    with pytest.raises(DegenerateMap):
        compression_ratio(VisemeMap("empty", (), inventory=inventory))


def test_unknown_catalog_name(catalog):
    with pytest.raises(UnknownMap):
        catalog.get("nobody-vowels")


def test_map_text_round_trip(catalog, inventory):
    for m in catalog:
        again = parse_map(m.to_text(), inventory)
        assert again == m
        assert again.meta == m.meta


def test_parse_map_errors(inventory):
    with pytest.raises(MapFormatError):
        parse_map("01: P B\n", inventory)
    with pytest.raises(UnknownPhoneme):
        parse_map("name: x\n01: P QX\n", inventory)
    with pytest.raises(MapFormatError):
        parse_map("name: x\nkind: weird\n", inventory)


def test_validate_reports_partition_violation(inventory):
    m = VisemeMap("bad", (("01", ("AE", "EH")), ("02", ("AE",))), inventory=inventory)
    report = validate_map(m)
    assert len(report.partition) == 1 and report.partition[0][0] == "AE"
    assert report.violations == 1


def test_validate_reports_mixed_class(inventory):
    m = VisemeMap("bad", (("01", ("K", "IY")),), inventory=inventory, split=True)
    report = validate_map(m)
    assert len(report.mixed) == 1
    assert report.violations == 1


def test_label_for_falls_back_to_garbage_and_silence(catalog):
    m = catalog.get("lee-consonants")
    assert m.label_for("AA") == GAR  # a vowel, so uncovered by a consonant map
    assert m.label_for("SIL") == SIL
    with pytest.raises(UnknownPhoneme):
        m.label_for("QX")


def test_pair_woodward_disney(catalog, inventory):
    m = pair_maps(catalog.get("disney-vowels"), catalog.get("woodward-consonants"), inventory)
    assert sum(1 for lab in m.labels if lab.startswith("V-")) == 4
    assert sum(1 for lab in m.labels if lab.startswith("C-")) == 4
    uncovered = {s.name for s in inventory if not s.is_silence} - m.covered()
    assert m.garbage == uncovered
    assert m.silence == {"SIL", "SP"}
    assert validate_map(m).ok


def test_pair_full_cover_has_empty_garbage():
    inv = parse_inventory("AA v\nIY v\nB c\nP c\nSIL s\n")
    v = parse_map("name: v\nkind: vowel\n1: AA IY\n", inv)
    c = parse_map("name: c\nkind: consonant\n1: B P\n", inv)
    m = pair_maps(v, c, inv)
    assert m.garbage == frozenset()
    assert m.split


def test_pair_uncovered_phoneme_goes_to_garbage():
    inv = parse_inventory("AA v\nB c\nZH c\n")
    m = pair_maps(parse_map("name: v\nkind: vowel\n1: AA\n", inv),
                  parse_map("name: c\nkind: consonant\n1: B\n", inv), inv)
    assert m.garbage == {"ZH"}


def test_pair_shared_phoneme_resolved_by_class():
    inv = parse_inventory("AA v\nHH c\nB c\n")
    v = parse_map("name: v\nkind: vowel\n1: AA HH\n", inv)
    c = parse_map("name: c\nkind: consonant\n1: B HH\n", inv)
    m = pair_maps(v, c, inv)
    assert m.label_for("HH") == "C-1"
    assert validate_map(m).ok
    with pytest.raises(OverlapError):
        pair_maps(v, c, inv, strict=True)


def test_every_catalog_pairing_is_a_partition(catalog, inventory):
    for v, c in catalog.pairings():
        assert validate_map(pair_maps(v, c, inventory)).ok


def test_visually_identical_minimal_triple(catalog, inventory):
    m = catalog.get("woodward-consonants")
    assert {"B", "P", "M"} in [set(x) for x in m.partition()]
    t = parse_transcript("B AE D\nP AE D\nM AE D\n", "phoneme")
    out = apply_map(m, t)
    assert out[0] == out[1] == out[2]


def test_identity_map_is_transparent(inventory):
    t = parse_transcript("B AE D SIL\nZH IY\n", "phoneme")
    out = apply_map(identity_map(inventory), t)
    assert out.level is Level.VISEME
    assert out[0][:3] == t[0][:3] and out[1] == t[1]


def test_worked_sentence(inventory):
    m = parse_map(MONTGOMERY_FRAGMENT, inventory)
    d = parse_dictionary(SENTENCE_DICT, inventory)
    words = "ONCE UPON A MIDNIGHT DREARY".split()
    per_word = [apply_map(m, Transcript(Level.PHONEME, (d.first(w),)), merge_repeats=True)[0]
                for w in words]
    assert " - ".join(" ".join(v) for v in per_word) == SENTENCE_VISEMES


def test_worked_sentence_without_merging(inventory):
    m = parse_map(MONTGOMERY_FRAGMENT, inventory)
    d = parse_dictionary(SENTENCE_DICT, inventory)
    out = apply_map(m, Transcript(Level.PHONEME, (d.first("MIDNIGHT"),)))
    assert " ".join(out[0]) == "v01 v10 v04 v04 v11 v04"


def test_load_map_by_name_and_path(tmp_path, catalog, inventory):
    m = catalog.get("lee-vowels")
    assert load_map("lee-vowels", inventory) == m
    p = tmp_path / "x.map"
    p.write_text(m.to_text())
    assert load_map(str(p), inventory) == m
