"""Phoneme-to-viseme maps: representation, file format, catalog, pairing and application."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateMap, MapFormatError, OverlapError, UnknownMap, UnknownPhoneme
from .transcripts import (
    Level,
    PhonemeClass,
    PhonemeInventory,
    Transcript,
    normalize_token,
    parse_inventory,
)

GAR = "GAR"
SIL = "SIL"
RESERVED = (GAR, SIL)
HEADER_KEYS = ("name", "kind", "split", "year", "inspiration", "description", "subjects", "published")
KINDS = ("vowel", "consonant", "combined")
CATALOG_VERSION = "1"


@dataclass(frozen=True)
class VisemeMap:
    """A named many-to-one assignment of phonemes to viseme labels.

    ``classes`` keeps creation order, which doubles as the tie-break order in
    the derivation code. Construction does not enforce the partition
    invariants so that broken maps can still be built and reported on by
    `validate_map`.
    """

    name: str
    classes: tuple[tuple[str, tuple[str, ...]], ...]
    garbage: frozenset = frozenset()
    silence: frozenset = frozenset()
    inventory: PhonemeInventory | None = None
    kind: str = "combined"
    split: bool = False
    meta: Mapping[str, str] = field(default_factory=dict, compare=False)
    comments: tuple[str, ...] = field(default=(), compare=False)
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        classes = tuple((label, tuple(members)) for label, members in self.classes)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "garbage", frozenset(self.garbage))
        object.__setattr__(self, "silence", frozenset(self.silence))
        object.__setattr__(self, "meta", dict(self.meta))
        lookup = {}
        for p in self.silence:
            lookup.setdefault(p, SIL)
        for label, members in classes:
            for p in members:
                lookup.setdefault(p, label)
        for p in self.garbage:
            lookup.setdefault(p, GAR)
        object.__setattr__(self, "_lookup", lookup)

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.classes]

    def members(self, label: str) -> tuple[str, ...]:
        for lab, members in self.classes:
            if lab == label:
                return members
        if label == GAR:
            return tuple(sorted(self.garbage))
        if label == SIL:
            return tuple(sorted(self.silence))
        raise KeyError(label)

    def label_for(self, phoneme: str) -> str:
        try:
            return self._lookup[phoneme]
        except KeyError:
            pass
        inv = self.inventory
        if inv is not None and phoneme in inv:
            return SIL if inv.is_silence(phoneme) else GAR
        raise UnknownPhoneme(phoneme)

    def covered(self) -> set[str]:
        """Phonemes placed in a (non-garbage, non-silence) class."""
        return {p for _, members in self.classes for p in members}

    def partition(self) -> set[frozenset]:
        return {frozenset(m) for _, m in self.classes}

    @property
    def n_visemes(self) -> int:
        return len(self.classes)

    @property
    def n_phonemes(self) -> int:
        return len(self.covered())

    def with_name(self, name: str) -> "VisemeMap":
        return VisemeMap(name, self.classes, self.garbage, self.silence, self.inventory,
                         self.kind, self.split, self.meta, self.comments)

    def to_text(self) -> str:
        lines = [f"# {c}" if c else "#" for c in self.comments]
        lines.append(f"name: {self.name}")
        lines.append(f"kind: {self.kind}")
        lines.append(f"split: {'yes' if self.split else 'no'}")
        for key in HEADER_KEYS[3:]:
            if key in self.meta:
                lines.append(f"{key}: {self.meta[key]}")
        for label, members in self.classes:
            lines.append(f"{label}: {' '.join(members)}")
        order = self.inventory.sort if self.inventory is not None else sorted
        if self.garbage:
            lines.append(f"{GAR}: {' '.join(order(self.garbage))}")
        if self.silence:
            lines.append(f"{SIL}: {' '.join(order(self.silence))}")
        return "\n".join(lines) + "\n"


def parse_map(text: str, inventory: PhonemeInventory) -> VisemeMap:
    header: dict[str, str] = {}
    comments: list[str] = []
    classes: list[tuple[str, tuple[str, ...]]] = []
    garbage: set[str] = set()
    silence: set[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if not classes:
                comments.append(stripped[1:].strip())
            continue
        line = stripped.split("#", 1)[0].strip()
        if ":" not in line:
            raise MapFormatError(f"line {lineno}: expected 'KEY: value', got {raw!r}")
        key, value = (s.strip() for s in line.split(":", 1))
        if key.lower() in HEADER_KEYS and key == key.lower():
            header[key] = value
            continue
        label = key
        if not label or any(c.isspace() for c in label):
            raise MapFormatError(f"line {lineno}: bad viseme label {label!r}")
        phones = tuple(normalize_token(p) for p in value.split())
        for p in phones:
            if p not in inventory:
                raise UnknownPhoneme(p, label)
        if label.upper() == GAR:
            garbage.update(phones)
        elif label.upper() == SIL:
            silence = set(phones)
        else:
            classes.append((label, phones))
    if "name" not in header:
        raise MapFormatError("map file has no 'name:' header")
    kind = header.get("kind", "combined")
    if kind not in KINDS:
        raise MapFormatError(f"unknown map kind {kind!r}")
    split = header.get("split", "no").lower()
    if split not in ("yes", "no"):
        raise MapFormatError(f"split must be yes or no, got {split!r}")
    if silence is None:
        placed = {p for _, m in classes for p in m} | garbage
        silence = {s.name for s in inventory if s.is_silence and s.name not in placed}
    meta = {k: v for k, v in header.items() if k not in ("name", "kind", "split")}
    return VisemeMap(header["name"], tuple(classes), frozenset(garbage), frozenset(silence),
                     inventory, kind, split == "yes", meta, tuple(comments))


@dataclass
class ValidationReport:
    partition: list = field(default_factory=list)  # (phoneme, [places])
    empty_classes: list = field(default_factory=list)
    duplicate_labels: list = field(default_factory=list)
    mixed: list = field(default_factory=list)  # (label, vowels, consonants)
    unknown: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)  # informational only

    @property
    def violations(self) -> int:
        return (len(self.partition) + len(self.empty_classes) + len(self.duplicate_labels)
                + len(self.mixed) + len(self.unknown))

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def lines(self) -> list[str]:
        out = [f"partition: {p} in {', '.join(places)}" for p, places in self.partition]
        out += [f"empty class: {label}" for label in self.empty_classes]
        out += [f"duplicate label: {label}" for label in self.duplicate_labels]
        out += [f"mixed class: {label} vowels={' '.join(v)} consonants={' '.join(c)}"
                for label, v, c in self.mixed]
        out += [f"not in inventory: {p}" for p in self.unknown]
        return out


def validate_map(m: VisemeMap) -> ValidationReport:
    report = ValidationReport()
    places: dict[str, list[str]] = {}
    seen_labels = set()
    for label, members in m.classes:
        if label in seen_labels or label.upper() in RESERVED:
            report.duplicate_labels.append(label)
        seen_labels.add(label)
        if not members:
            report.empty_classes.append(label)
        for p in members:
            places.setdefault(p, []).append(label)
    for p in m.garbage:
        places.setdefault(p, []).append(GAR)
    for p in m.silence:
        places.setdefault(p, []).append(SIL)
    inv = m.inventory
    for p in sorted(places):
        if len(places[p]) > 1:
            report.partition.append((p, places[p]))
        if inv is not None and p not in inv:
            report.unknown.append(p)
    if m.split and inv is not None:
        for label, members in m.classes:
            known = [p for p in members if p in inv and not inv.is_silence(p)]
            vowels = [p for p in known if inv.class_of(p) is PhonemeClass.VOWEL]
            cons = [p for p in known if inv.class_of(p) is PhonemeClass.CONSONANT]
            if vowels and cons:
                report.mixed.append((label, vowels, cons))
    if inv is not None:
        report.uncovered = [s.name for s in inv if s.name not in places]
    return report


def is_split_pure(m: VisemeMap, inventory: PhonemeInventory | None = None) -> bool:
    inv = inventory or m.inventory
    for _, members in m.classes:
        kinds = {inv.class_of(p) for p in members if not inv.is_silence(p)}
        if len(kinds) > 1:
            return False
    return True


def counts(m: VisemeMap) -> tuple[int, int]:
    """(NV, NP): viseme classes and the phonemes they hold; GAR and SIL excluded."""
    return m.n_visemes, m.n_phonemes


def compression_ratio(m: VisemeMap) -> Fraction:
    nv, np_ = counts(m)
    if np_ == 0:
        raise DegenerateMap(f"map {m.name!r} has no mapped phonemes")
    return Fraction(nv, np_)


def compression_factor(m: VisemeMap) -> float:
    return float(compression_ratio(m))


def format_cf(cf: float) -> str:
    return f"{cf:.4f}"


def identity_map(inventory: PhonemeInventory, name: str = "identity") -> VisemeMap:
    classes = tuple((s.name, (s.name,)) for s in inventory if not s.is_silence)
    silence = frozenset(s.name for s in inventory if s.is_silence)
    return VisemeMap(name, classes, frozenset(), silence, inventory, "combined", False)


def pair_maps(vowels: VisemeMap, consonants: VisemeMap, inv: PhonemeInventory,
              strict: bool = False) -> VisemeMap:
    """Combine a vowel map and a consonant map into one map over ``inv``.

    Labels are prefixed ``V-``/``C-``. Inventory phonemes covered by neither map
    go to GAR, silence tokens to SIL.

    Several published vowel maps also list a consonant (``/h/``, ``/w/``, ``/y/``).
    When such a phoneme is also covered by the consonant map it is kept by the map
    whose kind matches its inventory class. With ``strict=True`` any shared
    phoneme raises `OverlapError`.
    """
    v_cover = vowels.covered()
    c_cover = consonants.covered()
    shared = v_cover & c_cover
    drop_v, drop_c = set(), set()
    for p in inv.sort(shared):
        if strict or p not in inv or inv.is_silence(p):
            raise OverlapError(p)
        if inv.class_of(p) is PhonemeClass.VOWEL:
            drop_c.add(p)
        else:
            drop_v.add(p)

    classes = []
    for prefix, m, drop in (("V-", vowels, drop_v), ("C-", consonants, drop_c)):
        for label, members in m.classes:
            kept = tuple(p for p in members if p not in drop and p in inv and not inv.is_silence(p))
            if kept:
                classes.append((prefix + label, kept))
    covered = {p for _, members in classes for p in members}
    garbage = frozenset(s.name for s in inv if not s.is_silence and s.name not in covered)
    silence = frozenset(s.name for s in inv if s.is_silence)
    result = VisemeMap(f"{vowels.name}+{consonants.name}", tuple(classes), garbage, silence,
                       inv, "combined", False)
    if is_split_pure(result):
        result = VisemeMap(result.name, result.classes, garbage, silence, inv, "combined", True)
    return result


def apply_map(m: VisemeMap, t: Transcript, merge_repeats: bool = False) -> Transcript:
    """Rewrite a phoneme transcript as visemes, token for token.

    ``merge_repeats`` collapses runs of the same viseme inside an utterance; it
    is off by default so the output aligns one-to-one with the phonemes.
    """
    out = []
    for utt in t:
        labels = [m.label_for(p) for p in utt]
        if merge_repeats:
            labels = [x for i, x in enumerate(labels) if i == 0 or labels[i - 1] != x]
        out.append(tuple(labels))
    return Transcript(Level.VISEME, tuple(out))


# ---------------------------------------------------------------- catalog

def _data_dir():
    return resources.files("p2v") / "data"


def default_inventory() -> PhonemeInventory:
    return parse_inventory((_data_dir() / "inventory.txt").read_text(encoding="utf-8"))


@dataclass(frozen=True)
class MapCatalog:
    vowel_maps: dict
    consonant_maps: dict
    inventory: PhonemeInventory

    def __iter__(self):
        yield from self.vowel_maps.values()
        yield from self.consonant_maps.values()

    def __len__(self) -> int:
        return len(self.vowel_maps) + len(self.consonant_maps)

    @property
    def names(self) -> list[str]:
        return [m.name for m in self]

    def get(self, name: str) -> VisemeMap:
        for m in self:
            if m.name == name:
                return m
        raise UnknownMap(f"no catalog map named {name!r}")

    def metadata(self, name: str) -> dict:
        return dict(self.get(name).meta)

    def published(self, name: str) -> tuple[int, int, float]:
        """Viseme:phoneme counts and compression factor as printed in the literature table."""
        vp, cf = self.get(name).meta["published"].split()
        v, p = vp.split(":")
        return int(v), int(p), float(cf)

    def pairings(self) -> list[tuple[VisemeMap, VisemeMap]]:
        return [(v, c) for v in self.vowel_maps.values() for c in self.consonant_maps.values()]


def load_catalog(inventory: PhonemeInventory | None = None) -> MapCatalog:
    inv = inventory or default_inventory()
    vowels, consonants = {}, {}
    for entry in sorted((_data_dir() / "maps").iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".map"):
            continue
        m = parse_map(entry.read_text(encoding="utf-8"), inv)
        (vowels if m.kind == "vowel" else consonants)[m.name] = m
    return MapCatalog(vowels, consonants, inv)


def load_map(name_or_path: str, inventory: PhonemeInventory | None = None) -> VisemeMap:
    """Resolve a catalog name or a path to a map file."""
    path = Path(name_or_path)
    inv = inventory or default_inventory()
    if path.suffix == ".map" or path.exists():
        return parse_map(path.read_text(encoding="utf-8"), inv)
    return load_catalog(inv).get(name_or_path)


def format_partition(groups: Iterable[Sequence[str]]) -> str:
    return " ".join("{" + " ".join(g) + "}" for g in groups)
