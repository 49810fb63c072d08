"""Phoneme inventories, pronunciation dictionaries and transcripts."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    BadClass,
    DuplicateSymbol,
    EmptyInventory,
    EmptyPronunciation,
    EmptyTranscript,
    OovWord,
    UnknownPhoneme,
)

SILENCE_TOKENS = frozenset({"SIL", "SP"})


class PhonemeClass(str, Enum):
    VOWEL = "v"
    CONSONANT = "c"
    SILENCE = "s"


class Level(str, Enum):
    WORD = "word"
    PHONEME = "phoneme"
    VISEME = "viseme"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def normalize_token(token: str) -> str:
    """Uppercase a label and drop presentation slashes (``/p/`` -> ``P``)."""
    token = token.strip().strip("/").upper()
    if not token or any(c.isspace() or c == "/" for c in token):
        raise ValueError(f"bad token {token!r}")
    return token


@dataclass(frozen=True)
class PhonemeSymbol:
    name: str
    cls: PhonemeClass

    @property
    def is_vowel(self) -> bool:
        return self.cls is PhonemeClass.VOWEL

    @property
    def is_silence(self) -> bool:
        return self.cls is PhonemeClass.SILENCE


@dataclass(frozen=True)
class PhonemeInventory:
    symbols: tuple[PhonemeSymbol, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, s in enumerate(self.symbols):
            if s.name in index:
                raise DuplicateSymbol(s.name)
            index[s.name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "PhonemeInventory":
        return cls(tuple(PhonemeSymbol(normalize_token(n), PhonemeClass(c)) for n, c in pairs))

    def __contains__(self, name) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.symbols]

    def __getitem__(self, name: str) -> PhonemeSymbol:
        try:
            return self.symbols[self._index[name]]
        except KeyError:
            raise UnknownPhoneme(name) from None

    def position(self, name: str) -> int:
        return self._index[name]

    def class_of(self, name: str) -> PhonemeClass:
        return self[name].cls

    def is_silence(self, name: str) -> bool:
        if name in self._index:
            return self[name].is_silence
        return name in SILENCE_TOKENS

    def sort(self, names: Iterable[str]) -> list[str]:
        """Order names by declaration order; unknown names go last, alphabetically."""
        n = len(self.symbols)
        return sorted(names, key=lambda x: (self._index.get(x, n), x))

    def to_text(self) -> str:
        return "".join(f"{s.name} {s.cls.value}\n" for s in self.symbols)


def parse_inventory(text: str) -> PhonemeInventory:
    symbols = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BadClass(f"line {lineno}: expected 'SYMBOL CLASS', got {raw!r}")
        name = normalize_token(parts[0])
        try:
            cls = PhonemeClass(parts[1].lower())
        except ValueError:
            raise BadClass(f"line {lineno}: unknown class {parts[1]!r}") from None
        if name in seen:
            raise DuplicateSymbol(name)
        if cls is PhonemeClass.SILENCE and name not in SILENCE_TOKENS:
            raise BadClass(f"line {lineno}: {name} is not a designated silence token")
        seen.add(name)
        symbols.append(PhonemeSymbol(name, cls))
    if not symbols:
        raise EmptyInventory("inventory file has no symbols")
    return PhonemeInventory(tuple(symbols))


@dataclass(frozen=True)
class PronunciationDict:
    entries: dict  # word -> tuple of pronunciations (tuple of names)
    inventory: PhonemeInventory

    def __contains__(self, word) -> bool:
        return word.upper() in self.entries

    def __getitem__(self, word: str) -> tuple[tuple[str, ...], ...]:
        return self.entries[word.upper()]

    def __len__(self) -> int:
        return len(self.entries)

    def first(self, word: str) -> tuple[str, ...]:
        return self.entries[word.upper()][0]


def parse_dictionary(text: str, inv: PhonemeInventory) -> PronunciationDict:
    """Read BEEP-style ``WORD  PH1 PH2 ...`` lines.

    Repeated headwords accumulate alternative pronunciations in file order.
    """
    entries: dict[str, list[tuple[str, ...]]] = {}
    for raw in text.splitlines():
        if raw.lstrip().startswith("#") or not raw.strip():
            continue
        parts = raw.split()
        word = parts[0].upper()
        phones = tuple(normalize_token(p) for p in parts[1:])
        if not phones:
            raise EmptyPronunciation(f"no phonemes given for {word!r}")
        for p in phones:
            if p not in inv:
                raise UnknownPhoneme(p, word)
        entries.setdefault(word, []).append(phones)
    return PronunciationDict({w: tuple(p) for w, p in entries.items()}, inv)


@dataclass(frozen=True)
class Transcript:
    level: Level
    utterances: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "level", Level(self.level))
        object.__setattr__(self, "utterances", tuple(tuple(u) for u in self.utterances))

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self):
        return iter(self.utterances)

    def __getitem__(self, i):
        return self.utterances[i]

    @property
    def n_labels(self) -> int:
        return sum(len(u) for u in self.utterances)

    def labels(self) -> set[str]:
        return {x for u in self.utterances for x in u}

    def to_text(self) -> str:
        return "".join(" ".join(u) + "\n" for u in self.utterances)


def parse_transcript(text: str, level: Level | str) -> Transcript:
    utts = []
    for raw in text.splitlines():
        labels = raw.split()
        if labels:
            utts.append(tuple(normalize_token(x) for x in labels))
    if not utts:
        raise EmptyTranscript("transcript has no utterances")
    return Transcript(Level(level), tuple(utts))


def check_labels(t: Transcript, allowed) -> None:
    for u in t:
        for x in u:
            if x not in allowed:
                raise UnknownPhoneme(x)


def words_to_phonemes(t: Transcript, d: PronunciationDict) -> Transcript:
    """Replace each word by its first listed pronunciation, keeping utterance breaks."""
    out = []
    for i, utt in enumerate(t):
        phones: list[str] = []
        for word in utt:
            if word not in d:
                raise OovWord(word, i)
            phones.extend(d.first(word))
        out.append(tuple(phones))
    return Transcript(Level.PHONEME, tuple(out))


def word_pronunciations(words: Sequence[str], d: PronunciationDict) -> list[tuple[str, ...]]:
    """First pronunciation of each word, for callers that need word boundaries."""
    out = []
    for w in words:
        if w not in d:
            raise OovWord(w, 0)
        out.append(d.first(w))
    return out
