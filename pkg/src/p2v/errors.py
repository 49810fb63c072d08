"""Exception hierarchy.

Everything a caller can trigger with bad input derives from `DataError`;
the CLI maps that family to exit code 3. `InvariantViolation` signals a
bug in this package (exit code 4).
"""


class P2VError(Exception):
    pass


class DataError(P2VError, ValueError):
    pass


class InvariantViolation(P2VError, AssertionError):
    pass


# transcripts / inventories / dictionaries
class DuplicateSymbol(DataError):
    pass


class BadClass(DataError):
    pass


class EmptyInventory(DataError):
    pass


class UnknownPhoneme(DataError):
    def __init__(self, symbol, word=None):
        self.symbol = symbol
        self.word = word
        where = f" in {word!r}" if word is not None else ""
        super().__init__(f"unknown phoneme {symbol!r}{where}")


class EmptyPronunciation(DataError):
    pass


class OovWord(DataError):
    def __init__(self, word, utterance):
        self.word = word
        self.utterance = utterance
        super().__init__(f"word {word!r} (utterance {utterance}) not in dictionary")


class EmptyTranscript(DataError):
    pass


# viseme maps
class MapFormatError(DataError):
    pass


class OverlapError(DataError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"phoneme {symbol!r} is covered by both maps")


class DegenerateMap(DataError):
    pass


class UnknownMap(DataError):
    pass


# scoring
class EmptyPair(DataError):
    pass


class EmptyReference(DataError):
    pass


class UnknownLabel(DataError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"label {label!r} not in label set")


class LabelMismatch(DataError):
    pass


# derivation
class EmptyConfusion(DataError):
    pass


# statistics
class TooFewMethods(DataError):
    pass


class UnsupportedK(DataError):
    pass


class TooFewSamples(DataError):
    pass
