"""Phoneme-to-viseme maps: catalog, transcription, scoring, speaker-dependent derivation."""

__version__ = "0.1.0"
