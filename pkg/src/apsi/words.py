"""Lemma/part-of-speech word atoms used by taxonomies and event graphs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InputError


class Pos(enum.Enum):
    NOUN = "noun"
    VERB = "verb"
    OTHER = "other"

    @property
    def short(self) -> str:
        return {"noun": "n", "verb": "v", "other": "o"}[self.value]

    @classmethod
    def parse(cls, text: str) -> "Pos":
        normalized = text.strip().lower()
        table = {
            "n": cls.NOUN,
            "noun": cls.NOUN,
            "v": cls.VERB,
            "verb": cls.VERB,
            "o": cls.OTHER,
            "other": cls.OTHER,
        }
        if normalized not in table:
            raise InputError(f"unknown part-of-speech tag {text!r}")
        return table[normalized]


@dataclass(frozen=True)
class Word:
    """A lowercase lemma tagged with a coarse part of speech.

    Multiword lemmas use underscores; whitespace is rejected rather than
    repaired so corpus problems surface at ingest.
    """

    lemma: str
    pos: Pos = Pos.OTHER

    def __post_init__(self):
        if not self.lemma:
            raise InputError("lemma must be non-empty")
        if any(ch.isspace() for ch in self.lemma):
            raise InputError(
                f"lemma {self.lemma!r} contains whitespace; "
                "use underscores for multiword lemmas"
            )

    @classmethod
    def make(cls, lemma: str, pos) -> "Word":
        """Build a Word from raw strings, lowercasing the lemma."""
        if not isinstance(pos, Pos):
            pos = Pos.parse(pos)
        return cls(lemma.lower(), pos)

    @property
    def sort_key(self) -> tuple[str, str]:
        return (self.lemma, self.pos.value)

    def __str__(self) -> str:
        return f"{self.lemma}/{self.pos.short}"
