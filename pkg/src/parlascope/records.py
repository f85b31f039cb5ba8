"""Core record types for parliamentary speech data.

A :class:`SpeechRecord` is one utterance with full speaker metadata and is
the unit of every downstream analysis. Records are immutable once
constructed, so they are safe to share across threads.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

# The 17-tag universal POS inventory.
UPOS_TAGS = frozenset(
    {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    }
)

MIN_BIRTH_YEAR = 1900


class SpeakerType(str, Enum):
    MP = "MP"
    GUEST = "guest"
    UNKNOWN = "unknown"


class SpeakerRole(str, Enum):
    REGULAR = "Regular"
    CHAIR = "Chair"
    UNKNOWN = "unknown"


class Gender(str, Enum):
    F = "F"
    M = "M"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AnnotatedToken:
    """One token with its lemma and Universal POS tag."""

    surface: str
    lemma: str
    upos: str

    def __post_init__(self):
        if self.upos not in UPOS_TAGS:
            raise ValueError(f"unknown UPOS tag: {self.upos!r}")


@dataclass(frozen=True)
class SpeechRecord:
    """One utterance plus speaker metadata.

    ``word_count`` is the number of whitespace-delimited tokens of the raw
    text; it is computed when omitted and validated when supplied. Unknown
    metadata is explicit (``unknown`` enum members / absent ``birth_year``),
    never defaulted to a class label.
    """

    id: str
    parliament: str
    session_id: str
    date: dt.date
    text: str
    speaker_name: str = ""
    speaker_type: SpeakerType = SpeakerType.UNKNOWN
    speaker_role: SpeakerRole = SpeakerRole.UNKNOWN
    gender: Gender = Gender.UNKNOWN
    birth_year: Optional[int] = None
    party: str = ""
    word_count: Optional[int] = None
    tokens: Optional[tuple[AnnotatedToken, ...]] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if len(self.parliament) != 2 or not self.parliament.isalpha():
            raise ValueError(f"parliament must be a 2-letter code, got {self.parliament!r}")
        expected = len(self.text.split())
        if self.word_count is None:
            object.__setattr__(self, "word_count", expected)
        elif self.word_count != expected:
            raise ValueError(
                f"word_count {self.word_count} does not match whitespace token "
                f"count {expected} for record {self.id!r}"
            )
        if self.birth_year is not None and not (
            MIN_BIRTH_YEAR <= self.birth_year <= self.date.year
        ):
            raise ValueError(
                f"birth_year {self.birth_year} outside [{MIN_BIRTH_YEAR}, "
                f"{self.date.year}] for record {self.id!r}"
            )
        if self.tokens is not None and not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    def with_tokens(self, tokens: list[AnnotatedToken]) -> "SpeechRecord":
        return replace(self, tokens=tuple(tokens))


@dataclass(frozen=True)
class SpeakerFilter:
    """Predicate over speech records.

    ``min_chars`` is inclusive (text length >= min_chars). ``date_range``
    bounds are inclusive on both ends.
    """

    required_type: Optional[SpeakerType] = None
    required_role: Optional[SpeakerRole] = None
    date_range: Optional[tuple[dt.date, dt.date]] = None
    min_chars: Optional[int] = None

    def __post_init__(self):
        if self.date_range is not None:
            lo, hi = self.date_range
            if lo > hi:
                raise ValueError(f"date_range from {lo} is after to {hi}")

    def matches(self, record: SpeechRecord) -> bool:
        if self.required_type is not None and record.speaker_type != self.required_type:
            return False
        if self.required_role is not None and record.speaker_role != self.required_role:
            return False
        if self.date_range is not None:
            lo, hi = self.date_range
            if not (lo <= record.date <= hi):
                return False
        if self.min_chars is not None and len(record.text) < self.min_chars:
            return False
        return True


# Filter matching the population analyzed throughout: full members speaking
# in an ordinary (non-chair) role.
MP_REGULAR = SpeakerFilter(
    required_type=SpeakerType.MP, required_role=SpeakerRole.REGULAR
)
