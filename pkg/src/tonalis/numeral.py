"""Roman-numeral terminals and the chord-to-numeral correspondence."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import UnmappableChord
from .pitch import Chord, Key, Quality

ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII")


class Kind(enum.Enum):
    DEGREE = "degree"
    FLAT_TWO = "flat_two"
    SECONDARY_DOMINANT = "secondary_dominant"
    SECONDARY_LEADING_TONE = "secondary_leading_tone"


@dataclass(frozen=True)
class Numeral:
    """A grammar terminal.

    ``degree`` is 1..7; for secondary chords it is the target degree (the
    ``II`` in ``V^II``). Flat-two carries degree 2.
    """

    kind: Kind
    degree: int

    def __post_init__(self):
        if not 1 <= self.degree <= 7:
            raise ValueError(f"degree out of range: {self.degree}")
        if self.kind in (Kind.SECONDARY_DOMINANT, Kind.SECONDARY_LEADING_TONE) and self.degree == 1:
            raise ValueError("secondary chords cannot target I")

    def __str__(self):
        if self.kind is Kind.DEGREE:
            return ROMAN[self.degree - 1]
        if self.kind is Kind.FLAT_TWO:
            return "bII"
        head = "V" if self.kind is Kind.SECONDARY_DOMINANT else "VII"
        return f"{head}^{ROMAN[self.degree - 1]}"

    def __repr__(self):
        return f"Numeral({self})"


def degree(d: int) -> Numeral:
    return Numeral(Kind.DEGREE, d)


def sec_dom(d: int) -> Numeral:
    return Numeral(Kind.SECONDARY_DOMINANT, d)


def sec_lt(d: int) -> Numeral:
    return Numeral(Kind.SECONDARY_LEADING_TONE, d)


FLAT_TWO = Numeral(Kind.FLAT_TWO, 2)

_NUMERAL_RE = re.compile(r"^(V|VII)\^(I|II|III|IV|V|VI|VII)$")


def parse_numeral(text: str) -> Numeral:
    text = text.strip()
    if text in ("bII", "♭II"):
        return FLAT_TWO
    if text in ROMAN:
        return degree(ROMAN.index(text) + 1)
    m = _NUMERAL_RE.match(text)
    if not m:
        raise ValueError(f"not a numeral: {text!r}")
    target = ROMAN.index(m.group(2)) + 1
    return sec_dom(target) if m.group(1) == "V" else sec_lt(target)


M, m, D7, o = Quality.MAJOR, Quality.MINOR, Quality.DOMINANT7, Quality.DIMINISHED

# (semitones above tonic, quality) -> numeral, for the merged major/minor key.
CORRESPONDENCE: dict[tuple[int, Quality], Numeral] = {
    (0, M): degree(1),
    (0, m): degree(1),
    (0, D7): sec_dom(4),
    (1, M): FLAT_TWO,
    (2, m): degree(2),
    (2, o): degree(2),
    (2, M): sec_dom(5),
    (2, D7): sec_dom(5),
    (3, M): degree(3),
    (3, D7): sec_dom(6),
    (4, m): degree(3),
    (4, M): sec_dom(6),
    (4, D7): sec_dom(6),
    (5, M): degree(4),
    (5, m): degree(4),
    (5, D7): sec_dom(7),
    (7, M): degree(5),
    (7, D7): degree(5),
    (7, m): degree(5),
    (8, M): degree(6),
    (9, m): degree(6),
    (9, M): sec_dom(2),
    (9, D7): sec_dom(2),
    (10, M): degree(7),
    (10, D7): sec_dom(3),
    (11, o): degree(7),
    (11, M): sec_dom(3),
    (11, D7): sec_dom(3),
    # diminished a semitone below the target degree's root
    (1, o): sec_lt(2),
    (3, o): sec_lt(3),
    (4, o): sec_lt(4),
    (6, o): sec_lt(5),
    (8, o): sec_lt(6),
    (10, o): sec_lt(7),
}


def assign_numeral(chord: Chord, key: Key) -> Numeral:
    try:
        return CORRESPONDENCE[((chord.root - key.tonic) % 12, chord.quality)]
    except KeyError:
        raise UnmappableChord(chord, key) from None


def is_mappable(chord: Chord, key: Key) -> bool:
    return ((chord.root - key.tonic) % 12, chord.quality) in CORRESPONDENCE


def assign_segment(seq: Sequence[Chord], segment) -> list[Numeral]:
    """Numerals for chords ``segment.first..segment.last`` (1-based, inclusive)."""
    out = []
    for index in range(segment.first, segment.last + 1):
        chord = seq[index - 1]
        try:
            out.append(assign_numeral(chord, segment.key))
        except UnmappableChord as exc:
            raise UnmappableChord(chord, segment.key, index) from exc
    return out
