"""Chord symbols, pitch classes and keys.

Pitch classes are plain ints in ``0..11`` (0 = C). A chord is a root plus one
of four qualities; the written spelling is kept for display but never takes
part in equality, so ``C#`` and ``Db`` are the same chord.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import MalformedChord

LETTER_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

# Sharps for F#/C#, flats for Ab/Eb/Bb; the major chord on 1 is the flat-two Db.
KEY_NAMES = ("C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B")
SHARP_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")


class Quality(enum.Enum):
    MAJOR = ""
    MINOR = "m"
    DOMINANT7 = "7"
    DIMINISHED = "o"

    @property
    def suffix(self) -> str:
        return self.value


_SUFFIXES = {
    "": Quality.MAJOR,
    "m": Quality.MINOR,
    "7": Quality.DOMINANT7,
    "o": Quality.DIMINISHED,
    "dim": Quality.DIMINISHED,
    "°": Quality.DIMINISHED,
}

_ACCIDENTALS = {"": 0, "#": 1, "♯": 1, "b": -1, "♭": -1}

_TOKEN_RE = re.compile(r"^([A-G])([#♯b♭]?)(.*)$")


@dataclass(frozen=True)
class Chord:
    root: int
    quality: Quality
    spelling: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "root", self.root % 12)
        if not self.spelling:
            object.__setattr__(self, "spelling", canonical_spelling(self.root, self.quality))

    def __str__(self):
        return self.spelling


@dataclass(frozen=True)
class Key:
    """One of the 12 keys; major and minor modes share a key."""

    tonic: int

    def __post_init__(self):
        object.__setattr__(self, "tonic", self.tonic % 12)

    @property
    def name(self) -> str:
        return KEY_NAMES[self.tonic]

    def __str__(self):
        return self.name

    def transpose(self, semitones: int) -> "Key":
        return Key(self.tonic + semitones)


# Row order of the printed key tables: circle of fifths from C.
KEY_ORDER: tuple[Key, ...] = tuple(Key(7 * i) for i in range(12))
ALL_KEYS = KEY_ORDER


def canonical_spelling(root: int, quality: Quality) -> str:
    root %= 12
    if quality is Quality.DIMINISHED:
        # leading-tone chords are written with sharps (C#o, D#o, F#o)
        name = SHARP_NAMES[root]
    elif root == 1 and quality is Quality.MAJOR:
        name = "Db"
    else:
        name = KEY_NAMES[root]
    return name + quality.suffix


def parse_pitch_class(name: str) -> int:
    """Parse a bare note name such as ``"F#"`` or ``"Bb"``."""
    m = re.fullmatch(r"([A-G])([#♯b♭]?)", name.strip())
    if not m:
        raise MalformedChord(name)
    return (LETTER_PC[m.group(1)] + _ACCIDENTALS[m.group(2)]) % 12


def parse_key(name: str) -> Key:
    return Key(parse_pitch_class(name))


def parse_chord(token: str) -> Chord:
    m = _TOKEN_RE.match(token)
    if not m:
        raise MalformedChord(token)
    letter, accidental, suffix = m.groups()
    quality = _SUFFIXES.get(suffix)
    if quality is None:
        # also catches double accidentals ("C##", "Dbb") and "m7"
        raise MalformedChord(token)
    root = LETTER_PC[letter] + _ACCIDENTALS[accidental]
    return Chord(root, quality, token)


def transpose_chord(chord: Chord, semitones: int) -> Chord:
    return Chord(chord.root + semitones, chord.quality)


ALL_CHORDS: tuple[Chord, ...] = tuple(Chord(r, q) for r in range(12) for q in Quality)
