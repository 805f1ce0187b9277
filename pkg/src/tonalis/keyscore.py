"""Chord centrality tables and key evidence.

Each of the 12 keys owns a table scoring how central a chord is to it. The
tables are transpositions of a single master table written for C, and a
chord's evidence for a key is just its table entry (0 when absent).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import EmptySequence
from .pitch import KEY_ORDER, Chord, Key, parse_chord, transpose_chord

# (spelling, score) per row of the key-of-C table. Rows are kept separate so
# that chords listed in several rows can be merged explicitly.
_C_ROWS: dict[str, list[tuple[str, int]]] = {
    "major": [
        ("C", 5), ("Dm", 3), ("Em", 2), ("F", 3), ("G", 5), ("G7", 5), ("Am", 3), ("Bo", 3),
    ],
    "major secondary dominant": [
        ("A", 1), ("A7", 1), ("B", 1), ("B7", 1), ("C7", 1), ("D", 1), ("D7", 1), ("E", 1), ("E7", 1),
    ],
    "ascending melodic": [("Dm", 3), ("F", 3)],
    "harmonic minor": [
        ("Cm", 5), ("Do", 2), ("Fm", 3), ("G", 5), ("G7", 5), ("Ab", 2), ("Bo", 3),
    ],
    "descending melodic": [("Eb", 2), ("Gm", 2), ("Bb", 2)],
    "minor secondary dominant": [
        ("Bb7", 1), ("C7", 1), ("D", 1), ("D7", 1), ("Eb7", 1), ("F7", 1),
    ],
    "flat two": [("Db", 1)],
}


@dataclass(frozen=True)
class CentralityTable:
    key: Key
    scores: Mapping[Chord, int]

    def lookup(self, chord: Chord) -> int:
        return self.scores.get(chord, 0)

    def __iter__(self):
        return iter(self.scores.items())

    def to_csv(self) -> str:
        lines = ["chord,score"]
        for chord, score in sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0].root, kv[0].quality.value)):
            lines.append(f"{chord.spelling},{score}")
        return "\n".join(lines) + "\n"


def _master_scores() -> dict[Chord, int]:
    scores: dict[Chord, int] = {}
    for row in _C_ROWS.values():
        for token, score in row:
            chord = parse_chord(token)
            scores[chord] = max(score, scores.get(chord, 0))
    return scores


def master_table_of_C() -> CentralityTable:
    return table_for(Key(0))


_tables: dict[int, CentralityTable] = {}
_lock = threading.Lock()


def table_for(key: Key) -> CentralityTable:
    """Memoized centrality table for ``key``; one shared instance per key."""
    table = _tables.get(key.tonic)
    if table is not None:
        return table
    with _lock:
        table = _tables.get(key.tonic)
        if table is None:
            scores = {
                transpose_chord(chord, key.tonic): score
                for chord, score in _master_scores().items()
            }
            table = CentralityTable(key, MappingProxyType(scores))
            _tables[key.tonic] = table
    return table


def score_chord(chord: Chord, key: Key) -> int:
    return table_for(key).lookup(chord)


@dataclass(frozen=True)
class KeyEvidence:
    """Accumulated scores for all 12 keys, indexed by tonic pitch class."""

    totals: tuple[int, ...]

    def __getitem__(self, key: Key) -> int:
        return self.totals[key.tonic]

    def __add__(self, other: "KeyEvidence") -> "KeyEvidence":
        return KeyEvidence(tuple(a + b for a, b in zip(self.totals, other.totals)))

    def __sub__(self, other: "KeyEvidence") -> "KeyEvidence":
        return KeyEvidence(tuple(a - b for a, b in zip(self.totals, other.totals)))

    def ordered(self) -> list[tuple[Key, int]]:
        """(key, total) pairs in table row order (C, G, D, ... F)."""
        return [(k, self.totals[k.tonic]) for k in KEY_ORDER]

    @classmethod
    def zero(cls) -> "KeyEvidence":
        return cls((0,) * 12)


def chord_evidence(chord: Chord) -> KeyEvidence:
    return KeyEvidence(tuple(score_chord(chord, Key(t)) for t in range(12)))


def accumulate(seq: Sequence[Chord] | Iterable[Chord]) -> KeyEvidence:
    seq = list(seq)
    if not seq:
        raise EmptySequence()
    total = KeyEvidence.zero()
    for chord in seq:
        total = total + chord_evidence(chord)
    return total


__all__ = [
    "CentralityTable",
    "KeyEvidence",
    "accumulate",
    "chord_evidence",
    "master_table_of_C",
    "score_chord",
    "table_for",
]
