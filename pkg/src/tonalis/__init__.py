"""Harmonic analysis of chord sequences: key tracking, modulation detection
and grammar-based parsing of each tonal segment."""

from .errors import (
    EmptyInput,
    EmptySequence,
    MalformedChord,
    NoParse,
    SequenceTooShort,
    TonalisError,
    UnmappableChord,
)
from .grammar import ParseResult, ParseTree, build_grammar, parse, yield_of
from .keyscore import accumulate, master_table_of_C, score_chord, table_for
from .modulation import WindowConfig, detect_modulations, window_scores
from .numeral import Numeral, assign_numeral, assign_segment
from .pipeline import AnalysisReport, analyze, emit, ingest
from .pitch import Chord, Key, Quality, parse_chord, transpose_chord

__version__ = "0.1.0"
