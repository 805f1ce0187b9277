"""Sliding-window key tracking and modulation detection.

A window of ``W`` chords slides over the piece with stride 1. Each window's
dominant key is the one with the largest accumulated centrality score; a
change of dominant between consecutive windows is a modulation, and the chord
at position ``W // 2`` of the window where the change shows up is taken as
the pivot. All chord indices are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import SequenceTooShort
from .keyscore import KeyEvidence, accumulate, chord_evidence
from .pitch import KEY_ORDER, Chord, Key

DEFAULT_WINDOW = 6


@dataclass(frozen=True)
class WindowConfig:
    W: int = DEFAULT_WINDOW
    # number of consecutive windows a key must dominate to be "established";
    # None means W
    min_established: int | None = None

    def __post_init__(self):
        if self.W < 2:
            raise ValueError(f"window length must be >= 2, got {self.W}")
        if self.min_established is not None and self.min_established < 1:
            raise ValueError("min_established must be >= 1")

    @property
    def established(self) -> int:
        return self.W if self.min_established is None else self.min_established


class ModulationKind(enum.Enum):
    REGULAR = "regular"
    PASSING = "passing"
    TONICIZATION = "tonicization"


@dataclass(frozen=True)
class WindowScore:
    start: int
    end: int
    evidence: KeyEvidence
    dominant: Key


@dataclass(frozen=True)
class Modulation:
    from_key: Key
    to_key: Key
    pivot_index: int
    window_start: int
    kind: ModulationKind = ModulationKind.REGULAR


@dataclass(frozen=True)
class Segment:
    key: Key
    first: int
    last: int

    def __len__(self):
        return self.last - self.first + 1


@dataclass(frozen=True)
class ModulationReport:
    windows: list[WindowScore] = field(default_factory=list)
    modulations: list[Modulation] = field(default_factory=list)
    segments: list[Segment] = field(default_factory=list)


def pick_dominant(evidence: KeyEvidence, previous: Key | None = None) -> Key:
    """Highest-scoring key.

    A previous dominant that ties for the maximum is kept; otherwise ties go
    to the earliest key in table row order.
    """
    best = max(evidence.totals)
    if previous is not None and evidence[previous] == best:
        return previous
    for key in KEY_ORDER:
        if evidence[key] == best:
            return key
    raise AssertionError("unreachable")


def window_scores(seq: Sequence[Chord], cfg: WindowConfig = WindowConfig()) -> list[WindowScore]:
    n, w = len(seq), cfg.W
    if n < w:
        raise SequenceTooShort(n, w)
    evidence = accumulate(seq[:w])
    dominant = pick_dominant(evidence)
    windows = [WindowScore(1, w, evidence, dominant)]
    for start in range(2, n - w + 2):
        # drop chord start-1, add chord start+w-1 (1-based)
        evidence = evidence - chord_evidence(seq[start - 2]) + chord_evidence(seq[start + w - 2])
        dominant = pick_dominant(evidence, dominant)
        windows.append(WindowScore(start, start + w - 1, evidence, dominant))
    return windows


def pivot_position(window_start: int, W: int, n: int) -> int:
    return min(max(window_start + W // 2 - 1, 1), n)


def build_segments(modulations: Sequence[Modulation], first_key: Key, n: int) -> list[Segment]:
    segments = []
    key, first = first_key, 1
    for mod in modulations:
        segments.append(Segment(key, first, mod.pivot_index))
        key, first = mod.to_key, mod.pivot_index
    segments.append(Segment(key, first, n))
    return segments


def dominant_runs(windows: Sequence[WindowScore]) -> list[tuple[Key, int]]:
    """Maximal runs of equal dominant as (key, number of windows)."""
    runs: list[tuple[Key, int]] = []
    for win in windows:
        if runs and runs[-1][0] == win.dominant:
            runs[-1] = (win.dominant, runs[-1][1] + 1)
        else:
            runs.append((win.dominant, 1))
    return runs


def classify(
    mods: Sequence[Modulation],
    windows: Sequence[WindowScore],
    cfg: WindowConfig = WindowConfig(),
) -> list[Modulation]:
    """Label each modulation as regular, passing or tonicization.

    A run of windows shorter than ``cfg.established`` is looked at in the
    context of the nearest established runs on either side: the same key on
    both sides makes the short run a tonicization, different keys make it a
    passing modulation. Both modulations bounding the short run get the
    label. Runs at the edges of the piece have no context and stay regular.
    """
    runs = dominant_runs(windows)
    if len(runs) - 1 != len(mods):
        raise ValueError("modulations do not match the window dominants")
    threshold = cfg.established
    established = [length >= threshold for _, length in runs]
    kinds = [ModulationKind.REGULAR] * len(mods)
    rank = {ModulationKind.REGULAR: 0, ModulationKind.PASSING: 1, ModulationKind.TONICIZATION: 2}

    for i, (key, length) in enumerate(runs):
        if established[i]:
            continue
        before = next((runs[j][0] for j in range(i - 1, -1, -1) if established[j]), None)
        after = next((runs[j][0] for j in range(i + 1, len(runs)) if established[j]), None)
        if before is None or after is None:
            continue
        kind = ModulationKind.TONICIZATION if before == after else ModulationKind.PASSING
        # modulation i-1 enters run i, modulation i leaves it
        for m in (i - 1, i):
            if 0 <= m < len(mods) and rank[kind] > rank[kinds[m]]:
                kinds[m] = kind
    return [replace(mod, kind=kind) for mod, kind in zip(mods, kinds)]


def detect_modulations(seq: Sequence[Chord], cfg: WindowConfig = WindowConfig()) -> ModulationReport:
    windows = window_scores(seq, cfg)
    n = len(seq)
    mods = []
    for prev, cur in zip(windows, windows[1:]):
        if cur.dominant != prev.dominant:
            mods.append(
                Modulation(
                    from_key=prev.dominant,
                    to_key=cur.dominant,
                    pivot_index=pivot_position(cur.start, cfg.W, n),
                    window_start=cur.start,
                )
            )
    mods = classify(mods, windows, cfg)
    segments = build_segments(mods, windows[0].dominant, n)
    return ModulationReport(windows=windows, modulations=mods, segments=segments)


def windows_to_csv(windows: Sequence[WindowScore]) -> str:
    header = ["window_start", "window_end"] + [k.name for k in KEY_ORDER] + ["dominant"]
    lines = [",".join(header)]
    for win in windows:
        row = [str(win.start), str(win.end)]
        row += [str(total) for _, total in win.evidence.ordered()]
        row.append(win.dominant.name)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
