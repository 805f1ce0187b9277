"""End-to-end analysis: chords in, segmented and parsed report out."""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

from . import grammar as gr
from .errors import EmptySequence, MalformedChord, NoParse, UnmappableChord
from .keyscore import KeyEvidence, score_chord
from .modulation import (
    Modulation,
    ModulationKind,
    ModulationReport,
    Segment,
    WindowConfig,
    WindowScore,
    detect_modulations,
    windows_to_csv,
)
from .numeral import Numeral, assign_segment, parse_numeral
from .pitch import KEY_ORDER, Chord, Quality, parse_chord, parse_key


@dataclass(frozen=True)
class SegmentAnalysis:
    segment: Segment
    numerals: list[Numeral] | None
    result: gr.ParseResult | None
    error: str | None = None
    failed_prefix: int | None = None

    @property
    def parsed(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class AnalysisReport:
    piece_name: str
    chords: list[Chord]
    report: ModulationReport
    segment_analyses: list[SegmentAnalysis] = field(default_factory=list)
    config: WindowConfig = WindowConfig()

    @property
    def all_parsed(self) -> bool:
        return all(sa.parsed for sa in self.segment_analyses)


def analyze_segment(seq: Sequence[Chord], segment: Segment, bound: int | None = None) -> SegmentAnalysis:
    try:
        numerals = assign_segment(seq, segment)
    except UnmappableChord as exc:
        return SegmentAnalysis(segment, None, None, error=str(exc))
    try:
        result = gr.parse(numerals, bound=bound)
    except NoParse as exc:
        return SegmentAnalysis(segment, numerals, None, error=str(exc), failed_prefix=exc.prefix_length)
    return SegmentAnalysis(segment, numerals, result)


def analyze(
    seq: Sequence[Chord],
    cfg: WindowConfig = WindowConfig(),
    piece_name: str = "",
    bound: int | None = None,
) -> AnalysisReport:
    """Detect modulations, then assign numerals and parse every segment.

    Segments that cannot be mapped or parsed are kept with a diagnostic.
    """
    seq = list(seq)
    report = detect_modulations(seq, cfg)
    analyses = [analyze_segment(seq, seg, bound) for seg in report.segments]
    return AnalysisReport(piece_name, seq, report, analyses, cfg)


# -- ingestion ---------------------------------------------------------------

def ingest(source: str | os.PathLike | IO[str], name: str | None = None) -> tuple[str, list[Chord]]:
    """Read whitespace-separated chord tokens.

    ``#`` lines are comments; a comment on the very first line names the
    piece. Without one the file stem is used.
    """
    if isinstance(source, (str, os.PathLike)):
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        default_name = path.stem
    else:
        text = source.read()
        default_name = getattr(source, "name", "") or ""
    piece_name = name
    chords: list[Chord] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            if line_no == 1 and piece_name is None:
                piece_name = stripped.lstrip("#").strip()
            continue
        for col, token in enumerate(stripped.split(), start=1):
            try:
                chords.append(parse_chord(token))
            except MalformedChord:
                raise MalformedChord(token, line_no, col) from None
    if not chords:
        raise EmptySequence("no chords in input")
    return piece_name if piece_name is not None else str(default_name), chords


def ingest_text(text: str, name: str | None = None) -> tuple[str, list[Chord]]:
    return ingest(io.StringIO(text), name=name)


# -- JSON --------------------------------------------------------------------

def _chord_json(index: int, chord: Chord) -> dict:
    return {
        "index": index,
        "chord": chord.spelling,
        "root": chord.root,
        "quality": chord.quality.name.lower(),
    }


def _window_json(win: WindowScore) -> dict:
    return {
        "start": win.start,
        "end": win.end,
        "totals": {k.name: total for k, total in win.evidence.ordered()},
        "dominant": win.dominant.name,
    }


def to_json_dict(rep: AnalysisReport) -> dict:
    trees = []
    segments = []
    for i, sa in enumerate(rep.segment_analyses):
        seg = sa.segment
        segments.append({
            "key": seg.key.name,
            "first": seg.first,
            "last": seg.last,
            "numerals": None if sa.numerals is None else [str(n) for n in sa.numerals],
        })
        entry: dict = {"segment": i}
        if sa.result is not None:
            entry.update(
                parsed=True,
                trees_found=sa.result.trees_found,
                trees_found_label=sa.result.count_label(),
                exact_count=sa.result.exact_count,
                bound=sa.result.bound,
                tree=sa.result.canonical.to_bracketed(),
            )
        else:
            entry.update(parsed=False, error=sa.error, failed_prefix=sa.failed_prefix)
        trees.append(entry)
    return {
        "piece": rep.piece_name,
        "config": {"W": rep.config.W, "min_established": rep.config.min_established},
        "chords": [_chord_json(i, c) for i, c in enumerate(rep.chords, start=1)],
        "windows": [_window_json(w) for w in rep.report.windows],
        "modulations": [
            {
                "from": m.from_key.name,
                "to": m.to_key.name,
                "pivot_index": m.pivot_index,
                "window_start": m.window_start,
                "kind": m.kind.value,
            }
            for m in rep.report.modulations
        ],
        "segments": segments,
        "trees": trees,
    }


def from_json_dict(data: dict) -> AnalysisReport:
    chords = [Chord(c["root"], Quality[c["quality"].upper()], c["chord"]) for c in data["chords"]]
    windows = [
        WindowScore(
            w["start"],
            w["end"],
            KeyEvidence(_totals_by_tonic(w["totals"])),
            parse_key(w["dominant"]),
        )
        for w in data["windows"]
    ]
    mods = [
        Modulation(
            parse_key(m["from"]),
            parse_key(m["to"]),
            m["pivot_index"],
            m["window_start"],
            ModulationKind(m["kind"]),
        )
        for m in data["modulations"]
    ]
    segments = [Segment(parse_key(s["key"]), s["first"], s["last"]) for s in data["segments"]]
    analyses = []
    for seg, s, t in zip(segments, data["segments"], data["trees"]):
        numerals = None if s["numerals"] is None else [parse_numeral(x) for x in s["numerals"]]
        if t["parsed"]:
            result = gr.ParseResult(
                trees_found=t["trees_found"],
                canonical=gr.tree_from_bracketed(t["tree"]),
                bound=t["bound"],
                exact_count=t["exact_count"],
            )
            analyses.append(SegmentAnalysis(seg, numerals, result))
        else:
            analyses.append(SegmentAnalysis(seg, numerals, None, t["error"], t["failed_prefix"]))
    cfg = WindowConfig(data["config"]["W"], data["config"]["min_established"])
    return AnalysisReport(data["piece"], chords, ModulationReport(windows, mods, segments), analyses, cfg)


def _totals_by_tonic(named: dict) -> tuple[int, ...]:
    totals = [0] * 12
    for name, value in named.items():
        totals[parse_key(name).tonic] = value
    return tuple(totals)


# -- emitters ----------------------------------------------------------------

def emit_dot(rep: AnalysisReport) -> str:
    pivots = {m.pivot_index for m in rep.report.modulations}
    graphs = []
    for i, sa in enumerate(rep.segment_analyses):
        seg = sa.segment
        name = f"segment{i + 1}_{seg.key.name}"
        if sa.result is None:
            graphs.append(
                f'digraph "{name}" {{\n  error [shape=box, label="no parse: {_dot_escape(sa.error or "")}"];\n}}\n'
            )
            continue
        indices = list(range(seg.first, seg.last + 1))
        graphs.append(_tree_dot(sa.result.canonical, name, indices, rep.chords, pivots))
    return "".join(graphs)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _tree_dot(tree: gr.ParseTree, name: str, indices: list[int], chords: list[Chord], pivots: set[int]) -> str:
    lines = [f'digraph "{name}" {{', "  node [shape=plaintext];"]
    counter = 0
    leaves = iter(indices)

    def visit(node: gr.ParseTree) -> str:
        nonlocal counter
        if node.is_leaf:
            idx = next(leaves)
            ident = f"c{idx}"
            label = f"{node.node}\\n{chords[idx - 1].spelling} ({idx})"
            extra = ', style=bold, xlabel="pivot"' if idx in pivots else ""
            lines.append(f'  {ident} [label="{label}"{extra}];')
            return ident
        ident = f"n{counter}"
        counter += 1
        lines.append(f'  {ident} [label="{node.node}"];')
        for child in node.children:
            lines.append(f"  {ident} -> {visit(child)};")
        return ident

    visit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit(rep: AnalysisReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        text = json.dumps(to_json_dict(rep), indent=2, ensure_ascii=False) + "\n"
    elif fmt == "dot":
        text = emit_dot(rep)
    elif fmt == "csv":
        text = windows_to_csv(rep.report.windows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


def score_matrix_csv(seq: Sequence[Chord]) -> str:
    """Per-chord scores for every key plus the total (one row per key)."""
    header = ["key"] + [c.spelling for c in seq] + ["total"]
    lines = [",".join(header)]
    for key in KEY_ORDER:
        scores = [score_chord(c, key) for c in seq]
        lines.append(",".join([key.name] + [str(s) for s in scores] + [str(sum(scores))]))
    return "\n".join(lines) + "\n"


def from_json(data: bytes | str) -> AnalysisReport:
    return from_json_dict(json.loads(data))
