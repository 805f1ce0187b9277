"""Command-line interface.

Exit codes: 0 ok, 1 malformed input, 2 some segment did not parse.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import grammar as gr
from .errors import EmptySequence, MalformedChord, NoParse, SequenceTooShort, UnmappableChord
from .keyscore import table_for
from .modulation import WindowConfig, detect_modulations, windows_to_csv
from .numeral import assign_numeral
from .pipeline import analyze, emit, ingest, score_matrix_csv
from .pitch import parse_key

EXIT_OK, EXIT_MALFORMED, EXIT_NOPARSE = 0, 1, 2

_EXT = {"json": ".json", "dot": ".dot", "csv": ".csv"}


def _analyze_file(path: str, cfg: WindowConfig, fmt: str):
    name, chords = ingest(path)
    report = analyze(chords, cfg, piece_name=name)
    return report, emit(report, fmt)


def cmd_analyze(args) -> int:
    cfg = WindowConfig(args.window, args.min_established)
    with ThreadPoolExecutor(max_workers=min(8, len(args.files))) as pool:
        futures = [pool.submit(_analyze_file, f, cfg, args.format) for f in args.files]
    status = EXIT_OK
    for path, fut in zip(args.files, futures):
        try:
            report, data = fut.result()
        except (MalformedChord, EmptySequence, SequenceTooShort) as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            status = max(status, EXIT_MALFORMED)
            continue
        if args.out:
            out_dir = Path(args.out)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / (Path(path).stem + _EXT[args.format])).write_bytes(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        if not report.all_parsed and status == EXIT_OK:
            status = EXIT_NOPARSE
    return status


def cmd_score(args) -> int:
    _, chords = ingest(args.file)
    sys.stdout.write(score_matrix_csv(chords))
    return EXIT_OK


def cmd_modulate(args) -> int:
    _, chords = ingest(args.file)
    report = detect_modulations(chords, WindowConfig(args.window, args.min_established))
    sys.stdout.write(windows_to_csv(report.windows))
    for m in report.modulations:
        print(
            f"# modulation {m.from_key}->{m.to_key} window_start={m.window_start} "
            f"pivot={m.pivot_index} kind={m.kind.value}"
        )
    return EXIT_OK


def cmd_parse(args) -> int:
    key = parse_key(args.key)
    _, chords = ingest(args.file)
    try:
        numerals = [assign_numeral(c, key) for c in chords]
    except UnmappableChord as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED
    print(" ".join(str(n) for n in numerals))
    try:
        result = gr.parse(numerals)
    except NoParse as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOPARSE
    print(f"trees_found: {result.count_label()}")
    print(result.canonical.to_bracketed())
    return EXIT_OK


def cmd_dump_table(args) -> int:
    sys.stdout.write(table_for(parse_key(args.key)).to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tonalis", description="Harmonic analysis of chord sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis of one or more chord files")
    p.add_argument("files", nargs="+")
    p.add_argument("--window", "-W", type=int, default=6)
    p.add_argument("--min-established", type=int, default=None)
    p.add_argument("--format", choices=sorted(_EXT), default="json")
    p.add_argument("--out", help="write one output file per input into this directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("score", help="12-key score matrix of a chord file")
    p.add_argument("file")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("modulate", help="sliding-window key scores")
    p.add_argument("file")
    p.add_argument("--window", "-W", type=int, default=6)
    p.add_argument("--min-established", type=int, default=None)
    p.set_defaults(func=cmd_modulate)

    p = sub.add_parser("parse", help="parse a single-key chord file")
    p.add_argument("--key", "-k", required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("dump-table", help="centrality table of a key as CSV")
    p.add_argument("key")
    p.set_defaults(func=cmd_dump_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedChord, EmptySequence, SequenceTooShort) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
