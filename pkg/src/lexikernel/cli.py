"""Command-line front door: ingest, decompose, solve, stats, export, serve."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .decomposition import Label, decompose_full
from .graph import build_graph, to_dot
from .lexicon import (
    NORM_VARIABLES,
    Lexicon,
    LexiconError,
    StopList,
    close_lexicon,
    dump_jsonl,
    load_norms,
    parse_dictionary,
    strip_stopwords,
)
from .mgs import (
    GroundingSet,
    SolverConfig,
    enumerate_mgs,
    greedy_grounding_set,
    solve_mgs,
    straddle_report,
)
from .stats import (
    InsufficientDataError,
    anova_compare,
    attach_norms,
    comparisons_to_text,
    layer_means,
    regression_to_text,
    standard_splits,
    stepwise_regression,
)
from .synth import SynthConfig, generate_lexicon, planted_norms_csv

LABEL_COLORS = {
    Label.OUTSIDE.value: "lightgray",
    Label.SATELLITE.value: "lightblue",
    Label.CORE.value: "orange",
}


@dataclass
class RunManifest:
    """Reproducibility sidecar written next to every output file."""

    command: str
    inputs: dict[str, str]
    options: dict
    tool_version: str = __version__
    wall_time_s: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "options": self.options,
                "tool_version": self.tool_version,
                "wall_time_s": round(self.wall_time_s, 6),
            },
            indent=2,
            sort_keys=True,
        )


def _write_output(path: str, text: str, manifest: RunManifest) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    Path(f"{path}.manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")


def _load_lexicon(path: str, format: str, stoplist: str | None) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        raw = parse_dictionary(fh, format)
    if stoplist:
        raw = strip_stopwords(raw, StopList.from_file(stoplist))
    lexicon, report = close_lexicon(raw, mode="drop-unknown")
    if report.total_dropped:
        print(
            f"warning: dropped {report.total_dropped} occurrences of "
            f"{len(report.dropped)} undefined words during closure",
            file=sys.stderr,
        )
    if report.emptied_entries:
        print(
            f"warning: {len(report.emptied_entries)} definitions became empty during closure",
            file=sys.stderr,
        )
    return lexicon


def _load_grounding_words(path: str) -> frozenset[str]:
    """Accept a solver JSON record or a plain list of words, one per line."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        record = json.loads(text)
    except json.JSONDecodeError:
        return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())
    if isinstance(record, dict) and "words" in record:
        return frozenset(str(w).lower() for w in record["words"])
    if isinstance(record, list):
        return frozenset(str(w).lower() for w in record)
    raise LexiconError(f"{path} is neither a word list nor a solver record")


def cmd_decompose(args: argparse.Namespace) -> int:
    started = time.monotonic()
    lexicon = _load_lexicon(args.dictionary, args.format, args.stoplist)
    decomposition, report = decompose_full(lexicon)
    print(report.to_text())
    if args.out:
        labels = "".join(
            f"{w}\t{decomposition.label[w].value}\n" for w in sorted(decomposition.label)
        )
        manifest = RunManifest(
            command="decompose",
            inputs={"dictionary": args.dictionary, "stoplist": args.stoplist or ""},
            options={"format": args.format},
            wall_time_s=time.monotonic() - started,
        )
        _write_output(args.out, labels, manifest)
    return 0


def cmd_mgs(args: argparse.Namespace) -> int:
    started = time.monotonic()
    lexicon = _load_lexicon(args.dictionary, args.format, args.stoplist)
    g = build_graph(lexicon)
    cfg = SolverConfig(
        time_limit=args.time_limit,
        enumeration_cap=max(1, args.enumerate or 1),
    )
    if args.greedy:
        result = greedy_grounding_set(g)
    else:
        result = solve_mgs(g, cfg)
    decomposition, _ = decompose_full(lexicon)
    straddle = straddle_report(decomposition, result)
    print(f"size: {result.size}")
    print(f"optimal: {'yes' if result.optimal else 'no'}")
    print(f"lower bound: {result.lower_bound}")
    print(
        f"straddle: core={straddle.in_core} satellite={straddle.in_satellite} "
        f"outside={straddle.outside_kernel}"
    )
    print(f"words: {' '.join(sorted(result.words))}")
    record = result.to_record()
    record["straddle"] = straddle.to_record()
    if args.enumerate:
        if not result.optimal:
            print(
                "warning: no proven optimum (time limit or greedy run); "
                "skipping enumeration",
                file=sys.stderr,
            )
        else:
            solutions = enumerate_mgs(g, cfg)
            record["solutions"] = [sorted(s.words) for s in solutions]
            print(f"optimal sets ({len(solutions)} shown, cap {cfg.enumeration_cap}):")
            for s in solutions:
                print("  " + " ".join(sorted(s.words)))
    if args.out:
        manifest = RunManifest(
            command="mgs",
            inputs={"dictionary": args.dictionary, "stoplist": args.stoplist or ""},
            options={
                "format": args.format,
                "time_limit": args.time_limit,
                "enumerate": args.enumerate,
                "greedy": args.greedy,
            },
            wall_time_s=time.monotonic() - started,
        )
        _write_output(args.out, json.dumps(record, indent=2, sort_keys=True) + "\n", manifest)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    started = time.monotonic()
    lexicon = _load_lexicon(args.dictionary, args.format, args.stoplist)
    decomposition, _ = decompose_full(lexicon)
    with open(args.norms, encoding="utf-8") as fh:
        norms = load_norms(fh)
    grounding = None
    if args.mgs:
        words = _load_grounding_words(args.mgs)
        grounding = GroundingSet(words=words, optimal=False, lower_bound=0)
    frame = attach_norms(decomposition, norms, grounding)
    for note in frame.warnings:
        print(f"warning: {note}", file=sys.stderr)
    print(f"norms coverage: {frame.coverage:.1%} of {len(frame.rows)} words")
    if frame.coverage == 0:
        print("warning: no dictionary word has norms; skipping all statistics", file=sys.stderr)
        return 0

    record: dict = {"coverage": frame.coverage, "means": {}, "anova": [], "stepwise": []}
    print("\nlayer means:")
    variables = list(args.variables or []) or list(NORM_VARIABLES)
    header = f"{'variable':<14}" + "".join(f"{g:>12}" for g in ("MGS", "C", "S", "K", "D-K"))
    print(header)
    for variable in variables:
        means = layer_means(frame, variable)
        record["means"][variable] = means
        cells = "".join(
            f"{means[g]:>12.2f}" if means[g] is not None else f"{'-':>12}"
            for g in ("MGS", "C", "S", "K", "D-K")
        )
        print(f"{variable:<14}{cells}")

    comparisons = []
    for split in standard_splits(frame):
        for variable in variables:
            try:
                comparisons.append(anova_compare(frame, split, variable))
            except InsufficientDataError as exc:
                print(f"warning: {split.name} / {variable}: {exc}", file=sys.stderr)
    if comparisons:
        print("\nANOVA comparisons:")
        print(comparisons_to_text(comparisons))
        record["anova"] = [c.to_record() for c in comparisons]

    print("\nstepwise regressions:")
    for split in standard_splits(frame):
        try:
            report = stepwise_regression(frame, split, entry_p=args.entry_p)
        except InsufficientDataError as exc:
            print(f"warning: {split.name}: {exc}", file=sys.stderr)
            continue
        print(regression_to_text(report))
        print()
        record["stepwise"].append(report.to_record())

    if args.out:
        manifest = RunManifest(
            command="stats",
            inputs={
                "dictionary": args.dictionary,
                "norms": args.norms,
                "mgs": args.mgs or "",
                "stoplist": args.stoplist or "",
            },
            options={"format": args.format, "entry_p": args.entry_p},
            wall_time_s=time.monotonic() - started,
        )
        _write_output(args.out, json.dumps(record, indent=2, sort_keys=True) + "\n", manifest)
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    started = time.monotonic()
    lexicon = _load_lexicon(args.dictionary, args.format, args.stoplist)
    g = build_graph(lexicon)
    colors = None
    if args.labels:
        colors = {}
        for lineno, line in enumerate(Path(args.labels).read_text().splitlines(), 1):
            if not line.strip():
                continue
            try:
                word, label = line.split("\t")
            except ValueError:
                raise LexiconError(f"{args.labels}:{lineno}: expected 'word<TAB>LABEL'")
            colors[word] = LABEL_COLORS.get(label, "white")
    dot = to_dot(g, colors)
    if args.out:
        manifest = RunManifest(
            command="export-dot",
            inputs={
                "dictionary": args.dictionary,
                "labels": args.labels or "",
                "stoplist": args.stoplist or "",
            },
            options={"format": args.format},
            wall_time_s=time.monotonic() - started,
        )
        _write_output(args.out, dot, manifest)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    started = time.monotonic()
    cfg = SynthConfig(
        entries=args.entries,
        seed=args.seed,
        mean_def_len=args.mean_def_len,
        core_frac=args.core_frac,
        satellite_frac=args.satellite_frac,
    )
    lexicon = generate_lexicon(cfg)
    manifest = RunManifest(
        command="generate",
        inputs={},
        options={
            "entries": cfg.entries,
            "seed": cfg.seed,
            "mean_def_len": cfg.mean_def_len,
            "core_frac": cfg.core_frac,
            "satellite_frac": cfg.satellite_frac,
        },
        wall_time_s=time.monotonic() - started,
    )
    _write_output(args.out, dump_jsonl(lexicon), manifest)
    print(f"wrote {len(lexicon)} entries to {args.out}")
    if args.norms_out or args.mgs_out:
        decomposition, _ = decompose_full(lexicon)
        grounding = greedy_grounding_set(build_graph(lexicon))
        if args.mgs_out:
            _write_output(args.mgs_out, "\n".join(sorted(grounding.words)) + "\n", manifest)
            print(f"wrote {grounding.size} grounding words to {args.mgs_out}")
        if args.norms_out:
            csv_text = planted_norms_csv(decomposition, grounding.words, cfg.seed, args.coverage)
            _write_output(args.norms_out, csv_text, manifest)
            print(f"wrote norms to {args.norms_out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .game import SessionStore
    from .service import create_app

    stop = StopList.from_file(args.stoplist) if args.stoplist else StopList.default()
    store = SessionStore(directory=args.sessions, stop=stop)
    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = str(candidate) if candidate.is_dir() else None
    app = create_app(store, ui_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexikernel",
        description="Dictionary structure: kernel, core, satellites, and grounding sets.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dictionary_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("dictionary", help="dictionary file")
        p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
        p.add_argument("--stoplist", help="stop-word file; omit for no stop filtering")

    p = sub.add_parser("decompose", help="kernel/core/satellite split and report")
    add_dictionary_options(p)
    p.add_argument("--out", help="write per-word labels (word<TAB>LABEL)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("mgs", help="minimal grounding set (exact or greedy)")
    add_dictionary_options(p)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--enumerate", type=int, metavar="N", help="list up to N optimal sets")
    p.add_argument("--greedy", action="store_true", help="greedy upper bound only")
    p.add_argument("--out", help="write the solver record as JSON")
    p.set_defaults(func=cmd_mgs)

    p = sub.add_parser("stats", help="ANOVA and stepwise regression against norms")
    add_dictionary_options(p)
    p.add_argument("--norms", required=True, help="norms CSV")
    p.add_argument("--mgs", help="grounding-set file (solver record or word list)")
    p.add_argument("--entry-p", type=float, default=0.05)
    p.add_argument("--variables", nargs="*", help="subset of norm variables")
    p.add_argument("--out", help="write the full report as JSON")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export-dot", help="definition graph as DOT")
    add_dictionary_options(p)
    p.add_argument("--labels", help="labels file from decompose --out, for coloring")
    p.add_argument("--out", help="output DOT path (stdout when omitted)")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("generate", help="seeded synthetic dictionary with planted structure")
    p.add_argument("--entries", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mean-def-len", type=float, default=10.0)
    p.add_argument("--core-frac", type=float, default=0.03)
    p.add_argument("--satellite-frac", type=float, default=0.025)
    p.add_argument("--coverage", type=float, default=1.0, help="fraction of words given norms")
    p.add_argument("--out", required=True, help="dictionary jsonl path")
    p.add_argument("--norms-out", help="planted norms CSV path")
    p.add_argument("--mgs-out", help="grounding-set word list path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="run the dictionary game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--stoplist", help="stop-word file (builtin list when omitted)")
    p.add_argument("--sessions", help="directory for session event logs")
    p.add_argument("--ui-dir", help="built UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LexiconError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
