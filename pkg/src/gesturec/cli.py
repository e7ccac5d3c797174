"""Command-line interface.

Subcommands::

    gesturec compile --dialog F --catalog F [--timings F] [options] --out DIR
    gesturec build --experiment personality|adaptation --stories DIR
                   --timings DIR --catalog FILE --out DIR [--strict] ...
    gesturec analyze --in CSV --report PATH

``compile`` runs one dialog through the pipeline and writes per-speaker
scripts.  ``build`` reproduces a whole experiment's stimulus set and its
manifest.  ``analyze`` scores a judgment CSV and writes a JSON report
while printing the tables.  Exit code is 0 only when every produced
timeline validates.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .align import parse_word_timings
from .catalog import load_catalog
from .config import (
    adaptation_from_config,
    anchors_from_config,
    load_config,
    scheduler_from_config,
)
from .dsl import parse_dialog
from .emitter import emit_script
from .errors import GesturecError
from .pipeline import PipelineSettings, compile_dialog
from .scheduler import validate_timeline
from .stimuli import run_adaptation_batch, run_personality_batch, write_bundles


def _parse_extraversion(text: str) -> dict[str, float]:
    scores = {"A": 7.0, "B": 7.0}
    for piece in text.split(","):
        speaker, sep, value = piece.partition("=")
        speaker = speaker.strip().upper()
        if not sep or speaker not in scores:
            raise argparse.ArgumentTypeError(f"expected A=<score>,B=<score>, got {text!r}")
        scores[speaker] = float(value)
    return scores


def _settings_from_args(args) -> PipelineSettings:
    cfg = load_config(Path(args.config).read_text(encoding="utf-8")) if args.config else {}
    return PipelineSettings(
        scheduler=scheduler_from_config(cfg),
        adaptation=adaptation_from_config(cfg),
        anchors=anchors_from_config(cfg),
        extraversion=getattr(args, "extraversion", None) or {"A": 7.0, "B": 7.0},
        strict=args.strict,
    )


def _load_stories(stories_dir: Path, timings_dir: Path | None):
    stories = {}
    for path in sorted(Path(stories_dir).glob("*.dialog")):
        dialog = parse_dialog(path.read_text(encoding="utf-8"), story_id=path.stem)
        track = None
        if timings_dir is not None:
            timing_path = Path(timings_dir) / f"{path.stem}.tsv"
            if not timing_path.exists():
                raise GesturecError(f"no timing track for story {path.stem!r} at {timing_path}")
            track = parse_word_timings(timing_path.read_text(encoding="utf-8"))
        stories[dialog.story_id or path.stem] = (dialog, track)
    if not stories:
        raise GesturecError(f"no .dialog files in {stories_dir}")
    return stories


def _cmd_compile(args) -> int:
    settings = _settings_from_args(args)
    catalog = load_catalog(Path(args.catalog).read_text(encoding="utf-8"))
    timings = (
        parse_word_timings(Path(args.timings).read_text(encoding="utf-8")) if args.timings else None
    )
    result = compile_dialog(
        Path(args.dialog).read_text(encoding="utf-8"),
        catalog,
        timings=timings,
        settings=settings,
        variant=args.variant,
        responder=args.responder,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    problems = []
    for speaker in ("A", "B"):
        timeline = result.schedule.for_speaker(speaker)
        problems.extend(validate_timeline(timeline))
        for fmt, suffix in (("json", "json"), ("text", "txt")):
            (out_dir / f"{speaker}.script.{suffix}").write_bytes(emit_script(timeline, fmt))
    for note in result.schedule.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    if problems:
        for problem in problems:
            print(f"invalid: {problem}", file=sys.stderr)
        return 1
    print(f"wrote scripts for A and B to {out_dir}")
    return 0


def _cmd_build(args) -> int:
    settings = _settings_from_args(args)
    catalog = load_catalog(Path(args.catalog).read_text(encoding="utf-8"))
    stories = _load_stories(Path(args.stories), Path(args.timings) if args.timings else None)
    if args.experiment == "personality":
        bundles = run_personality_batch(stories, catalog, settings)
    else:
        bundles = run_adaptation_batch(stories, catalog, settings)
    manifest = write_bundles(bundles, Path(args.out), args.experiment)
    print(f"wrote {manifest['bundle_count']} bundles to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    records = analysis.read_judgments(Path(args.infile).read_text(encoding="utf-8"))
    preference = [r for r in records if r.kind == "preference"]
    why = [r for r in records if r.kind == "why"]
    tipi = [r for r in records if r.kind == "tipi"]

    report: dict = {}
    if preference:
        table = analysis.preference_table(preference)
        print(analysis.format_preference_table(table))
        report["preference"] = {
            "rows": [
                {
                    "version": r.version,
                    "count_a": r.count_a,
                    "count_na": r.count_na,
                    "pct_a": round(r.pct_a, 1),
                    "pct_na": round(r.pct_na, 1),
                }
                for r in table.rows
            ],
            "totals": {
                "count_a": table.totals.count_a,
                "count_na": table.totals.count_na,
                "pct_a": round(table.totals.pct_a, 1),
                "pct_na": round(table.totals.pct_na, 1),
            },
        }
        if len(table.rows) >= 2:
            ttest = analysis.one_sample_ttest([r.pct_a for r in table.rows], 50.0)
            print(
                f"\npreference vs chance: t({ttest.df[0]:.0f}) = {ttest.value:.3f}, "
                f"p = {ttest.p_value:.3f}"
            )
            report["ttest_vs_50"] = {
                "t": ttest.value,
                "df": ttest.df[0],
                "p": ttest.p_value,
            }
    if why:
        table = analysis.why_category_table(why)
        print()
        print(analysis.format_why_table(table))
        report["why"] = {
            row.version: {cat: round(pct, 1) for cat, pct in row.percentages.items()}
            for row in table.rows + ((table.totals,) if table.totals else ())
        }
    if tipi:
        by_stimulus: dict[str, list[dict[str, float]]] = {}
        for record in tipi:
            by_stimulus.setdefault(record.stimulus_id, []).append(analysis.tipi_score(record.tipi_items))
        report["tipi_means"] = {
            stimulus: {
                trait: round(sum(s[trait] for s in scores) / len(scores), 2)
                for trait in analysis.TIPI_TRAITS
            }
            for stimulus, scores in sorted(by_stimulus.items())
        }
        print("\nTIPI trait means per stimulus:")
        for stimulus, means in report["tipi_means"].items():
            print(f"  {stimulus}: " + ", ".join(f"{t}={v}" for t, v in means.items()))

    Path(args.report).parent.mkdir(parents=True, exist_ok=True)
    Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"\nreport written to {args.report}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gesturec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="compile one dialog to gesture scripts")
    p_compile.add_argument("--dialog", required=True)
    p_compile.add_argument("--catalog", required=True)
    p_compile.add_argument("--timings")
    p_compile.add_argument("--out", required=True)
    p_compile.add_argument("--extraversion", type=_parse_extraversion, default=None,
                           help="per-speaker scores, e.g. A=7,B=1")
    p_compile.add_argument("--variant", choices=("adapted", "nonadapted"), default=None)
    p_compile.add_argument("--responder", choices=("A", "B"), default=None)
    p_compile.add_argument("--config", help="key = value overrides file")
    p_compile.add_argument("--strict", action="store_true", default=True)
    p_compile.add_argument("--lenient", dest="strict", action="store_false")
    p_compile.set_defaults(func=_cmd_compile)

    p_build = sub.add_parser("build", help="build an experiment's stimulus bundles")
    p_build.add_argument("--experiment", required=True, choices=("personality", "adaptation"))
    p_build.add_argument("--stories", required=True, help="directory of .dialog files")
    p_build.add_argument("--timings", help="directory of <story>.tsv timing tracks")
    p_build.add_argument("--catalog", required=True)
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--config")
    p_build.add_argument("--strict", action="store_true", default=True)
    p_build.add_argument("--lenient", dest="strict", action="store_false")
    p_build.set_defaults(func=_cmd_build)

    p_analyze = sub.add_parser("analyze", help="score a judgment CSV")
    p_analyze.add_argument("--in", dest="infile", required=True)
    p_analyze.add_argument("--report", required=True)
    p_analyze.set_defaults(func=_cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GesturecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
