"""Batch construction of experiment stimuli.

Two experiment families:

* personality: per story, two bundles with identical gesture scripts in
  which only the agent genders (model and voice) are swapped, one with the
  female agent extraverted, one with the male.
* adaptation: per task (story plus turn structure such as ABA or ABABA),
  an adapted and a non-adapted bundle sharing byte-identical context turns
  and the same audio reference, diverging only in the final response turn.

A bundle is a directory with one JSON and one text script per speaker plus
a ``bundle.json`` metadata file; a batch writes ``manifest.json`` at the
output root.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .adaptation import VariantPlan, resolve_variant, strip_adaptation
from .align import WordTimingTrack
from .catalog import GestureCatalog
from .dsl import AnnotatedDialog, truncate_dialog
from .emitter import emit_script
from .errors import PlanError
from .personality import ParameterSet, profile_from_extraversion
from .pipeline import PipelineSettings, prepare_dialog
from .scheduler import schedule

GENDER_VOICE = {"F": "crystal", "M": "mike"}
GENDER_MODEL = {"F": "f01", "M": "m01"}

# Speaker role A is performed by the female agent, B by the male, in the
# adaptation experiment; the personality experiment swaps genders per plan.
ADAPTATION_GENDERS = {"A": "F", "B": "M"}

PERSONALITY_ASSIGNMENTS = ("F-extravert", "M-extravert")

# The eight shipped adaptation tasks: two turn structures per story, one
# ending on each agent.  The responder is the speaker of the final letter.
ADAPTATION_TASKS: tuple[tuple[str, str], ...] = (
    ("garden", "ABA"),
    ("garden", "ABAB"),
    ("pet", "ABABA"),
    ("pet", "ABABAB"),
    ("protest", "ABAB"),
    ("protest", "ABABA"),
    ("storm", "ABABA"),
    ("storm", "ABABAB"),
)

DEFAULT_EXTRAVERT_SCORE = 7.0
DEFAULT_INTROVERT_SCORE = 1.0


@dataclass(frozen=True)
class StimulusPlan:
    story_id: str
    experiment: str  # "personality" | "adaptation"
    extraverted_role: str = "A"
    turn_structure: str = ""
    responder: str = ""


@dataclass
class StimulusBundle:
    name: str  # directory path relative to the batch output root
    story_id: str
    experiment: str
    label: str
    metadata: dict
    scripts: dict[str, bytes]  # filename -> content


def _agents_metadata(gender_of: dict[str, str]) -> dict:
    return {
        speaker: {
            "gender": gender,
            "voice": GENDER_VOICE[gender],
            "model": GENDER_MODEL[gender],
        }
        for speaker, gender in sorted(gender_of.items())
    }


def _speaker_scripts(result) -> dict[str, bytes]:
    files = {}
    for speaker in ("A", "B"):
        timeline = result.for_speaker(speaker)
        files[f"{speaker}.script.json"] = emit_script(timeline, "json")
        files[f"{speaker}.script.txt"] = emit_script(timeline, "text")
    return files


def build_personality_pair(
    dialog: AnnotatedDialog,
    plan: StimulusPlan,
    profiles: dict[str, ParameterSet],
    catalog: GestureCatalog,
    settings: PipelineSettings = PipelineSettings(),
    track: WordTimingTrack | None = None,
    extraversion_scores: dict[str, float] | None = None,
) -> tuple[StimulusBundle, StimulusBundle]:
    """Two stimulus bundles whose gesture scripts are identical per role;
    only the gender metadata differs between them."""
    prepared = prepare_dialog(dialog, catalog, track, settings, profiles=profiles)
    resolved = strip_adaptation(prepared)
    result = schedule(resolved, settings.scheduler, strict=settings.strict)
    scripts = _speaker_scripts(result)

    extraversion = dict(extraversion_scores or {})
    bundles = []
    for label, assignment in zip(("A", "B"), PERSONALITY_ASSIGNMENTS):
        extravert_gender = assignment[0]  # "F" or "M"
        other_gender = "M" if extravert_gender == "F" else "F"
        gender_of = {
            plan.extraverted_role: extravert_gender,
            ("B" if plan.extraverted_role == "A" else "A"): other_gender,
        }
        metadata = {
            "story": dialog.story_id,
            "experiment": "personality",
            "gender_assignment": assignment,
            "label": label,
            "extraverted_role": plan.extraverted_role,
            "extraversion": extraversion,
            "agents": _agents_metadata(gender_of),
            "audio": f"{dialog.story_id}.wav",
            "scripts": {"A": "A.script.json", "B": "B.script.json"},
        }
        bundles.append(
            StimulusBundle(
                name=f"{dialog.story_id}/{assignment}",
                story_id=dialog.story_id,
                experiment="personality",
                label=label,
                metadata=metadata,
                scripts=dict(scripts),
            )
        )
    return bundles[0], bundles[1]


def _validate_structure(dialog: AnnotatedDialog, structure: str) -> None:
    if len(structure) < 2:
        raise PlanError(f"turn structure too short: {structure!r}")
    if len(structure) > len(dialog.turns):
        raise PlanError(
            f"structure {structure!r} needs {len(structure)} turns, "
            f"dialog {dialog.story_id!r} has {len(dialog.turns)}"
        )
    actual = "".join(t.speaker for t in dialog.turns[: len(structure)])
    if actual != structure:
        raise PlanError(f"structure {structure!r} does not match dialog turns {actual!r}")


def build_adaptation_pair(
    dialog: AnnotatedDialog,
    plan: StimulusPlan,
    catalog: GestureCatalog,
    settings: PipelineSettings = PipelineSettings(),
    track: WordTimingTrack | None = None,
) -> tuple[StimulusBundle, StimulusBundle]:
    """(adapted, non-adapted) bundles for one task.

    The dialog is truncated to the turn structure; both bundles share the
    context turns and the audio reference and differ only in the response
    turn, resolved through the adaptation transforms.
    """
    _validate_structure(dialog, plan.turn_structure)
    responder = plan.responder or plan.turn_structure[-1]
    if responder != plan.turn_structure[-1]:
        raise PlanError(
            f"responder {responder!r} does not speak the final turn of {plan.turn_structure!r}"
        )
    truncated = truncate_dialog(dialog, len(plan.turn_structure))
    prepared = prepare_dialog(truncated, catalog, track, settings)
    task = f"{dialog.story_id}_{plan.turn_structure}"

    bundles = []
    for label, variant in zip(("A", "B"), ("adapted", "nonadapted")):
        variant_plan = VariantPlan(
            responder=responder,
            response_turn=prepared.turns[-1].index,
            adapted=(variant == "adapted"),
        )
        resolved = resolve_variant(prepared, variant_plan, settings.adaptation)
        result = schedule(resolved, settings.scheduler, strict=settings.strict)
        metadata = {
            "story": dialog.story_id,
            "experiment": "adaptation",
            "task": task,
            "turn_structure": plan.turn_structure,
            "responder": responder,
            "context_turns": len(plan.turn_structure) - 1,
            "variant": variant,
            "label": label,
            "agents": _agents_metadata(ADAPTATION_GENDERS),
            "audio": f"{dialog.story_id}.wav",
            "scripts": {"A": "A.script.json", "B": "B.script.json"},
        }
        bundles.append(
            StimulusBundle(
                name=f"{task}/{variant}",
                story_id=dialog.story_id,
                experiment="adaptation",
                label=label,
                metadata=metadata,
                scripts=_speaker_scripts(result),
            )
        )
    return bundles[0], bundles[1]


def run_personality_batch(
    stories: dict[str, tuple[AnnotatedDialog, WordTimingTrack | None]],
    catalog: GestureCatalog,
    settings: PipelineSettings = PipelineSettings(),
    extraverted_role: str = "A",
) -> list[StimulusBundle]:
    """8 bundles for 4 stories: two gender assignments each."""
    introvert, extravert = settings.anchors
    bundles: list[StimulusBundle] = []
    for story_id in sorted(stories):
        dialog, track = stories[story_id]
        other = "B" if extraverted_role == "A" else "A"
        scores = {extraverted_role: DEFAULT_EXTRAVERT_SCORE, other: DEFAULT_INTROVERT_SCORE}
        profiles = {
            speaker: profile_from_extraversion(score, introvert, extravert)
            for speaker, score in scores.items()
        }
        plan = StimulusPlan(story_id=story_id, experiment="personality", extraverted_role=extraverted_role)
        bundles.extend(
            build_personality_pair(
                dialog, plan, profiles, catalog, settings, track, extraversion_scores=scores
            )
        )
    return bundles


def run_adaptation_batch(
    stories: dict[str, tuple[AnnotatedDialog, WordTimingTrack | None]],
    catalog: GestureCatalog,
    settings: PipelineSettings = PipelineSettings(),
    tasks: tuple[tuple[str, str], ...] = ADAPTATION_TASKS,
) -> list[StimulusBundle]:
    """16 bundles for the 8 shipped tasks: adapted and non-adapted each."""
    bundles: list[StimulusBundle] = []
    for story_id, structure in tasks:
        if story_id not in stories:
            raise PlanError(f"no story {story_id!r} for task {story_id}_{structure}")
        dialog, track = stories[story_id]
        plan = StimulusPlan(
            story_id=story_id,
            experiment="adaptation",
            turn_structure=structure,
            responder=structure[-1],
        )
        bundles.extend(build_adaptation_pair(dialog, plan, catalog, settings, track))
    return bundles


def write_bundles(bundles: list[StimulusBundle], out_dir: Path, experiment: str) -> dict:
    """Write bundle directories plus a manifest; returns the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_entries = []
    for bundle in bundles:
        bundle_dir = out_dir / bundle.name
        bundle_dir.mkdir(parents=True, exist_ok=True)
        for filename, content in sorted(bundle.scripts.items()):
            (bundle_dir / filename).write_bytes(content)
        (bundle_dir / "bundle.json").write_text(
            json.dumps(bundle.metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        manifest_entries.append(
            {
                "story": bundle.story_id,
                "experiment": bundle.experiment,
                "label": bundle.label,
                "path": bundle.name,
            }
        )
    manifest = {
        "experiment": experiment,
        "bundle_count": len(bundles),
        "bundles": manifest_entries,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
