"""End-to-end compilation of one dialog: parse, align, personality,
variant resolution, scheduling."""

from __future__ import annotations

from dataclasses import dataclass, field

from .adaptation import AdaptationSpec, VariantPlan, resolve_variant, strip_adaptation
from .align import WordTimingTrack, align_strokes
from .catalog import GestureCatalog
from .dsl import AnnotatedDialog, parse_dialog
from .errors import PlanError
from .personality import (
    EXTRAVERT_ANCHOR,
    INTROVERT_ANCHOR,
    ParameterSet,
    apply_personality,
    profile_from_extraversion,
)
from .scheduler import SchedulerConfig, ScheduleResult, schedule


@dataclass(frozen=True)
class PipelineSettings:
    scheduler: SchedulerConfig = SchedulerConfig()
    adaptation: AdaptationSpec = AdaptationSpec()
    anchors: tuple[ParameterSet, ParameterSet] = (INTROVERT_ANCHOR, EXTRAVERT_ANCHOR)
    extraversion: dict[str, float] = field(default_factory=lambda: {"A": 7.0, "B": 7.0})
    strict: bool = True

    def profile(self, speaker: str) -> ParameterSet:
        introvert, extravert = self.anchors
        return profile_from_extraversion(self.extraversion[speaker], introvert, extravert)


@dataclass
class CompileResult:
    dialog: AnnotatedDialog  # aligned, personality-stamped, variant-resolved
    schedule: ScheduleResult


def prepare_dialog(
    dialog: AnnotatedDialog,
    catalog: GestureCatalog,
    track: WordTimingTrack | None,
    settings: PipelineSettings,
    profiles: dict[str, ParameterSet] | None = None,
) -> AnnotatedDialog:
    """Align against the timing track and stamp personality features.

    ``profiles`` overrides the parameter sets derived from the settings'
    per-speaker extraversion scores.
    """
    if track is not None:
        dialog = align_strokes(dialog, track, lead=settings.scheduler.stroke_lead_s)
    for speaker in ("A", "B"):
        params = profiles[speaker] if profiles else settings.profile(speaker)
        dialog = apply_personality(dialog, speaker, params, catalog)
    return dialog


def compile_dialog(
    source: str,
    catalog: GestureCatalog,
    timings: WordTimingTrack | None = None,
    settings: PipelineSettings = PipelineSettings(),
    variant: str | None = None,
    responder: str | None = None,
) -> CompileResult:
    """Full pipeline for one dialog document.

    With ``variant`` unset the dialog renders without adaptation anywhere.
    ``variant='adapted'`` or ``'nonadapted'`` resolves the final turn as a
    response turn for ``responder`` (defaults to that turn's speaker).
    """
    dialog = prepare_dialog(parse_dialog(source), catalog, timings, settings)
    if variant is None:
        resolved = strip_adaptation(dialog)
    else:
        if variant not in ("adapted", "nonadapted"):
            raise PlanError(f"unknown variant {variant!r}")
        if not dialog.turns:
            raise PlanError("dialog has no turns")
        final = dialog.turns[-1]
        plan = VariantPlan(
            responder=responder or final.speaker,
            response_turn=final.index,
            adapted=(variant == "adapted"),
        )
        resolved = resolve_variant(dialog, plan, settings.adaptation)
    result = schedule(resolved, settings.scheduler, strict=settings.strict)
    return CompileResult(dialog=resolved, schedule=result)
