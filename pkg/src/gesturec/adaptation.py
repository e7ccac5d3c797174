"""Gestural adaptation: resolving annotated dialogs into adapted or
non-adapted performances.

Adaptation is convergence toward the interlocutor: a higher gesture rate
(1-3 per sentence via the rate-added extras), copied gesture forms, and
larger, higher, faster strokes.  It occurs only in the final (response)
turn; all earlier turns (the context) render identically in both variants,
stripped of adaptation markers.

In the adapted response turn the rate-added annotations are retained, the
pre-slash variants are selected, and the convergence deltas stack on top
of the personality features: geometry offsets add, speed and scale
multiply.  In the non-adapted response turn rate-added annotations are
removed, the post-slash alternatives are selected (annotations without an
alternative keep their gesture with the copy flag cleared), and no deltas
apply.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .dsl import AnnotatedDialog, Features, GestureAnnotation, Turn
from .errors import DomainError, PlanError


@dataclass(frozen=True)
class AdaptationSpec:
    """Convergence deltas applied to the responder's response turn."""

    rate_band: tuple[float, float] = (1.0, 3.0)
    expanse_delta: float = 18.0  # cm further from center
    height_delta: float = 10.0  # cm higher
    outwardness_delta: float = 10.0  # cm more outward
    speed_factor: float = 1.25
    scale_factor: float = 1.5

    def __post_init__(self):
        for name in ("expanse_delta", "height_delta", "outwardness_delta"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0 (convergence is toward more extraverted)")
        for name in ("speed_factor", "scale_factor"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1 (convergence is toward more extraverted)")


@dataclass(frozen=True)
class VariantPlan:
    responder: str
    response_turn: int  # must be the final turn index
    adapted: bool


@dataclass(frozen=True)
class CopyProvenance:
    copy_turn: int
    copy: GestureAnnotation
    source_turn: int | None
    source: GestureAnnotation | None


def _nonadapted(ann: GestureAnnotation) -> GestureAnnotation | None:
    if ann.rate_added:
        return None
    if ann.alternative is not None:
        alt = ann.alternative
        return replace(
            ann,
            gesture_name=alt.gesture_name,
            hand=alt.hand,
            stroke_duration=alt.stroke_duration,
            form_copied=False,
            alternative=None,
            features=ann.alt_features,
            alt_features=None,
        )
    if ann.form_copied:
        return replace(ann, form_copied=False)
    return ann


def _adapted(ann: GestureAnnotation, spec: AdaptationSpec) -> GestureAnnotation:
    if ann.features is None:
        raise ValueError(
            f"annotation at {ann.stroke_begin:.2f}s has no effective features; "
            "apply personality before resolving the adapted variant"
        )
    f = ann.features
    adapted_features = Features(
        expanse_cm=f.expanse_cm + spec.expanse_delta,
        height_cm=f.height_cm + spec.height_delta,
        outwardness_cm=f.outwardness_cm + spec.outwardness_delta,
        speed=f.speed * spec.speed_factor,
        scale=f.scale * spec.scale_factor,
    )
    return replace(ann, alternative=None, features=adapted_features, alt_features=None)


def _resolve_turn(turn: Turn, adapted: bool, spec: AdaptationSpec) -> Turn:
    if adapted:
        annotations = [_adapted(a, spec) for a in turn.annotations]
    else:
        annotations = [r for a in turn.annotations if (r := _nonadapted(a)) is not None]
    return replace(turn, annotations=annotations)


def resolve_variant(
    dialog: AnnotatedDialog,
    plan: VariantPlan,
    spec: AdaptationSpec = AdaptationSpec(),
) -> AnnotatedDialog:
    """Resolve markers into one concrete performance.

    Context turns (everything before the response turn) are rendered
    without adaptation in both variants, so the two outputs differ only in
    the response turn.
    """
    if not dialog.turns:
        raise PlanError("dialog has no turns")
    if plan.response_turn != dialog.turns[-1].index:
        raise PlanError(
            f"response turn {plan.response_turn} is not the final turn {dialog.turns[-1].index}"
        )
    if dialog.turns[-1].speaker != plan.responder:
        raise PlanError(
            f"responder {plan.responder} does not speak turn {plan.response_turn} "
            f"({dialog.turns[-1].speaker} does)"
        )
    turns = [
        _resolve_turn(t, adapted=plan.adapted and t.index == plan.response_turn, spec=spec)
        for t in dialog.turns
    ]
    return AnnotatedDialog(story_id=dialog.story_id, turns=turns, audio_duration=dialog.audio_duration)


def strip_adaptation(dialog: AnnotatedDialog) -> AnnotatedDialog:
    """Non-adapted rendering of every turn (no response turn at all)."""
    turns = [_resolve_turn(t, adapted=False, spec=AdaptationSpec()) for t in dialog.turns]
    return AnnotatedDialog(story_id=dialog.story_id, turns=turns, audio_duration=dialog.audio_duration)


def check_copy_provenance(dialog: AnnotatedDialog) -> list[CopyProvenance]:
    """Pair each copied gesture in the final turn with its source: the most
    recent earlier annotation by the other speaker with the same gesture
    name.  Unmatched copies are reported with a ``None`` source.
    """
    if not dialog.turns:
        return []
    final = dialog.turns[-1]
    pairs: list[CopyProvenance] = []
    for copy in final.annotations:
        if not copy.form_copied:
            continue
        found: tuple[int, GestureAnnotation] | None = None
        for turn in reversed(dialog.turns[:-1]):
            if turn.speaker == final.speaker:
                continue
            for ann in reversed(turn.annotations):
                if ann.gesture_name == copy.gesture_name:
                    found = (turn.index, ann)
                    break
            if found:
                break
        pairs.append(
            CopyProvenance(
                copy_turn=final.index,
                copy=copy,
                source_turn=found[0] if found else None,
                source=found[1] if found else None,
            )
        )
    return pairs
