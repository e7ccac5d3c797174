"""Extraversion model: numeric gesture parameters and rate reduction.

An extraversion score on the 7-point TIPI scale maps linearly between two
anchors.  The annotation default is the extravert performance (rate 1-2
gestures per sentence, neutral offsets and multipliers); the introvert
anchor narrows, lowers and slows the same gestures and halves the rate.
Introvert anchor numbers are engineering constants consistent with the
qualitative introvert/extravert contrasts (narrow vs wide, inward vs
outward, low vs high rate, slow vs fast); only the adaptation deltas have
published values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .catalog import GestureCatalog, lookup
from .dsl import AnnotatedDialog, Features, GestureAnnotation, Turn, segment_sentences
from .errors import DomainError

EXTRAVERSION_MIN = 1.0
EXTRAVERSION_MAX = 7.0


@dataclass(frozen=True)
class ParameterSet:
    """Numeric gesture-feature parameters for one agent."""

    rate_band: tuple[float, float]  # min/max gestures per sentence
    expanse_offset: float  # cm
    height_offset: float  # cm
    outwardness_offset: float  # cm
    speed_multiplier: float
    scale_multiplier: float

    def __post_init__(self):
        lo, hi = self.rate_band
        if not 0 <= lo <= hi:
            raise DomainError(f"bad rate band {self.rate_band}")
        for name in ("speed_multiplier", "scale_multiplier"):
            value = getattr(self, name)
            if not 0 < value <= 4:
                raise DomainError(f"{name} must be in (0, 4], got {value}")


EXTRAVERT_ANCHOR = ParameterSet(
    rate_band=(1.0, 2.0),
    expanse_offset=0.0,
    height_offset=0.0,
    outwardness_offset=0.0,
    speed_multiplier=1.0,
    scale_multiplier=1.0,
)

INTROVERT_ANCHOR = ParameterSet(
    rate_band=(0.0, 1.0),
    expanse_offset=-10.0,
    height_offset=-5.0,
    outwardness_offset=-10.0,
    speed_multiplier=0.8,
    scale_multiplier=0.8,
)


def profile_from_extraversion(
    e: float,
    introvert: ParameterSet = INTROVERT_ANCHOR,
    extravert: ParameterSet = EXTRAVERT_ANCHOR,
) -> ParameterSet:
    """Linear interpolation between the anchors at e=1 and e=7."""
    if not EXTRAVERSION_MIN <= e <= EXTRAVERSION_MAX:
        raise DomainError(f"extraversion must be in [1, 7], got {e}")
    t = (e - EXTRAVERSION_MIN) / (EXTRAVERSION_MAX - EXTRAVERSION_MIN)

    def lerp(a: float, b: float) -> float:
        return a + t * (b - a)

    return ParameterSet(
        rate_band=(
            lerp(introvert.rate_band[0], extravert.rate_band[0]),
            lerp(introvert.rate_band[1], extravert.rate_band[1]),
        ),
        expanse_offset=lerp(introvert.expanse_offset, extravert.expanse_offset),
        height_offset=lerp(introvert.height_offset, extravert.height_offset),
        outwardness_offset=lerp(introvert.outwardness_offset, extravert.outwardness_offset),
        speed_multiplier=lerp(introvert.speed_multiplier, extravert.speed_multiplier),
        scale_multiplier=lerp(introvert.scale_multiplier, extravert.scale_multiplier),
    )


@dataclass(frozen=True)
class PersonalityProfile:
    extraversion: float
    derived: ParameterSet

    @classmethod
    def from_extraversion(cls, e: float) -> "PersonalityProfile":
        return cls(extraversion=e, derived=profile_from_extraversion(e))


def _features_for(gesture_name: str, params: ParameterSet, catalog: GestureCatalog) -> Features:
    g = lookup(catalog, gesture_name)
    return Features(
        expanse_cm=g.base_expanse + params.expanse_offset,
        height_cm=g.base_height + params.height_offset,
        outwardness_cm=g.base_outwardness + params.outwardness_offset,
        speed=params.speed_multiplier,
        scale=params.scale_multiplier,
    )


def _rate_cap(params: ParameterSet) -> int:
    # round half up: a band max of 1.5 allows 2 gestures per sentence
    return int(params.rate_band[1] + 0.5)


def _cap_sentence(anns: list[GestureAnnotation], cap: int) -> set[int]:
    """Ids of annotations to drop so at most ``cap`` survive.

    Keeps the earliest strokes; copied gestures are never dropped while a
    non-copied one remains.
    """
    if len(anns) <= cap:
        return set()
    plain = [a for a in anns if not a.form_copied]
    copied = [a for a in anns if a.form_copied]
    drop_order = sorted(plain, key=lambda a: -a.stroke_begin) + sorted(copied, key=lambda a: -a.stroke_begin)
    return {id(a) for a in drop_order[: len(anns) - cap]}


def apply_personality(
    dialog: AnnotatedDialog,
    speaker: str,
    params: ParameterSet,
    catalog: GestureCatalog,
) -> AnnotatedDialog:
    """Stamp effective features on the speaker's annotations and enforce the
    per-sentence rate cap.

    Rate-added annotations are exempt from the cap (counted nor dropped):
    they only exist in adapted performances, whose rate band the adaptation
    stage owns.  Unknown gesture names (including alternatives) raise
    :class:`UnknownGestureError`.
    """
    cap = _rate_cap(params)
    new_turns: list[Turn] = []
    for turn in dialog.turns:
        if turn.speaker != speaker:
            new_turns.append(turn)
            continue
        to_drop: set[int] = set()
        for _, bucket in segment_sentences(turn):
            to_drop |= _cap_sentence([a for a in bucket if not a.rate_added], cap)
        kept = []
        for ann in turn.annotations:
            if id(ann) in to_drop:
                continue
            features = _features_for(ann.gesture_name, params, catalog)
            alt_features = (
                _features_for(ann.alternative.gesture_name, params, catalog)
                if ann.alternative is not None
                else None
            )
            kept.append(replace(ann, features=features, alt_features=alt_features))
        new_turns.append(replace(turn, annotations=kept))
    return AnnotatedDialog(
        story_id=dialog.story_id, turns=new_turns, audio_duration=dialog.audio_duration
    )
