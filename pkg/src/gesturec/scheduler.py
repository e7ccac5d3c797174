"""Compile resolved annotations into per-agent, per-arm phase timelines.

Every gesture unfolds in up to four phases: prep (arms move from rest or
from the previous gesture's end to the stroke start), stroke (the
meaning-bearing movement), hold (freeze at the stroke end) and retract
(return to rest).  For two consecutive strokes on the same arm with gap
``g`` between stroke end and next stroke start:

* ``g`` below the hold threshold (2.5s): a hold bridges to a connecting
  prep that ends exactly at the next stroke.  When the gap is shorter than
  the prep itself, the hold is dropped and the prep compresses to ``g``.
* otherwise: a retraction, rest, and a fresh prep before the next stroke.

A prep precedes the first stroke of each arm and a retract follows the
last one (compressed or omitted when the audio ends first).  Stroke start
times are never moved; in strict mode conflicting or overrunning strokes
raise, in lenient mode they are dropped with a diagnostic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .dsl import AnnotatedDialog, Features, GestureAnnotation
from .errors import ScheduleError, StrokeOverlapError, StrokeOverrunError

PREP = "prep"
STROKE = "stroke"
HOLD = "hold"
RETRACT = "retract"

ARMS = ("left", "right")

_TIE = 1e-9


@dataclass(frozen=True)
class SchedulerConfig:
    hold_threshold_s: float = 2.5
    prep_duration_s: float = 0.3
    retract_duration_s: float = 0.5
    stroke_lead_s: float = 0.2  # consumed by the alignment stage
    retract_on_turn_end: bool = False

    def __post_init__(self):
        if self.prep_duration_s <= 0 or self.retract_duration_s <= 0:
            raise ScheduleError("prep and retract durations must be > 0")
        if self.hold_threshold_s < self.prep_duration_s + self.retract_duration_s:
            raise ScheduleError("hold threshold must cover prep + retract")
        if self.stroke_lead_s < 0:
            raise ScheduleError("stroke lead must be >= 0")

    def fingerprint(self) -> str:
        text = (
            f"hold={self.hold_threshold_s!r};prep={self.prep_duration_s!r};"
            f"retract={self.retract_duration_s!r};lead={self.stroke_lead_s!r};"
            f"turn_end={self.retract_on_turn_end!r}"
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass
class GesturePhase:
    kind: str
    start: float
    end: float
    gesture: GestureAnnotation | None = None
    features: Features | None = None


@dataclass
class ArmTrack:
    arm: str
    phases: list[GesturePhase] = field(default_factory=list)

    def strokes(self) -> list[GesturePhase]:
        return [p for p in self.phases if p.kind == STROKE]


@dataclass
class Timeline:
    speaker: str
    tracks: dict[str, ArmTrack]
    audio_duration: float
    story_id: str = ""
    config_fingerprint: str = ""


@dataclass
class ScheduleResult:
    a: Timeline
    b: Timeline
    diagnostics: list[str]

    def for_speaker(self, speaker: str) -> Timeline:
        return self.a if speaker == "A" else self.b


@dataclass(frozen=True)
class _Stroke:
    start: float
    end: float
    turn_index: int
    annotation: GestureAnnotation


def _arms_of(hand: str) -> tuple[str, ...]:
    if hand == "LH":
        return ("left",)
    if hand == "RH":
        return ("right",)
    return ARMS


def _collect_strokes(dialog: AnnotatedDialog, speaker: str) -> list[_Stroke]:
    strokes = []
    for turn in dialog.turns:
        if turn.speaker != speaker:
            continue
        for ann in turn.annotations:
            if ann.features is None:
                raise ValueError(
                    f"annotation at {ann.stroke_begin:.2f}s has no effective features; "
                    "apply personality before scheduling"
                )
            duration = ann.stroke_duration / ann.features.speed
            strokes.append(
                _Stroke(
                    start=ann.stroke_begin,
                    end=ann.stroke_begin + duration,
                    turn_index=turn.index,
                    annotation=ann,
                )
            )
    strokes.sort(key=lambda s: (s.start, s.annotation.hand))
    return strokes


def _admit_strokes(
    strokes: list[_Stroke],
    audio_duration: float,
    speaker: str,
    strict: bool,
    diagnostics: list[str],
) -> dict[str, list[_Stroke]]:
    """Assign strokes to arms, rejecting conflicts.

    A stroke must start strictly after the previous stroke ends on every
    arm it uses, and must end within the audio.  A rejected 2H stroke is
    dropped from both arms.
    """
    per_arm: dict[str, list[_Stroke]] = {arm: [] for arm in ARMS}
    last_end = {arm: float("-inf") for arm in ARMS}
    for stroke in strokes:
        arms = _arms_of(stroke.annotation.hand)
        if stroke.end > audio_duration + _TIE:
            message = (
                f"{speaker}: stroke {stroke.annotation.gesture_name!r} at {stroke.start:.3f}s "
                f"runs past the audio end ({stroke.end:.3f}s > {audio_duration:.3f}s)"
            )
            if strict:
                raise StrokeOverrunError(message)
            diagnostics.append(f"dropped: {message}")
            continue
        blocked = next((arm for arm in arms if stroke.start <= last_end[arm] + _TIE), None)
        if blocked is not None:
            message = (
                f"{speaker}/{blocked}: stroke {stroke.annotation.gesture_name!r} at "
                f"{stroke.start:.3f}s overlaps the previous stroke ending at {last_end[blocked]:.3f}s"
            )
            if strict:
                raise StrokeOverlapError(message)
            diagnostics.append(f"dropped: {message}")
            continue
        for arm in arms:
            per_arm[arm].append(stroke)
            last_end[arm] = stroke.end
    return per_arm


def _connect(track: ArmTrack, cur: _Stroke, nxt: _Stroke, config: SchedulerConfig) -> None:
    gap = nxt.start - cur.end
    prep_d = config.prep_duration_s
    force_retract = (
        config.retract_on_turn_end
        and nxt.turn_index != cur.turn_index
        and gap >= config.retract_duration_s + prep_d
    )
    if gap < config.hold_threshold_s and not force_retract:
        hold_end = nxt.start - prep_d
        if hold_end > cur.end + _TIE:
            track.phases.append(GesturePhase(HOLD, cur.end, hold_end))
            track.phases.append(GesturePhase(PREP, hold_end, nxt.start))
        else:
            track.phases.append(GesturePhase(PREP, cur.end, nxt.start))
    else:
        track.phases.append(GesturePhase(RETRACT, cur.end, cur.end + config.retract_duration_s))
        track.phases.append(GesturePhase(PREP, nxt.start - prep_d, nxt.start))


def _build_track(arm: str, strokes: list[_Stroke], audio: float, config: SchedulerConfig) -> ArmTrack:
    track = ArmTrack(arm=arm)
    if not strokes:
        return track
    first = strokes[0]
    if first.start > _TIE:
        track.phases.append(GesturePhase(PREP, max(0.0, first.start - config.prep_duration_s), first.start))
    for i, stroke in enumerate(strokes):
        track.phases.append(
            GesturePhase(
                STROKE,
                stroke.start,
                stroke.end,
                gesture=stroke.annotation,
                features=stroke.annotation.features,
            )
        )
        if i + 1 < len(strokes):
            _connect(track, stroke, strokes[i + 1], config)
    last = strokes[-1]
    retract_end = min(last.end + config.retract_duration_s, audio)
    if retract_end > last.end + _TIE:
        track.phases.append(GesturePhase(RETRACT, last.end, retract_end))
    return track


def schedule(
    dialog: AnnotatedDialog,
    config: SchedulerConfig = SchedulerConfig(),
    strict: bool = True,
) -> ScheduleResult:
    """Build per-arm timelines for both speakers."""
    diagnostics: list[str] = []
    timelines = {}
    for speaker in ("A", "B"):
        strokes = _collect_strokes(dialog, speaker)
        per_arm = _admit_strokes(strokes, dialog.audio_duration, speaker, strict, diagnostics)
        tracks = {
            arm: _build_track(arm, per_arm[arm], dialog.audio_duration, config) for arm in ARMS
        }
        timelines[speaker] = Timeline(
            speaker=speaker,
            tracks=tracks,
            audio_duration=dialog.audio_duration,
            story_id=dialog.story_id,
            config_fingerprint=config.fingerprint(),
        )
    return ScheduleResult(a=timelines["A"], b=timelines["B"], diagnostics=diagnostics)


_AFTER = {
    PREP: (STROKE,),
    STROKE: (HOLD, PREP, RETRACT),
    HOLD: (PREP,),
    RETRACT: (PREP,),
}


def validate_timeline(timeline: Timeline) -> list[str]:
    """Structural diagnostics; empty means the timeline is well formed."""
    problems: list[str] = []
    for arm in ARMS:
        track = timeline.tracks.get(arm)
        if track is None:
            problems.append(f"{arm}: track missing")
            continue
        phases = track.phases
        for i, p in enumerate(phases):
            where = f"{arm}[{i}]"
            if p.kind not in _AFTER:
                problems.append(f"{where}: unknown phase kind {p.kind!r}")
                continue
            if not p.start < p.end:
                problems.append(f"{where}: start {p.start:.3f} not before end {p.end:.3f}")
            if p.start < -_TIE or p.end > timeline.audio_duration + _TIE:
                problems.append(f"{where}: outside [0, {timeline.audio_duration:.3f}]")
            if p.kind == STROKE:
                if p.gesture is None:
                    problems.append(f"{where}: stroke without a gesture reference")
                if p.features is None:
                    problems.append(f"{where}: stroke without effective features")
            elif p.gesture is not None:
                problems.append(f"{where}: {p.kind} must not carry a gesture reference")
        for i in range(len(phases) - 1):
            p, q = phases[i], phases[i + 1]
            where = f"{arm}[{i}->{i + 1}]"
            if q.start < p.end - _TIE:
                problems.append(f"{where}: phases overlap ({p.kind} ends {p.end:.3f}, {q.kind} starts {q.start:.3f})")
            if q.kind not in _AFTER.get(p.kind, ()):
                problems.append(f"{where}: {p.kind} may not be followed by {q.kind}")
            # only retract->prep may leave a rest gap
            if p.kind != RETRACT and q.start > p.end + _TIE:
                problems.append(f"{where}: gap between {p.kind} and {q.kind}")
        if phases:
            head, tail = phases[0], phases[-1]
            if head.kind != PREP and not (head.kind == STROKE and head.start <= _TIE):
                problems.append(f"{arm}[0]: track must begin with a prep")
            if tail.kind != RETRACT and not (tail.end >= timeline.audio_duration - _TIE):
                problems.append(f"{arm}[{len(phases) - 1}]: track must end with a retract")
    problems.extend(_check_two_hand_sync(timeline))
    return problems


def _check_two_hand_sync(timeline: Timeline) -> list[str]:
    problems = []
    sides = {}
    for arm in ARMS:
        track = timeline.tracks.get(arm)
        sides[arm] = {
            (p.start, p.end, p.gesture.gesture_name)
            for p in (track.phases if track else [])
            if p.kind == STROKE and p.gesture is not None and p.gesture.hand == "2H"
        }
    for arm, other in (("left", "right"), ("right", "left")):
        for key in sides[arm] - sides[other]:
            problems.append(
                f"{arm}: two-hand stroke at {key[0]:.3f}s has no synchronized twin on the {other} arm"
            )
    return problems
