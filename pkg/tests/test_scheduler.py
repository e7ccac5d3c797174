from __future__ import annotations

import random

import pytest

from conftest import make_stroke_dialog, neutral_features
from gesturec.align import align_strokes
from gesturec.dsl import GestureAnnotation, parse_dialog
from gesturec.errors import ScheduleError, StrokeOverlapError, StrokeOverrunError
from gesturec.personality import EXTRAVERT_ANCHOR, apply_personality
from gesturec.scheduler import (
    GesturePhase,
    SchedulerConfig,
    Timeline,
    schedule,
    validate_timeline,
)


def _single(catalog, source):
    dialog = parse_dialog(source)
    for speaker in ("A", "B"):
        dialog = apply_personality(dialog, speaker, EXTRAVERT_ANCHOR, catalog)
    return dialog


def _kinds(timeline, arm):
    return [p.kind for p in timeline.tracks[arm].phases]


def test_fixture_hold_between_close_strokes(protest_dialog, protest_track, catalog):
    dialog = align_strokes(protest_dialog, protest_track)
    for speaker in ("A", "B"):
        dialog = apply_personality(dialog, speaker, EXTRAVERT_ANCHOR, catalog)
    timeline = schedule(dialog).a
    phases = timeline.tracks["right"].phases
    # Cup stroke [1.90, 2.36], PointingAbstract stroke at 3.17: gap 0.81 < 2.5
    assert phases[1].kind == "stroke" and phases[1].gesture.gesture_name == "Cup"
    hold, prep = phases[2], phases[3]
    assert hold.kind == "hold"
    assert hold.start == pytest.approx(2.36)
    assert hold.end == pytest.approx(2.87)
    assert prep.kind == "prep"
    assert prep.start == pytest.approx(2.87)
    assert prep.end == pytest.approx(3.17)


def test_far_strokes_get_retract_then_prep(catalog):
    source = "audio: 12.00s\nA1: [1.00s](Cup, RH 0.46s) one two three four [6.00s](Reject, RH 0.44s) five.\n"
    timeline = schedule(_single(catalog, source)).a
    assert _kinds(timeline, "right") == ["prep", "stroke", "retract", "prep", "stroke", "retract"]
    retract = timeline.tracks["right"].phases[2]
    assert retract.start == pytest.approx(1.46)
    assert retract.end == pytest.approx(1.96)
    prep = timeline.tracks["right"].phases[3]
    assert prep.end == pytest.approx(6.00)
    assert prep.start == pytest.approx(5.70)


def test_single_gesture_prep_stroke_retract(catalog):
    timeline = schedule(_single(catalog, "audio: 5.00s\nA1: [1.00s](Cup, RH 0.46s) word.\n")).a
    assert _kinds(timeline, "right") == ["prep", "stroke", "retract"]
    assert _kinds(timeline, "left") == []


def test_gap_shorter_than_prep_compresses(catalog):
    source = "audio: 6.00s\nA1: [1.00s](Cup, RH 0.46s) one [1.66s](Reject, RH 0.44s) two.\n"
    timeline = schedule(_single(catalog, source)).a
    kinds = _kinds(timeline, "right")
    assert kinds == ["prep", "stroke", "prep", "stroke", "retract"]
    bridge = timeline.tracks["right"].phases[2]
    assert bridge.start == pytest.approx(1.46)
    assert bridge.end == pytest.approx(1.66)
    assert validate_timeline(timeline) == []


def test_threshold_boundary_uses_retract(catalog):
    # gap exactly 2.5 is not "less than": retract
    source = "audio: 10.00s\nA1: [1.00s](Cup, RH 0.46s) one two three [3.96s](Reject, RH 0.44s) four.\n"
    timeline = schedule(_single(catalog, source)).a
    assert "retract" in _kinds(timeline, "right")[:3]


def test_two_hand_gesture_locks_both_arms(catalog):
    source = "audio: 8.00s\nA1: [1.00s](Cup_Up, 2H 0.34s) one word.\n"
    timeline = schedule(_single(catalog, source)).a
    left = timeline.tracks["left"].strokes()[0]
    right = timeline.tracks["right"].strokes()[0]
    assert (left.start, left.end) == (right.start, right.end)
    assert validate_timeline(timeline) == []


def test_overlap_strict_raises(catalog):
    source = "audio: 8.00s\nA1: [1.00s](Regressive, RH 1.14s) one [1.50s](Cup, RH 0.46s) two.\n"
    with pytest.raises(StrokeOverlapError):
        schedule(_single(catalog, source), strict=True)


def test_overlap_lenient_drops_later(catalog):
    source = "audio: 8.00s\nA1: [1.00s](Regressive, RH 1.14s) one [1.50s](Cup, RH 0.46s) two.\n"
    result = schedule(_single(catalog, source), strict=False)
    names = [p.gesture.gesture_name for p in result.a.tracks["right"].strokes()]
    assert names == ["Regressive"]
    assert len(result.diagnostics) == 1
    assert "overlaps" in result.diagnostics[0]
    assert validate_timeline(result.a) == []


def test_one_hand_conflicting_with_two_hand(catalog):
    source = "audio: 8.00s\nA1: [1.00s](Cup_Up, 2H 0.34s) one [1.20s](Cup, RH 0.46s) two.\n"
    with pytest.raises(StrokeOverlapError):
        schedule(_single(catalog, source), strict=True)


def test_overrun_strict_and_lenient(catalog):
    from gesturec.personality import INTROVERT_ANCHOR

    # stroke fits as annotated but overruns once slowed to introvert speed
    dialog = parse_dialog("audio: 1.50s\nA1: [1.00s](Cup, RH 0.46s) word.\n")
    dialog = apply_personality(dialog, "A", INTROVERT_ANCHOR, catalog)
    with pytest.raises(StrokeOverrunError):
        schedule(dialog, strict=True)
    result = schedule(dialog, strict=False)
    assert result.a.tracks["right"].phases == []
    assert len(result.diagnostics) == 1


def test_stroke_times_never_move(catalog):
    rng = random.Random(7)
    for _ in range(50):
        dialog = make_stroke_dialog(rng)
        expected = [a.stroke_begin for t in dialog.turns for a in t.annotations]
        timeline = schedule(dialog).a
        starts = sorted(
            {p.start for arm in ("left", "right") for p in timeline.tracks[arm].strokes()}
        )
        assert starts == sorted(set(expected))


def test_schedule_is_deterministic(catalog, protest_dialog, protest_track):
    dialog = align_strokes(protest_dialog, protest_track)
    for speaker in ("A", "B"):
        dialog = apply_personality(dialog, speaker, EXTRAVERT_ANCHOR, catalog)
    from gesturec.emitter import emit_script

    one = schedule(dialog)
    two = schedule(dialog)
    assert emit_script(one.a) == emit_script(two.a)
    assert emit_script(one.b) == emit_script(two.b)


def test_retract_on_turn_end_flag(catalog):
    source = (
        "audio: 12.00s\n"
        "A1: [1.00s](Cup, RH 0.46s) one.\n"
        "B1: word.\n"
        "A2: [3.00s](Reject, RH 0.44s) two.\n"
    )
    dialog = _single(catalog, source)
    default = schedule(dialog).a
    assert "hold" in _kinds(default, "right")  # gap 1.54 < 2.5
    forced = schedule(dialog, SchedulerConfig(retract_on_turn_end=True)).a
    kinds = _kinds(forced, "right")
    assert "hold" not in kinds
    assert kinds.count("retract") == 2
    assert validate_timeline(forced) == []


def test_config_validation():
    with pytest.raises(ScheduleError):
        SchedulerConfig(prep_duration_s=0.0)
    with pytest.raises(ScheduleError):
        SchedulerConfig(hold_threshold_s=0.5, prep_duration_s=0.3, retract_duration_s=0.5)


def test_validate_flags_overlapping_phases():
    phases = [
        GesturePhase("prep", 0.5, 1.0),
        GesturePhase("stroke", 0.9, 1.4, gesture=_ann(), features=neutral_features()),
    ]
    timeline = _timeline(right=phases)
    problems = validate_timeline(timeline)
    assert any("overlap" in p for p in problems)


def test_validate_flags_stroke_without_gesture():
    phases = [GesturePhase("prep", 0.5, 1.0), GesturePhase("stroke", 1.0, 1.4)]
    timeline = _timeline(right=phases)
    problems = validate_timeline(timeline)
    assert any("without a gesture" in p for p in problems)


def test_validate_flags_bad_transition():
    phases = [
        GesturePhase("prep", 0.5, 1.0),
        GesturePhase("stroke", 1.0, 1.4, gesture=_ann(), features=neutral_features()),
        GesturePhase("hold", 1.4, 2.0),
        GesturePhase("retract", 2.0, 2.5),
    ]
    timeline = _timeline(right=phases)
    assert any("hold may not be followed by retract" in p for p in problems_of(timeline))


def test_validate_ok_on_scheduled_fixture(protest_dialog, protest_track, catalog):
    dialog = align_strokes(protest_dialog, protest_track)
    for speaker in ("A", "B"):
        dialog = apply_personality(dialog, speaker, EXTRAVERT_ANCHOR, catalog)
    result = schedule(dialog)
    assert validate_timeline(result.a) == []
    assert validate_timeline(result.b) == []


def problems_of(timeline):
    return validate_timeline(timeline)


def _ann():
    return GestureAnnotation(1.0, "Cup", "RH", 0.4, word_index=0, features=neutral_features())


def _timeline(right=None, left=None):
    from gesturec.scheduler import ArmTrack

    return Timeline(
        speaker="A",
        tracks={
            "left": ArmTrack(arm="left", phases=list(left or [])),
            "right": ArmTrack(arm="right", phases=list(right or [])),
        },
        audio_duration=30.0,
        story_id="t",
        config_fingerprint="x",
    )


def test_hold_retract_dichotomy_generated():
    rng = random.Random(123)
    for _ in range(150):
        dialog = make_stroke_dialog(rng)
        timeline = schedule(dialog).a
        assert validate_timeline(timeline) == []
        for arm in ("left", "right"):
            check_dichotomy(timeline.tracks[arm].phases)


def check_dichotomy(phases, threshold=2.5):
    """Brute-force gap oracle: recompute stroke gaps and assert the bridge."""
    stroke_idx = [i for i, p in enumerate(phases) if p.kind == "stroke"]
    for a, b in zip(stroke_idx, stroke_idx[1:]):
        gap = phases[b].start - phases[a].end
        between = [p.kind for p in phases[a + 1:b]]
        if gap < threshold:
            assert between in (["hold", "prep"], ["prep"]), (gap, between)
        else:
            assert between == ["retract", "prep"], (gap, between)
