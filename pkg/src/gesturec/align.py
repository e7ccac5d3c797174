"""Word timing tracks and the stroke-lead alignment rule.

A timing track is TSV text, one word per line::

    turn_index<TAB>word<TAB>onset_seconds

Onsets are non-decreasing across the track and strictly increasing within
a turn.  Alignment rewrites every stroke begin to sit a fixed lead (0.2s
by default) before its following word, the first word of the same turn
whose onset is strictly greater than the annotated time.  Times are kept
on the millisecond grid so the lead is exact, not float-approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .dsl import AnnotatedDialog, Turn
from .errors import (
    NoFollowingWordError,
    StrokeCollisionError,
    TimingError,
    TimingFormatError,
    TimingOrderError,
)

DEFAULT_LEAD_S = 0.2


@dataclass(frozen=True)
class TimedWord:
    turn_index: int
    word: str
    onset: float


@dataclass(frozen=True)
class WordTimingTrack:
    entries: tuple[TimedWord, ...]

    def turn_entries(self, turn_index: int) -> list[TimedWord]:
        return [e for e in self.entries if e.turn_index == turn_index]

    def turn_onsets(self, turn_index: int) -> list[float]:
        return [e.onset for e in self.entries if e.turn_index == turn_index]


def parse_word_timings(source: str) -> WordTimingTrack:
    entries: list[TimedWord] = []
    last_overall = float("-inf")
    last_in_turn: dict[int, float] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TimingFormatError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            turn_index = int(parts[0])
            onset = float(parts[2])
        except ValueError as exc:
            raise TimingFormatError(f"line {lineno}: {exc}") from None
        word = parts[1]
        if turn_index < 1 or not word:
            raise TimingFormatError(f"line {lineno}: bad turn index or empty word")
        if onset < last_overall:
            raise TimingOrderError(f"line {lineno}: onset {onset} decreases across the track")
        if turn_index in last_in_turn and onset <= last_in_turn[turn_index]:
            raise TimingOrderError(f"line {lineno}: onset {onset} not increasing within turn {turn_index}")
        last_overall = onset
        last_in_turn[turn_index] = onset
        entries.append(TimedWord(turn_index=turn_index, word=word, onset=onset))
    if not entries:
        raise TimingError("timing track has no entries")
    return WordTimingTrack(entries=tuple(entries))


def _ms(seconds: float) -> int:
    return round(seconds * 1000)


def align_strokes(
    dialog: AnnotatedDialog,
    track: WordTimingTrack,
    lead: float = DEFAULT_LEAD_S,
) -> AnnotatedDialog:
    """Rewrite stroke begins to (following-word onset - lead), clamped at 0.

    Raises :class:`NoFollowingWordError` when a turn has no timing entries
    or an annotation sits after its turn's last word, and
    :class:`StrokeCollisionError` when realignment breaks the
    strictly-increasing stroke order (two annotations sharing a following
    word collide).
    """
    lead_ms = _ms(lead)
    new_turns: list[Turn] = []
    for turn in dialog.turns:
        onsets = track.turn_onsets(turn.index)
        if not onsets:
            raise NoFollowingWordError(f"turn {turn.index}: no timing entries")
        new_annotations = []
        last_ms = None
        for ann in turn.annotations:
            following = next((o for o in onsets if o > ann.stroke_begin), None)
            if following is None:
                raise NoFollowingWordError(
                    f"turn {turn.index}: annotation at {ann.stroke_begin:.2f}s has no following word"
                )
            begin_ms = max(0, _ms(following) - lead_ms)
            if last_ms is not None and begin_ms <= last_ms:
                raise StrokeCollisionError(
                    f"turn {turn.index}: aligned strokes collide at {begin_ms / 1000:.3f}s"
                )
            last_ms = begin_ms
            new_annotations.append(replace(ann, stroke_begin=begin_ms / 1000))
        new_turns.append(replace(turn, annotations=new_annotations))
    return AnnotatedDialog(
        story_id=dialog.story_id, turns=new_turns, audio_duration=dialog.audio_duration
    )
