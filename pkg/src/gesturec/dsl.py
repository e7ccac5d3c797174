"""Gesture-annotated dialog format: parsing, canonical serialization, sentence segmentation.

A dialog document is UTF-8 text with optional header lines followed by one
turn per line::

    story: protest
    audio: 54.00s

    A1: [1.90s](Cup, RH 0.46s) Hey, do you remember [3.17s](PointingAbstract, RH 0.37s) that day?
    B1: Yeah, ...

Turn labels are a speaker letter (A or B) plus that speaker's 1-based turn
count.  An annotation sits immediately before its following word::

    [stroke_begin s] *? ( !? name, hand duration s  [/ name, hand duration s] )

``*`` after the time bracket marks a rate-added gesture (present only when
the performance is adapted), ``!`` before the name marks a copied gesture
form, and the variant after ``/`` is the non-adapted alternative.  Seconds
are printed with exactly two decimals in canonical form, so all dialog
times live on the centisecond grid.  Square brackets are reserved for
annotations and may not appear in turn text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import AnnotationOrderError, DialogParseError

SPEAKERS = ("A", "B")
HANDS = ("LH", "RH", "2H")

_TURN_RE = re.compile(r"^([A-Za-z]+)(\d+):\s*(.*)$")
_ANNOT_RE = re.compile(r"\[(\d+(?:\.\d+)?)s\](\*)?\(([^()]*)\)")
_VARIANT_RE = re.compile(r"^(!)?([A-Za-z_][A-Za-z0-9_]*)\s*,\s*(LH|RH|2H)\s+(\d+(?:\.\d+)?)s$")

# A token ends a sentence when it closes with terminal punctuation,
# optionally followed by closing quotes.  Mid-token punctuation ("old...a")
# does not split.
_SENTENCE_END_RE = re.compile(r"[.!?…]+[\"'”’]*$")


@dataclass(frozen=True)
class Features:
    """Effective per-gesture performance features, filled by the personality
    and adaptation stages and consumed by the scheduler.

    Geometry in centimeters; ``speed`` divides the annotated stroke
    duration; ``scale`` is the overall size multiplier.
    """

    expanse_cm: float
    height_cm: float
    outwardness_cm: float
    speed: float
    scale: float


@dataclass(frozen=True)
class Alternative:
    gesture_name: str
    hand: str
    stroke_duration: float


@dataclass
class GestureAnnotation:
    stroke_begin: float
    gesture_name: str
    hand: str
    stroke_duration: float
    rate_added: bool = False
    form_copied: bool = False
    alternative: Alternative | None = None
    # Position of the following word within the turn text (count of words
    # before the annotation).  Anchors serialization and sentence assignment.
    word_index: int = 0
    # Derived state, not part of the annotation's identity.
    features: Features | None = field(default=None, compare=False)
    alt_features: Features | None = field(default=None, compare=False)

    @property
    def stroke_end(self) -> float:
        return self.stroke_begin + self.stroke_duration


@dataclass
class Turn:
    speaker: str
    index: int  # global 1-based position in the dialog
    text: str
    annotations: list[GestureAnnotation]


@dataclass
class AnnotatedDialog:
    story_id: str
    turns: list[Turn]
    audio_duration: float

    def speaker_turns(self, speaker: str) -> list[Turn]:
        return [t for t in self.turns if t.speaker == speaker]


def _parse_variant(text: str, lineno: int, col: int, allow_copy: bool) -> tuple[bool, str, str, float]:
    m = _VARIANT_RE.match(text.strip())
    if not m:
        raise DialogParseError(f"malformed gesture variant {text.strip()!r}", lineno, col)
    copied, name, hand, dur = bool(m.group(1)), m.group(2), m.group(3), float(m.group(4))
    if copied and not allow_copy:
        raise DialogParseError("copy marker not allowed on the alternative variant", lineno, col)
    if dur <= 0:
        raise DialogParseError(f"stroke duration must be > 0, got {dur}", lineno, col)
    return copied, name, hand, dur


def _parse_annotation(m: re.Match, lineno: int, word_index: int) -> GestureAnnotation:
    col = m.start() + 1
    begin = float(m.group(1))
    inner = m.group(3)
    pieces = inner.split("/")
    if len(pieces) > 2:
        raise DialogParseError("at most one alternative per annotation", lineno, col)
    copied, name, hand, dur = _parse_variant(pieces[0], lineno, col, allow_copy=True)
    alternative = None
    if len(pieces) == 2:
        _, alt_name, alt_hand, alt_dur = _parse_variant(pieces[1], lineno, col, allow_copy=False)
        alternative = Alternative(alt_name, alt_hand, alt_dur)
    return GestureAnnotation(
        stroke_begin=begin,
        gesture_name=name,
        hand=hand,
        stroke_duration=dur,
        rate_added=m.group(2) is not None,
        form_copied=copied,
        alternative=alternative,
        word_index=word_index,
    )


def _parse_turn_body(body: str, lineno: int) -> tuple[str, list[GestureAnnotation]]:
    words: list[str] = []
    annotations: list[GestureAnnotation] = []
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        if body[pos] == "[":
            m = _ANNOT_RE.match(body, pos)
            if not m:
                raise DialogParseError("malformed annotation", lineno, pos + 1)
            annotations.append(_parse_annotation(m, lineno, len(words)))
            pos = m.end()
            continue
        end = pos
        while end < len(body) and not body[end].isspace():
            if body[end] in "[]":
                raise DialogParseError("square brackets are reserved for annotations", lineno, end + 1)
            end += 1
        words.append(body[pos:end])
        pos = end
    return " ".join(words), annotations


def parse_dialog(source: str, story_id: str = "") -> AnnotatedDialog:
    """Parse a dialog document, validating all structural invariants.

    Raises :class:`DialogParseError` (with line and column) on malformed
    annotations, unknown speaker labels, label numbering gaps, and
    :class:`AnnotationOrderError` when stroke times fail to strictly
    increase within a turn.
    """
    turns: list[Turn] = []
    audio_duration: float | None = None
    speaker_counts = {"A": 0, "B": 0}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("story:"):
            story_id = line[len("story:"):].strip()
            continue
        if line.startswith("audio:"):
            spec = line[len("audio:"):].strip()
            if not spec.endswith("s"):
                raise DialogParseError("audio duration must end with 's'", lineno, 1)
            try:
                audio_duration = float(spec[:-1])
            except ValueError:
                raise DialogParseError(f"bad audio duration {spec!r}", lineno, 1) from None
            continue
        m = _TURN_RE.match(line)
        if not m:
            raise DialogParseError("expected a turn line like 'A1: ...'", lineno, 1)
        speaker, suffix = m.group(1), int(m.group(2))
        if speaker not in SPEAKERS:
            raise DialogParseError(f"unknown speaker label {speaker!r}", lineno, 1)
        if turns and turns[-1].speaker == speaker:
            raise DialogParseError(f"speakers must alternate, got {speaker} twice", lineno, 1)
        speaker_counts[speaker] += 1
        if suffix != speaker_counts[speaker]:
            raise DialogParseError(
                f"expected turn label {speaker}{speaker_counts[speaker]}, got {speaker}{suffix}",
                lineno, 1,
            )
        text, annotations = _parse_turn_body(m.group(3), lineno)
        last = -1.0
        for ann in annotations:
            if ann.stroke_begin <= last:
                raise AnnotationOrderError(
                    f"stroke times must strictly increase within a turn "
                    f"({ann.stroke_begin:.2f}s after {last:.2f}s)",
                    lineno, 1,
                )
            last = ann.stroke_begin
        turns.append(Turn(speaker=speaker, index=len(turns) + 1, text=text, annotations=annotations))

    ends = [a.stroke_end for t in turns for a in t.annotations]
    if audio_duration is None:
        audio_duration = round(max(ends), 2) if ends else 0.0
    elif ends and max(ends) > audio_duration + 1e-9:
        raise DialogParseError(
            f"annotation ends at {max(ends):.2f}s, past audio duration {audio_duration:.2f}s"
        )
    return AnnotatedDialog(story_id=story_id, turns=turns, audio_duration=audio_duration)


def _format_variant(copied: bool, name: str, hand: str, duration: float) -> str:
    return f"{'!' if copied else ''}{name}, {hand} {duration:.2f}s"


def _format_annotation(ann: GestureAnnotation) -> str:
    star = "*" if ann.rate_added else ""
    body = _format_variant(ann.form_copied, ann.gesture_name, ann.hand, ann.stroke_duration)
    if ann.alternative is not None:
        alt = ann.alternative
        body += " / " + _format_variant(False, alt.gesture_name, alt.hand, alt.stroke_duration)
    return f"[{ann.stroke_begin:.2f}s]{star}({body})"


def format_dialog(dialog: AnnotatedDialog) -> str:
    """Canonical serialization; parse_dialog(format_dialog(d)) == d."""
    lines: list[str] = []
    if dialog.story_id:
        lines.append(f"story: {dialog.story_id}")
    lines.append(f"audio: {dialog.audio_duration:.2f}s")
    lines.append("")
    speaker_counts = {"A": 0, "B": 0}
    for turn in dialog.turns:
        speaker_counts[turn.speaker] += 1
        words = turn.text.split()
        pieces: list[str] = []
        for i, word in enumerate(words):
            pieces.extend(_format_annotation(a) for a in turn.annotations if a.word_index == i)
            pieces.append(word)
        pieces.extend(_format_annotation(a) for a in turn.annotations if a.word_index >= len(words))
        lines.append(f"{turn.speaker}{speaker_counts[turn.speaker]}: " + " ".join(pieces))
    return "\n".join(lines) + "\n"


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Word-index ranges [start, end) of the sentences in ``text``."""
    words = text.split()
    spans: list[tuple[int, int]] = []
    start = 0
    for i, word in enumerate(words):
        if _SENTENCE_END_RE.search(word):
            spans.append((start, i + 1))
            start = i + 1
    if start < len(words):
        spans.append((start, len(words)))
    return spans


def segment_sentences(
    turn: Turn,
    word_onsets: list[float] | None = None,
) -> list[tuple[str, list[GestureAnnotation]]]:
    """Split a turn into sentences and assign each annotation to one.

    An annotation belongs to the sentence containing its following word.
    With ``word_onsets`` (one onset per word of the turn, from the timing
    track) the following word is the first with onset greater than the
    stroke begin.  Otherwise the annotation's position in the source text
    decides.  Trailing annotations fall into the last sentence.
    """
    words = turn.text.split()
    spans = sentence_spans(turn.text)
    if not spans:
        return []
    buckets: list[list[GestureAnnotation]] = [[] for _ in spans]
    use_onsets = word_onsets is not None and len(word_onsets) == len(words)
    for ann in turn.annotations:
        if use_onsets:
            pos = next(
                (i for i, onset in enumerate(word_onsets) if onset > ann.stroke_begin),
                len(words),
            )
        else:
            pos = ann.word_index
        pos = min(pos, len(words) - 1)
        for k, (start, end) in enumerate(spans):
            if start <= pos < end:
                buckets[k].append(ann)
                break
    return [(" ".join(words[s:e]), bucket) for (s, e), bucket in zip(spans, buckets)]


def truncate_dialog(dialog: AnnotatedDialog, n_turns: int) -> AnnotatedDialog:
    """First ``n_turns`` turns with the original audio reference."""
    turns = [replace(t, annotations=list(t.annotations)) for t in dialog.turns[:n_turns]]
    return AnnotatedDialog(story_id=dialog.story_id, turns=turns, audio_duration=dialog.audio_duration)
