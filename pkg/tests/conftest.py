from __future__ import annotations

import random
from pathlib import Path

import pytest

from gesturec.align import WordTimingTrack, parse_word_timings
from gesturec.catalog import load_catalog
from gesturec.dsl import (
    Alternative,
    AnnotatedDialog,
    Features,
    GestureAnnotation,
    Turn,
    parse_dialog,
)

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "gesturec" / "data"

WORDS = (
    "the a storm garden cat we saw big wind rain dog fence they ran home "
    "yeah right so then it was really over there here came went still"
).split()

GESTURES = (
    ("Cup", "RH", 0.46),
    ("PointingAbstract", "RH", 0.37),
    ("Cup_Horizontal", "2H", 0.57),
    ("SweepSide1", "RH", 0.35),
    ("Cup_Up", "2H", 0.34),
    ("Eruptive", "LH", 0.76),
    ("WeighOptions", "2H", 0.6),
    ("ShortProgressive", "RH", 0.38),
    ("Dismiss", "2H", 0.47),
    ("Reject", "RH", 0.44),
)


@pytest.fixture(scope="session")
def catalog():
    return load_catalog((DATA_DIR / "catalog.txt").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def protest_text():
    return (DATA_DIR / "stories" / "protest.dialog").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def protest_dialog(protest_text):
    return parse_dialog(protest_text)


@pytest.fixture(scope="session")
def protest_track():
    return parse_word_timings((DATA_DIR / "timings" / "protest.tsv").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def stories(catalog):
    loaded = {}
    for path in sorted((DATA_DIR / "stories").glob("*.dialog")):
        dialog = parse_dialog(path.read_text(encoding="utf-8"))
        track = parse_word_timings(
            (DATA_DIR / "timings" / f"{path.stem}.tsv").read_text(encoding="utf-8")
        )
        loaded[dialog.story_id] = (dialog, track)
    return loaded


def neutral_features() -> Features:
    return Features(expanse_cm=25.0, height_cm=0.0, outwardness_cm=20.0, speed=1.0, scale=1.0)


def random_features(rng: random.Random) -> Features:
    return Features(
        expanse_cm=round(rng.uniform(10, 45), 2),
        height_cm=round(rng.uniform(-10, 30), 2),
        outwardness_cm=round(rng.uniform(5, 35), 2),
        speed=round(rng.uniform(0.8, 1.5), 2),
        scale=round(rng.uniform(0.8, 1.6), 2),
    )


def random_sentence(rng: random.Random) -> list[str]:
    words = [rng.choice(WORDS) for _ in range(rng.randint(3, 8))]
    words[-1] += rng.choice(".!?")
    return words


def make_random_dialog(rng: random.Random, max_turns: int = 4, with_markers: bool = True) -> AnnotatedDialog:
    """A structurally valid dialog on the centisecond grid."""
    turns = []
    time = round(rng.uniform(0.5, 2.0), 2)
    for index in range(1, rng.randint(1, max_turns) + 1):
        words: list[str] = []
        annotations: list[GestureAnnotation] = []
        for _ in range(rng.randint(1, 3)):
            sentence_start = len(words)
            sentence = random_sentence(rng)
            words.extend(sentence)
            count = min(rng.randint(0, 2), len(sentence))
            # text order must follow stroke-time order
            positions = sorted(rng.sample(range(sentence_start, len(words)), count))
            for wi in positions:
                name, hand, duration = rng.choice(GESTURES)
                time = round(time + rng.uniform(0.4, 2.5), 2)
                alternative = None
                if with_markers and rng.random() < 0.3:
                    alt_name, alt_hand, alt_duration = rng.choice(GESTURES)
                    alternative = Alternative(alt_name, alt_hand, alt_duration)
                annotations.append(
                    GestureAnnotation(
                        stroke_begin=time,
                        gesture_name=name,
                        hand=hand,
                        stroke_duration=duration,
                        rate_added=with_markers and rng.random() < 0.2,
                        form_copied=with_markers and rng.random() < 0.3,
                        alternative=alternative,
                        word_index=wi,
                    )
                )
        turns.append(Turn(speaker="AB"[(index - 1) % 2], index=index, text=" ".join(words), annotations=annotations))
        time = round(time + rng.uniform(0.5, 1.5), 2)
    ends = [a.stroke_end for t in turns for a in t.annotations]
    audio = round((max(ends) if ends else time) + rng.uniform(1.0, 3.0), 2)
    return AnnotatedDialog(story_id=f"story{rng.randint(0, 999)}", turns=turns, audio_duration=audio)


def make_aligned_pair(rng: random.Random) -> tuple[AnnotatedDialog, WordTimingTrack]:
    """Dialog plus a complete timing track.

    Word onsets keep gaps above the alignment lead so that realignment
    targets the same following words.
    """
    turns = []
    tsv_lines: list[str] = []
    onset = round(rng.uniform(0.05, 1.0), 2)
    for index in range(1, rng.randint(1, 4) + 1):
        words = []
        for _ in range(rng.randint(1, 2)):
            words.extend(random_sentence(rng))
        onsets = []
        for word in words:
            onsets.append(onset)
            tsv_lines.append(f"{index}\t{word}\t{onset:.2f}")
            onset = round(onset + rng.uniform(0.25, 0.6), 2)
        annotations = []
        positions = sorted(rng.sample(range(len(words)), k=min(len(words), rng.randint(0, 3))))
        last_begin = -1.0
        for wi in positions:
            name, hand, duration = rng.choice(GESTURES)
            offset = round(rng.uniform(0.01, 0.2), 2)
            begin = max(0.0, round(onsets[wi] - offset, 2))
            if begin <= last_begin:  # keep the pre-alignment order invariant
                continue
            last_begin = begin
            annotations.append(
                GestureAnnotation(
                    stroke_begin=begin,
                    gesture_name=name,
                    hand=hand,
                    stroke_duration=duration,
                    word_index=wi,
                )
            )
        turns.append(Turn(speaker="AB"[(index - 1) % 2], index=index, text=" ".join(words), annotations=annotations))
        onset = round(onset + rng.uniform(0.5, 1.5), 2)
    audio = round(onset + 3.0, 2)
    dialog = AnnotatedDialog(story_id="aligned", turns=turns, audio_duration=audio)
    return dialog, parse_word_timings("\n".join(tsv_lines) + "\n")


def make_stroke_dialog(rng: random.Random, n_strokes: int | None = None,
                       gap_range: tuple[float, float] = (0.35, 6.0)) -> AnnotatedDialog:
    """Two-turn dialog with feature-stamped annotations at controlled gaps,
    ready for the scheduler."""
    n = n_strokes if n_strokes is not None else rng.randint(1, 8)
    annotations = []
    time = round(rng.uniform(0.5, 2.0), 2)
    for _ in range(n):
        name, hand, duration = rng.choice(GESTURES)
        features = random_features(rng)
        annotations.append(
            GestureAnnotation(
                stroke_begin=time,
                gesture_name=name,
                hand=hand,
                stroke_duration=duration,
                word_index=0,
                features=features,
            )
        )
        time = round(time + duration / features.speed + rng.uniform(*gap_range), 2)
    turn_a = Turn(speaker="A", index=1, text="so it went.", annotations=annotations)
    turn_b = Turn(speaker="B", index=2, text="yeah.", annotations=[])
    return AnnotatedDialog(story_id="strokes", turns=[turn_a, turn_b], audio_duration=round(time + 2.0, 2))
