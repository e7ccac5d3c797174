"""Survey scoring and experiment statistics.

Covers the judgment-data pipeline: TIPI personality scoring, per-version
preference counts, the one-sample t test against chance, between-subjects
factorial ANOVA, and the why-category percentages.

Judgment CSV format: ``subject_id,stimulus_id,kind,payload`` where payload
depends on ``kind``:

* ``tipi``: ten pipe-separated item scores, integers 1-7;
* ``preference``: ``A`` (adapted) or ``NA`` (non-adapted);
* ``why``: pipe-separated category labels, possibly empty.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, EmptyCellError, StatError
from .special import f_sf, student_t_two_tailed

TIPI_TRAITS = ("extraversion", "agreeableness", "conscientiousness", "emotional_stability", "openness")

# (direct item, reverse-scored item), 1-based positions in the instrument
_TIPI_KEY = {
    "extraversion": (1, 6),
    "agreeableness": (7, 2),
    "conscientiousness": (3, 8),
    "emotional_stability": (9, 4),
    "openness": (5, 10),
}

WHY_CATEGORIES = (
    "adapted_good_gestures",
    "nonadapted_good_gestures",
    "adapted_animated",
    "nonadapted_realistic",
    "other",
)

PREFERENCE_CHOICES = ("A", "NA")


@dataclass(frozen=True)
class JudgmentRecord:
    subject_id: str
    stimulus_id: str
    kind: str
    tipi_items: tuple[int, ...] | None = None
    choice: str | None = None
    why: frozenset[str] | None = None


@dataclass(frozen=True)
class StatResult:
    name: str
    value: float
    df: tuple[float, ...]
    p_value: float

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise StatError(f"p-value out of [0, 1]: {self.p_value}")


def read_judgments(source: str) -> list[JudgmentRecord]:
    records: list[JudgmentRecord] = []
    reader = csv.reader(io.StringIO(source))
    for row_number, row in enumerate(reader, start=1):
        if not row or row[0].startswith("#"):
            continue
        if row_number == 1 and [c.strip() for c in row[:3]] == ["subject_id", "stimulus_id", "kind"]:
            continue
        if len(row) != 4:
            raise DomainError(f"row {row_number}: expected 4 columns, got {len(row)}")
        subject_id, stimulus_id, kind, payload = (c.strip() for c in row)
        if kind == "tipi":
            try:
                items = tuple(int(p) for p in payload.split("|"))
            except ValueError:
                raise DomainError(f"row {row_number}: bad tipi payload {payload!r}") from None
            records.append(JudgmentRecord(subject_id, stimulus_id, kind, tipi_items=items))
        elif kind == "preference":
            if payload not in PREFERENCE_CHOICES:
                raise DomainError(f"row {row_number}: preference must be A or NA, got {payload!r}")
            records.append(JudgmentRecord(subject_id, stimulus_id, kind, choice=payload))
        elif kind == "why":
            labels = frozenset(p for p in payload.split("|") if p)
            unknown = labels - set(WHY_CATEGORIES)
            if unknown:
                raise DomainError(f"row {row_number}: unknown why categories {sorted(unknown)}")
            records.append(JudgmentRecord(subject_id, stimulus_id, kind, why=labels))
        else:
            raise DomainError(f"row {row_number}: unknown record kind {kind!r}")
    return records


def tipi_score(items: Sequence[int]) -> dict[str, float]:
    """Five trait scores from the ten 7-point items.

    Each trait is the mean of its direct item and its reverse-scored
    partner (reverse: 8 - score).
    """
    if len(items) != 10:
        raise DomainError(f"expected 10 items, got {len(items)}")
    for item in items:
        if not 1 <= item <= 7:
            raise DomainError(f"item scores must be in [1, 7], got {item}")
    return {
        trait: (items[direct - 1] + (8 - items[reverse - 1])) / 2.0
        for trait, (direct, reverse) in _TIPI_KEY.items()
    }


@dataclass(frozen=True)
class PreferenceRow:
    version: str
    count_a: int
    count_na: int

    @property
    def total(self) -> int:
        return self.count_a + self.count_na

    @property
    def pct_a(self) -> float:
        return 100.0 * self.count_a / self.total if self.total else 0.0

    @property
    def pct_na(self) -> float:
        return 100.0 * self.count_na / self.total if self.total else 0.0


@dataclass(frozen=True)
class PreferenceTable:
    rows: tuple[PreferenceRow, ...]
    totals: PreferenceRow | None


def preference_table(records: Iterable[JudgmentRecord]) -> PreferenceTable:
    """Per-version adapted / non-adapted counts and percentages."""
    counts: dict[str, list[int]] = {}
    for record in records:
        if record.kind != "preference":
            raise DomainError(f"expected preference records, got {record.kind!r}")
        row = counts.setdefault(record.stimulus_id, [0, 0])
        row[0 if record.choice == "A" else 1] += 1
    if not counts:
        return PreferenceTable(rows=(), totals=None)
    rows = tuple(
        PreferenceRow(version, a, na) for version, (a, na) in sorted(counts.items())
    )
    totals = PreferenceRow("total", sum(r.count_a for r in rows), sum(r.count_na for r in rows))
    return PreferenceTable(rows=rows, totals=totals)


def one_sample_ttest(values: Sequence[float], mu: float) -> StatResult:
    """Two-tailed one-sample t test of the mean against ``mu``."""
    n = len(values)
    if n < 2:
        raise StatError(f"need at least 2 values, got {n}")
    mean = sum(values) / n
    ss = sum((v - mean) ** 2 for v in values)
    if ss == 0.0:
        raise StatError("zero sample variance")
    sd = math.sqrt(ss / (n - 1))
    t = (mean - mu) / (sd / math.sqrt(n))
    return StatResult(name="one-sample t", value=t, df=(n - 1,), p_value=student_t_two_tailed(t, n - 1))


def _dummy_columns(levels: Sequence[str], value: str) -> list[float]:
    # treatment coding, first level as reference
    return [1.0 if value == level else 0.0 for level in levels[1:]]


def _term_columns(term: tuple[str, ...], levels: Mapping[str, list[str]], obs: Mapping[str, str]) -> list[float]:
    cols = [1.0]
    for factor in term:
        base = _dummy_columns(levels[factor], obs[factor])
        cols = [c * b for c in cols for b in base]
    return cols


def anova(
    observations: Sequence[tuple[Mapping[str, str], float]],
    factors: Sequence[str],
    interactions: Sequence[tuple[str, ...]] = (),
) -> list[StatResult]:
    """Between-subjects factorial ANOVA via sequential (Type I) sums of
    squares, computed as residual-sum reductions of nested least-squares
    fits.  On balanced data the decomposition is order-independent; for
    unbalanced data the terms are attributed in the listed order.
    """
    if not observations:
        raise StatError("no observations")
    terms: list[tuple[str, ...]] = [(f,) for f in factors] + [tuple(i) for i in interactions]
    levels: dict[str, list[str]] = {}
    for factor in factors:
        values = sorted({str(obs[factor]) for obs, _ in observations})
        if len(values) < 2:
            raise StatError(f"factor {factor!r} needs at least 2 levels")
        levels[factor] = values
    seen_cells = {tuple(str(obs[f]) for f in factors) for obs, _ in observations}
    for cell in itertools.product(*(levels[f] for f in factors)):
        if cell not in seen_cells:
            raise EmptyCellError(f"empty cell {dict(zip(factors, cell))}")

    y = np.array([response for _, response in observations], dtype=float)
    n = len(y)
    blocks = [np.ones((n, 1))]
    for term in terms:
        blocks.append(
            np.array([_term_columns(term, levels, obs) for obs, _ in observations], dtype=float)
        )

    rss: list[float] = []
    ranks: list[int] = []
    for k in range(1, len(blocks) + 1):
        design = np.hstack(blocks[:k])
        _, residual, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if residual.size:
            rss_k = float(residual[0])
        else:
            fitted = design @ np.linalg.lstsq(design, y, rcond=None)[0]
            rss_k = float(np.sum((y - fitted) ** 2))
        rss.append(rss_k)
        ranks.append(int(rank))

    ss_total = float(np.sum((y - y.mean()) ** 2))
    rss_full = rss[-1]
    df_resid = n - ranks[-1]
    if df_resid <= 0:
        raise StatError("no residual degrees of freedom (need replication within cells)")
    ms_resid = rss_full / df_resid

    tiny = 1e-12 * max(ss_total, 1.0)
    results = []
    for i, term in enumerate(terms):
        ss_term = max(rss[i] - rss[i + 1], 0.0)
        df_term = ranks[i + 1] - ranks[i]
        if df_term <= 0:
            raise StatError(f"term {term} adds no estimable contrasts")
        name = ":".join(term)
        if ss_term <= tiny:
            f_value, p = 0.0, 1.0
        elif ms_resid <= tiny:
            f_value, p = math.inf, 0.0
        else:
            f_value = (ss_term / df_term) / ms_resid
            p = f_sf(f_value, df_term, df_resid)
        results.append(StatResult(name=name, value=f_value, df=(df_term, df_resid), p_value=p))
    return results


@dataclass(frozen=True)
class WhyRow:
    version: str
    n_subjects: int
    percentages: dict[str, float]  # category -> percent of subjects


@dataclass(frozen=True)
class WhyTable:
    rows: tuple[WhyRow, ...]
    totals: WhyRow | None


def why_category_table(records: Iterable[JudgmentRecord]) -> WhyTable:
    """Percent of subjects per version whose category set contains each
    label.  Rows need not sum to 100: a subject may land in none or in
    several categories.
    """
    by_version: dict[str, list[frozenset[str]]] = {}
    for record in records:
        if record.kind != "why":
            raise DomainError(f"expected why records, got {record.kind!r}")
        unknown = (record.why or frozenset()) - set(WHY_CATEGORIES)
        if unknown:
            raise DomainError(f"unknown why categories {sorted(unknown)}")
        by_version.setdefault(record.stimulus_id, []).append(record.why or frozenset())
    if not by_version:
        return WhyTable(rows=(), totals=None)

    def row_for(version: str, sets: list[frozenset[str]]) -> WhyRow:
        n = len(sets)
        return WhyRow(
            version=version,
            n_subjects=n,
            percentages={
                cat: 100.0 * sum(1 for s in sets if cat in s) / n for cat in WHY_CATEGORIES
            },
        )

    rows = tuple(row_for(v, sets) for v, sets in sorted(by_version.items()))
    all_sets = [s for sets in by_version.values() for s in sets]
    return WhyTable(rows=rows, totals=row_for("total", all_sets))


def format_preference_table(table: PreferenceTable) -> str:
    lines = [f"{'version':<18}{'#A':>5}{'#NA':>5}{'%A':>8}{'%NA':>8}"]
    for row in table.rows + ((table.totals,) if table.totals else ()):
        lines.append(
            f"{row.version:<18}{row.count_a:>5}{row.count_na:>5}{row.pct_a:>8.1f}{row.pct_na:>8.1f}"
        )
    return "\n".join(lines)


def format_why_table(table: WhyTable) -> str:
    header = f"{'version':<18}{'n':>4}" + "".join(f"{cat:>26}" for cat in WHY_CATEGORIES)
    lines = [header]
    for row in table.rows + ((table.totals,) if table.totals else ()):
        cells = "".join(f"{row.percentages[cat]:>25.1f}%" for cat in WHY_CATEGORIES)
        lines.append(f"{row.version:<18}{row.n_subjects:>4}" + cells)
    return "\n".join(lines)
