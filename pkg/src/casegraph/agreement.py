"""Fleiss' kappa and summaries of expert rubric scores."""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateExpectedAgreement, EmptyScores, InvalidMatrix, MissingRating, SchemaViolation

SCORE_LEVELS = (1, 2, 3, 4, 5)


class Dimension(str, Enum):
    COMPLETENESS = "completeness"
    CONSISTENCY = "consistency"
    SPECIFICITY = "specificity"
    PLAUSIBILITY_NODES = "plausibility_nodes"
    PLAUSIBILITY_EDGES = "plausibility_edges"
    UTILITY = "utility"


@dataclass(frozen=True)
class RatingMatrix:
    """``counts[i][j]``: raters who put subject ``i`` in category ``j``."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2:
            raise InvalidMatrix("rating matrix must be 2-dimensional")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(np.equal(np.mod(c, 1), 0)):
                raise InvalidMatrix("rating counts must be integers")
            c = c.astype(np.int64)
        n_subjects, n_categories = c.shape
        if n_subjects < 2 or n_categories < 2:
            raise InvalidMatrix("need at least 2 subjects and 2 categories")
        if (c < 0).any():
            raise InvalidMatrix("rating counts must be non-negative")
        sums = c.sum(axis=1)
        if len(set(sums.tolist())) != 1:
            raise InvalidMatrix("every subject needs the same number of ratings")
        if sums[0] < 2:
            raise InvalidMatrix("need at least 2 raters per subject")
        object.__setattr__(self, "counts", c)

    @property
    def raters(self) -> int:
        return int(self.counts[0].sum())


def fleiss_kappa(m: RatingMatrix | Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa ``(P_bar - P_e) / (1 - P_e)``.

    Raises:
        InvalidMatrix: shape or row-sum invariants are broken.
        DegenerateExpectedAgreement: all ratings fall in one category (``P_e = 1``).
    """
    if not isinstance(m, RatingMatrix):
        m = RatingMatrix(np.asarray(m))
    c = m.counts.astype(np.float64)
    n_subjects = c.shape[0]
    n = m.raters
    p_i = (np.sum(c * c, axis=1) - n) / (n * (n - 1))
    p_bar = float(np.mean(p_i))
    p_j = c.sum(axis=0) / (n_subjects * n)
    p_e = float(np.sum(p_j * p_j))
    if p_e >= 1.0:
        raise DegenerateExpectedAgreement("every rating is in one category; kappa is undefined")
    return (p_bar - p_e) / (1.0 - p_e)


@dataclass(frozen=True)
class Rating:
    rater: str
    session: str
    dimension: Dimension
    score: int


class RubricScores:
    """Scores keyed by (rater, session, dimension)."""

    def __init__(self, ratings: Iterable[Rating]):
        self.scores: dict[tuple[str, str, Dimension], int] = {}
        for r in ratings:
            if r.score not in SCORE_LEVELS:
                raise SchemaViolation(f"score {r.score} for {r.rater}/{r.session} outside 1..5")
            self.scores[(r.rater, r.session, Dimension(r.dimension))] = r.score

    @property
    def raters(self) -> list[str]:
        return sorted({k[0] for k in self.scores})

    @property
    def sessions(self) -> list[str]:
        return sorted({k[1] for k in self.scores})

    def __len__(self) -> int:
        return len(self.scores)

    @classmethod
    def from_csv(cls, path) -> "RubricScores":
        """Columns ``rater_id, session_id, dimension, score``."""
        ratings = []
        with Path(path).open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = {"rater_id", "session_id", "dimension", "score"} - set(reader.fieldnames or [])
            if missing:
                raise SchemaViolation(f"ratings table lacks columns {sorted(missing)}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    ratings.append(
                        Rating(row["rater_id"], row["session_id"], Dimension(row["dimension"].strip().lower()),
                               int(row["score"]))
                    )
                except ValueError as exc:
                    raise SchemaViolation(f"{path}:{lineno}: {exc}") from None
        return cls(ratings)


def scores_to_matrix(s: RubricScores, dimension: Dimension | str) -> RatingMatrix:
    """Sessions as subjects, the five score levels as categories."""
    dimension = Dimension(dimension)
    rows = []
    for session in s.sessions:
        row = [0] * len(SCORE_LEVELS)
        for rater in s.raters:
            score = s.scores.get((rater, session, dimension))
            if score is None:
                raise MissingRating(f"no {dimension.value} score from rater {rater!r} for session {session!r}")
            row[score - 1] += 1
        rows.append(row)
    return RatingMatrix(np.array(rows, dtype=np.int64))


def _sample_sd(values: Sequence[float]) -> float:
    return statistics.stdev(values) if len(values) > 1 else math.nan


def summarize_totals(totals: dict[str, float]) -> dict:
    values = list(totals.values())
    return {"rater_totals": totals, "mean": statistics.fmean(values), "sd": _sample_sd(values)}


def rating_summary(s: RubricScores) -> dict:
    """Per-dimension means and rater-total statistics.

    A rater's total is the sum over the six dimensions averaged over the
    sessions they scored. Spread is given twice, over rater totals and over
    individual (rater, session) totals, because the two are easily confused.
    """
    if not len(s):
        raise EmptyScores("no ratings")
    dims = {}
    for d in Dimension:
        vals = [v for (_, _, dd), v in s.scores.items() if dd is d]
        dims[d.value] = statistics.fmean(vals) if vals else math.nan
    session_totals: dict[tuple[str, str], int] = {}
    for (rater, session, _), v in s.scores.items():
        session_totals[(rater, session)] = session_totals.get((rater, session), 0) + v
    rater_totals = {
        r: statistics.fmean(t for (rr, _), t in session_totals.items() if rr == r) for r in s.raters
    }
    out = summarize_totals(rater_totals)
    all_session_totals = list(session_totals.values())
    return {
        "dimension_means": dims,
        "rater_totals": out["rater_totals"],
        "mean_total": out["mean"],
        "sd_rater_totals": out["sd"],
        "sd_session_totals": _sample_sd(all_session_totals),
        "metadata": {
            "sd_convention": "sample (n-1)",
            "sd_note": (
                "sd_rater_totals is the spread of per-rater mean totals; sd_session_totals is the "
                "spread of individual (rater, session) totals. They measure different things and "
                "are reported separately rather than reconciled."
            ),
            "total_range": [6, 30],
        },
    }


def kappa_by_dimension(s: RubricScores) -> dict[str, dict]:
    out = {}
    for d in Dimension:
        try:
            out[d.value] = {"kappa": fleiss_kappa(scores_to_matrix(s, d)), "error": None}
        except (DegenerateExpectedAgreement, InvalidMatrix, MissingRating) as exc:
            out[d.value] = {"kappa": None, "error": f"{type(exc).__name__}: {exc}"}
    return out
