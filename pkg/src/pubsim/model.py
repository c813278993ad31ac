"""Agents and the shared mechanics both publication processes build on."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pubsim.errors import DomainError
from pubsim.planner import crra_utility
from pubsim.stochastics import RngHandle, regularized_incomplete_beta, trunc_normal_draw

ALL_ACCEPTANCE_ID = 0
REVIEW_CAPACITY = 3
PRIOR_WEIGHT = 1000
TOLERANCE_FRACTION = 0.1


@dataclass(frozen=True)
class NoiseConfig:
    sigma_paper: float = 0.1
    sigma_review: float = 0.2
    sigma_journal: float = 0.05

    def __post_init__(self) -> None:
        for name in ("sigma_paper", "sigma_review", "sigma_journal"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")


@dataclass(slots=True)
class Researcher:
    id: int
    quality: float
    writing_days: int
    review_load: int = 0
    writing_started: int = 0
    tolerance_fraction: float = TOLERANCE_FRACTION

    @property
    def tolerance(self) -> float:
        return self.tolerance_fraction * self.quality

    def writing_progress(self, day: int) -> int:
        """Days spent on the current manuscript, counting ``day`` itself."""
        return day - self.writing_started + 1


@dataclass(slots=True)
class Paper:
    id: int
    author_id: int
    quality: float
    created_day: int
    first_submission_day: int | None = None
    attempts_used: int = 0
    journals_tried: set[int] = field(default_factory=set)
    invited: set[int] = field(default_factory=set)  # reviewers over the manuscript's lifetime
    review_scores: list[float] = field(default_factory=list)
    history: list = field(default_factory=list)
    published_journal: int | None = None
    published_day: int | None = None

    @property
    def is_published(self) -> bool:
        return self.published_journal is not None


@dataclass(slots=True)
class Journal:
    """A peer-reviewed journal, or the all-acceptance venue when ``id == 0``.

    Quality is the running mean of accepted paper qualities with the initial
    quality counted as ``prior_weight`` pseudo-papers.
    """

    id: int
    initial_quality: float
    accepted_count: int = 0
    accepted_quality_sum: float = 0.0
    quality: float = field(init=False)
    is_all_acceptance: bool = False
    prior_weight: int = PRIOR_WEIGHT
    tolerance_fraction: float = TOLERANCE_FRACTION

    def __post_init__(self) -> None:
        if self.is_all_acceptance:
            self.initial_quality = 0.0
        self.quality = self.initial_quality

    @property
    def tolerance(self) -> float:
        return self.tolerance_fraction * self.quality


def make_all_acceptance_journal() -> Journal:
    return Journal(ALL_ACCEPTANCE_ID, 0.0, is_all_acceptance=True)


def draw_paper_quality(rng: RngHandle, author_quality: float, sigma: float = 0.1) -> float:
    return trunc_normal_draw(rng, author_quality, sigma, 0.0, 1.0)


def perceive_journal_quality(
    rng: RngHandle, quality: float, is_all_acceptance: bool, sigma: float = 0.05
) -> float:
    if is_all_acceptance:
        return 0.0
    return trunc_normal_draw(rng, quality, sigma, 0.0, 1.0)


def perceive_journal_qualities(rng: RngHandle, qualities: np.ndarray, sigma: float = 0.05) -> np.ndarray:
    """Vectorized perception of several peer-reviewed journals at once."""
    return trunc_normal_draw(rng, np.asarray(qualities, dtype=float), sigma, 0.0, 1.0)


def acceptance_probability(paper_quality, journal_quality):
    """Believed probability that a paper is accepted by a journal.

    The researchers' belief puts the journal's bar on a Beta(1+q_P, 2-q_P) law;
    acceptance is the survival function at the (perceived) journal quality.
    Works elementwise on arrays; a journal quality of exactly 0 gives 1.
    """
    if np.ndim(paper_quality) == 0 and np.ndim(journal_quality) == 0:
        if journal_quality == 0.0:
            return 1.0
        return 1.0 - regularized_incomplete_beta(journal_quality, 1.0 + paper_quality, 2.0 - paper_quality)
    q_p = np.asarray(paper_quality, dtype=float)
    q_j = np.asarray(journal_quality, dtype=float)
    return 1.0 - regularized_incomplete_beta(q_j, 1.0 + q_p, 2.0 - q_p)


def update_journal_on_accept(journal: Journal, paper_quality: float) -> Journal:
    """Record an accepted paper; the all-acceptance venue keeps quality 0."""
    journal.accepted_count += 1
    journal.accepted_quality_sum += paper_quality
    if not journal.is_all_acceptance:
        w = journal.prior_weight
        journal.quality = (w * journal.initial_quality + journal.accepted_quality_sum) / (
            w + journal.accepted_count
        )
    return journal


def quality_fit(paper_quality: float, journal_quality: float) -> float:
    return 1.0 - abs(paper_quality - journal_quality)


def publication_utility(paper_quality: float, journal_quality: float, r: float) -> float:
    """Author's utility ``u(1/p)`` for a publication at a journal of true quality ``journal_quality``."""
    p = acceptance_probability(paper_quality, journal_quality)
    return crra_utility(1.0 / p, r)


def discounted_utility(utility: float, attempts: int, beta: float) -> float:
    if attempts < 1:
        raise DomainError(f"attempts must be at least 1, got {attempts}")
    return beta ** (attempts - 1) * utility
