"""Central warehouse: review once, then match batches of papers to journals."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from pubsim.errors import MatchingError, SimulationError
from pubsim.matching import MatchingInstance, check_stability, solve_journal_optimal
from pubsim.model import (
    ALL_ACCEPTANCE_ID,
    Journal,
    Paper,
    Researcher,
    perceive_journal_qualities,
    update_journal_on_accept,
)
from pubsim.reviewing import PublicationProcess, ReviewRound
from pubsim.stochastics import RngHandle


@dataclass(slots=True)
class ReadyPaper:
    paper: Paper
    score: float
    prefs: list[int]
    intake_day: int

    @property
    def sort_key(self) -> tuple[float, int, int]:
        return (-self.score, self.intake_day, self.paper.id)


@dataclass(frozen=True)
class CapacityVector:
    per_journal: int
    all_acceptance: int
    n_journals: int

    def as_dict(self) -> dict[int, int]:
        caps = {j: self.per_journal for j in range(1, self.n_journals + 1)}
        caps[ALL_ACCEPTANCE_ID] = self.all_acceptance
        return caps

    @property
    def total(self) -> int:
        return self.per_journal * self.n_journals + self.all_acceptance


@dataclass
class AllocationRound:
    day: int
    n_papers: int
    capacities: CapacityVector


@dataclass
class WarehouseInventory:
    pending: dict[int, list[int]] = field(default_factory=dict)  # paper id -> captured prefs
    ready: list[ReadyPaper] = field(default_factory=list)
    history: list[AllocationRound] = field(default_factory=list)


def compute_capacities(n_papers: int, n_journals: int) -> CapacityVector:
    """Equal seats for every peer-reviewed journal, remainder to the all-acceptance venue."""
    if n_papers < n_journals + 1:
        raise ValueError(f"need at least {n_journals + 1} papers to allocate, got {n_papers}")
    per = n_papers // (n_journals + 1)
    return CapacityVector(per, n_papers - n_journals * per, n_journals)


def paper_preference_list(
    rng: RngHandle, journals: Sequence[Journal], sigma_journal: float = 0.05
) -> list[int]:
    """Rank peer-reviewed journals by freshly perceived quality; all-acceptance last."""
    peers = [j for j in journals if not j.is_all_acceptance]
    seen = perceive_journal_qualities(rng, np.array([j.quality for j in peers]), sigma_journal)
    ids = np.array([j.id for j in peers])
    order = np.lexsort((ids, -seen))
    return [int(i) for i in ids[order]] + [ALL_ACCEPTANCE_ID]


def warehouse_invitation_response(researcher: Researcher, capacity: int = 3) -> str:
    return "decline" if researcher.review_load >= capacity else "accept"


def build_allocation_instance(
    ready: Sequence[ReadyPaper], n_journals: int
) -> tuple[MatchingInstance, list[ReadyPaper], CapacityVector]:
    ranking = sorted(ready, key=lambda rp: rp.sort_key)
    shared = [rp.paper.id for rp in ranking]
    caps = compute_capacities(len(ranking), n_journals)
    instance = MatchingInstance(
        paper_prefs={rp.paper.id: rp.prefs for rp in ranking},
        journal_prefs={j: shared for j in range(n_journals + 1)},
        capacities=caps.as_dict(),
    )
    return instance, ranking, caps


class WarehouseProcess(PublicationProcess):
    name = "daa"

    def __init__(self, world, verify_stability: bool = False) -> None:
        super().__init__(world)
        self.sigma_journal = world.config.sigma_journal
        self.n_journals = world.config.n_journals
        self.inventory = WarehouseInventory()
        self.verify_stability = verify_stability

    def on_paper_written(self, researcher: Researcher, paper: Paper, day: int) -> None:
        paper.first_submission_day = day
        paper.attempts_used = 1
        self.submit_to_warehouse(paper, day)

    def submit_to_warehouse(self, paper: Paper, day: int) -> ReviewRound:
        prefs = paper_preference_list(self.world.streams["journal_perception"], self.world.journals, self.sigma_journal)
        self.inventory.pending[paper.id] = prefs
        return self.open_round(paper, None, day)

    def accepts_invitation(self, reviewer: Researcher, rnd: ReviewRound, day: int) -> bool:
        return warehouse_invitation_response(reviewer, self.capacity) == "accept"

    def on_round_complete(self, rnd: ReviewRound, day: int) -> None:
        paper = rnd.paper
        rnd.decision = "ready"
        paper.review_scores = list(rnd.scores)
        prefs = self.inventory.pending.pop(paper.id)
        self.inventory.ready.append(ReadyPaper(paper, rnd.mean_score, prefs, paper.first_submission_day))

    def end_of_day(self, day: int) -> None:
        if len(self.inventory.ready) >= self.n_journals + 1:
            self.run_allocation_round(day)

    def run_allocation_round(self, day: int) -> list[tuple[int, int]]:
        """Match every ready paper and publish all of them today.

        Returns ``(paper_id, journal_id)`` pairs in ranking order.
        """
        inv = self.inventory
        instance, ranking, caps = build_allocation_instance(inv.ready, self.n_journals)
        try:
            result = solve_journal_optimal(instance)
        except MatchingError as exc:
            raise SimulationError(f"allocation round on day {day} built a malformed instance: {exc}") from exc
        if len(result.assignment) != len(ranking):
            raise SimulationError(f"allocation round on day {day} left papers unassigned")
        if self.verify_stability and check_stability(instance, result):
            raise SimulationError(f"allocation round on day {day} produced an unstable matching")

        journals = self.world.journals
        before = {j.id: j.quality for j in journals}
        placed = []
        for rp in ranking:
            jid = result.assignment[rp.paper.id]
            self.publish(rp.paper, journals[jid], day, 1, before[jid])
            placed.append((rp.paper.id, jid))
        # qualities move only after the whole batch is placed
        for rp in ranking:
            update_journal_on_accept(journals[result.assignment[rp.paper.id]], rp.paper.quality)
        inv.ready = []
        inv.history.append(AllocationRound(day, len(ranking), caps))
        return placed
