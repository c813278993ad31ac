"""Sequential submission: one journal at a time, three reviews per attempt."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import numpy as np

from pubsim.model import (
    ALL_ACCEPTANCE_ID,
    Journal,
    Paper,
    Researcher,
    acceptance_probability,
    perceive_journal_qualities,
    perceive_journal_quality,
)
from pubsim.planner import SubmissionPlan
from pubsim.reviewing import RESUBMIT, PublicationProcess, ReviewRound
from pubsim.stochastics import RngHandle


def bracket_choice(journal_ids: Sequence[int], probs: Sequence[float], target: float) -> int:
    """Pick the journal whose believed acceptance chance brackets ``target`` from above.

    Among journals with probability at least ``target`` the least likely one
    wins. The all-acceptance venue (probability 1) is the implicit fallback, so
    it is chosen when no peer-reviewed journal reaches the target.
    """
    if target >= 1.0:
        return ALL_ACCEPTANCE_ID
    best_id = ALL_ACCEPTANCE_ID
    best_p = 1.0
    for jid, p in zip(journal_ids, probs):
        if jid == ALL_ACCEPTANCE_ID:
            continue
        if target <= p < best_p:
            best_id, best_p = jid, p
    return best_id


def choose_next_journal(
    paper: Paper,
    plan: SubmissionPlan,
    journals: Sequence[Journal],
    rng: RngHandle,
    current_day: int,
    *,
    n_att: int,
    wait_days: float,
    sigma_journal: float = 0.05,
) -> int:
    attempt = paper.attempts_used + 1
    if attempt >= n_att:
        return ALL_ACCEPTANCE_ID
    if paper.first_submission_day is not None and current_day - paper.first_submission_day > wait_days:
        return ALL_ACCEPTANCE_ID
    candidates = [j for j in journals if not j.is_all_acceptance and j.id not in paper.journals_tried]
    if not candidates:
        return ALL_ACCEPTANCE_ID
    perceived = perceive_journal_qualities(rng, np.array([j.quality for j in candidates]), sigma_journal)
    probs = acceptance_probability(paper.quality, perceived)
    return bracket_choice([j.id for j in candidates], probs.tolist(), plan.probs[attempt - 1])


def process_invitation_response(
    researcher: Researcher, journal_perceived_quality: float, capacity: int = 3
) -> Literal["accept", "decline"]:
    if researcher.review_load >= capacity:
        return "decline"
    if journal_perceived_quality >= researcher.quality - researcher.tolerance:
        return "accept"
    return "decline"


def decide_publication(scores: Sequence[float], journal: Journal) -> Literal["accept", "reject"]:
    """Accept iff the mean score clears the journal's quality minus its tolerance."""
    if len(scores) != 3:
        raise ValueError(f"a decision needs exactly 3 scores, got {len(scores)}")
    mean = sum(scores) / 3.0
    return "accept" if mean >= journal.quality - journal.tolerance else "reject"


class StatusQuoProcess(PublicationProcess):
    name = "status_quo"

    def __init__(self, world) -> None:
        super().__init__(world)
        cfg = world.config
        self.plan = world.plan
        self.n_att = cfg.n_att
        self.wait_days = cfg.wait_days
        self.sigma_journal = cfg.sigma_journal
        self._awaiting_decision: list[ReviewRound] = []

    def on_paper_written(self, researcher: Researcher, paper: Paper, day: int) -> None:
        paper.first_submission_day = day
        self.submit(paper, day)

    def on_resubmit(self, researcher: Researcher, paper: Paper, day: int) -> None:
        self.submit(paper, day)

    def submit(self, paper: Paper, day: int) -> None:
        world = self.world
        jid = choose_next_journal(
            paper,
            self.plan,
            world.journals,
            world.streams["journal_perception"],
            day,
            n_att=self.n_att,
            wait_days=self.wait_days,
            sigma_journal=self.sigma_journal,
        )
        paper.attempts_used += 1
        if jid == ALL_ACCEPTANCE_ID:
            self.accept_into(paper, world.journals[ALL_ACCEPTANCE_ID], day, paper.attempts_used)
            return
        paper.journals_tried.add(jid)
        self.open_round(paper, jid, day)

    def accepts_invitation(self, reviewer: Researcher, rnd: ReviewRound, day: int) -> bool:
        if reviewer.review_load >= self.capacity:
            return False
        journal = self.world.journals[rnd.journal_id]
        seen = perceive_journal_quality(
            self.world.streams["journal_perception"], journal.quality, journal.is_all_acceptance, self.sigma_journal
        )
        return process_invitation_response(reviewer, seen, self.capacity) == "accept"

    def on_round_complete(self, rnd: ReviewRound, day: int) -> None:
        self._awaiting_decision.append(rnd)

    def end_of_day(self, day: int) -> None:
        if not self._awaiting_decision:
            return
        due, self._awaiting_decision = self._awaiting_decision, []
        world = self.world
        for rnd in due:
            journal = world.journals[rnd.journal_id]
            paper = rnd.paper
            paper.review_scores = list(rnd.scores)
            if decide_publication(rnd.scores, journal) == "accept":
                rnd.decision = "accepted"
                self.accept_into(paper, journal, day, paper.attempts_used)
            else:
                rnd.decision = "rejected"
                world.schedule(day + 1, paper.author_id, (RESUBMIT, paper, None))
