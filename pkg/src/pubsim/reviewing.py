"""Review rounds, invitations, and the behaviour both processes share.

A review round pursues three score slots. Each slot is filled by an accepted
invitation's eventual review, or by a default score of 0 when no uninvited
researcher is left for the manuscript.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from pubsim.model import (
    ALL_ACCEPTANCE_ID,
    Journal,
    Paper,
    Researcher,
    discounted_utility,
    publication_utility,
    quality_fit,
    update_journal_on_accept,
)
from pubsim.stochastics import trunc_normal_draw

if TYPE_CHECKING:
    from pubsim.world import World

SLOTS = 3

# task kinds, in the order a researcher handles them within one activation
WRITE, RESUBMIT, RESPOND, REVIEW = 0, 1, 2, 3


@dataclass(slots=True)
class Invitation:
    reviewer_id: int
    sent_day: int
    response_due_day: int
    status: str = "pending"  # pending | accepted | declined
    review_due_day: int | None = None


@dataclass(slots=True)
class ReviewRound:
    """One manuscript under review, at a journal or (``journal_id=None``) the warehouse."""

    paper: Paper
    journal_id: int | None
    submission_day: int
    invitations: list[Invitation] = field(default_factory=list)
    scores: list[float] = field(default_factory=list)
    defaulted: int = 0
    decision: str = "pending"  # pending | accepted | rejected | ready

    @property
    def complete(self) -> bool:
        return len(self.scores) >= SLOTS

    @property
    def mean_score(self) -> float:
        return sum(self.scores) / len(self.scores)


class PublicationProcess:
    """Base class wiring reviewer recruitment and review delivery into a world.

    Subclasses decide what happens when a paper is finished, how a reviewer
    answers an invitation, and what a completed round leads to.
    """

    name = "base"

    def __init__(self, world: World) -> None:
        self.world = world
        cfg = world.config
        self.eta_resp = cfg.eta_resp
        self.eta_rev = cfg.eta_rev
        self.capacity = cfg.review_capacity
        self.sigma_review = cfg.sigma_review

    # --- hooks ---------------------------------------------------------------

    def on_paper_written(self, researcher: Researcher, paper: Paper, day: int) -> None:
        raise NotImplementedError

    def on_resubmit(self, researcher: Researcher, paper: Paper, day: int) -> None:
        raise NotImplementedError

    def accepts_invitation(self, reviewer: Researcher, rnd: ReviewRound, day: int) -> bool:
        raise NotImplementedError

    def on_round_complete(self, rnd: ReviewRound, day: int) -> None:
        raise NotImplementedError

    def end_of_day(self, day: int) -> None:
        pass

    # --- shared machinery ----------------------------------------------------

    def open_round(self, paper: Paper, journal_id: int | None, day: int) -> ReviewRound:
        rnd = ReviewRound(paper, journal_id, day)
        paper.history.append(rnd)
        for _ in range(SLOTS):
            self.invite(rnd, day)
        return rnd

    def invite(self, rnd: ReviewRound, day: int) -> None:
        """Send one invitation, or default the slot to 0 if the pool is exhausted."""
        world = self.world
        rid = world.pick_reviewer(rnd.paper)
        if rid is None:
            rnd.scores.append(0.0)
            rnd.defaulted += 1
            if rnd.complete:
                self.on_round_complete(rnd, day)
            return
        rnd.paper.invited.add(rid)
        inv = Invitation(rid, day, day + self.eta_resp)
        rnd.invitations.append(inv)
        if world.is_measured(rnd.paper):
            world.ledger.invitations_sent += 1
        world.schedule(inv.response_due_day, rid, (RESPOND, rnd, inv))

    def handle_response(self, reviewer: Researcher, rnd: ReviewRound, inv: Invitation, day: int) -> None:
        if self.accepts_invitation(reviewer, rnd, day):
            inv.status = "accepted"
            reviewer.review_load += 1
            # reviewing starts on the acceptance day, which counts as day one
            inv.review_due_day = day + self.eta_rev - 1
            if inv.review_due_day <= day:
                self.handle_review(reviewer, rnd, inv, day)
            else:
                self.world.schedule(inv.review_due_day, reviewer.id, (REVIEW, rnd, inv))
        else:
            inv.status = "declined"
            self.invite(rnd, day)

    def handle_review(self, reviewer: Researcher, rnd: ReviewRound, inv: Invitation, day: int) -> None:
        world = self.world
        score = trunc_normal_draw(world.streams["review_noise"], rnd.paper.quality, self.sigma_review, 0.0, 1.0)
        reviewer.review_load -= 1
        rnd.scores.append(score)
        if world.is_measured(rnd.paper):
            world.ledger.reviews_completed += 1
        if rnd.complete:
            self.on_round_complete(rnd, day)

    def publish(self, paper: Paper, journal: Journal, day: int, attempts: int, journal_quality: float | None = None) -> None:
        """Mark ``paper`` published and record its metrics.

        ``journal_quality`` is the true quality at which the journal took the
        paper; it defaults to the journal's current quality.
        """
        world = self.world
        q_j = journal.quality if journal_quality is None else journal_quality
        paper.published_journal = journal.id
        paper.published_day = day
        if world.is_measured(paper):
            cfg = world.config
            utility = publication_utility(paper.quality, q_j, cfg.r)
            world.ledger.add_publication(
                paper_id=paper.id,
                journal_id=journal.id,
                is_all_acceptance=journal.id == ALL_ACCEPTANCE_ID,
                delay_days=day - paper.first_submission_day,
                attempts=attempts,
                quality_fit=quality_fit(paper.quality, q_j),
                utility=utility,
                discounted_utility=discounted_utility(utility, attempts, cfg.beta),
                paper_quality=paper.quality,
            )

    def accept_into(self, paper: Paper, journal: Journal, day: int, attempts: int) -> None:
        q_before = journal.quality
        self.publish(paper, journal, day, attempts, q_before)
        update_journal_on_accept(journal, paper.quality)
