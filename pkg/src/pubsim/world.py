"""Mutable state of one replication: agents, agenda, streams, ledger."""

from __future__ import annotations

import numpy as np

from pubsim.config import SimConfig
from pubsim.metrics import JournalRecord, MetricsLedger
from pubsim.model import Journal, Paper, Researcher, make_all_acceptance_journal
from pubsim.planner import PlannerParams, SubmissionPlan, optimal_plan
from pubsim.reviewing import WRITE
from pubsim.stochastics import RngHandle, bounded_gumbel_sample, make_streams


class World:
    """Population, journals, and the per-day task agenda.

    The agenda maps ``day -> researcher id -> [task, ...]``; a task is a tuple
    whose first element is its kind (see :mod:`pubsim.reviewing`).
    """

    def __init__(self, config: SimConfig, streams: dict[str, RngHandle] | None = None,
                 keep_papers: bool = False) -> None:
        self.config = config
        self.streams = streams if streams is not None else make_streams(config.seed)
        self.researchers: list[Researcher] = []
        self.journals: list[Journal] = []
        self.plan: SubmissionPlan = optimal_plan(PlannerParams(config.r, config.beta, config.n_att))
        self.agenda: dict[int, dict[int, list[tuple]]] = {}
        self.ledger = MetricsLedger(scenario=config.scenario)
        self.measure_start = config.rampup_days
        self.day = 0
        self.next_paper_id = 0
        self.keep_papers = keep_papers
        self.papers: list[Paper] = []
        self.initial_quality: list[float] = []
        self.starting_quality: list[float] | None = None

    # ------------------------------------------------------------ scheduling

    def schedule(self, day: int, researcher_id: int, task: tuple) -> None:
        if day <= self.day:
            raise ValueError(f"cannot schedule a task for day {day} from day {self.day}")
        self.agenda.setdefault(day, {}).setdefault(researcher_id, []).append(task)

    def is_measured(self, paper: Paper) -> bool:
        return paper.first_submission_day is not None and paper.first_submission_day >= self.measure_start

    # ------------------------------------------------------------ reviewers

    def pick_reviewer(self, paper: Paper) -> int | None:
        """Uniformly random researcher who is not the author and was never invited for ``paper``."""
        n = len(self.researchers)
        taken = paper.invited
        if len(taken) >= n - 1:
            return None
        gen = self.streams["reviewer_selection"].generator
        if len(taken) < n // 2:
            while True:
                rid = int(gen.random() * n)
                if rid != paper.author_id and rid not in taken:
                    return rid
        pool = [i for i in range(n) if i != paper.author_id and i not in taken]
        return pool[int(gen.integers(len(pool)))]

    # ------------------------------------------------------------ papers

    def new_paper(self, author: Researcher, quality: float, day: int) -> Paper:
        paper = Paper(self.next_paper_id, author.id, quality, day)
        self.next_paper_id += 1
        if self.keep_papers:
            self.papers.append(paper)
        return paper

    # ------------------------------------------------------------ snapshots

    def snapshot_starting_quality(self) -> None:
        self.starting_quality = [j.quality for j in self.journals]

    def finalize_ledger(self) -> MetricsLedger:
        starting = self.starting_quality if self.starting_quality is not None else [j.quality for j in self.journals]
        self.ledger.journals = [
            JournalRecord(j.id, j.is_all_acceptance, self.initial_quality[j.id], starting[j.id], j.quality,
                          j.accepted_count)
            for j in self.journals
        ]
        return self.ledger


def initialize_world(config: SimConfig, streams: dict[str, RngHandle] | None = None,
                     keep_papers: bool = False) -> World:
    """Draw the researcher and journal populations and schedule first papers."""
    world = World(config, streams, keep_papers)
    pop = world.streams["population"]
    qualities = bounded_gumbel_sample(pop, config.researcher_quality_spec, config.n_researchers)
    writing = np.ceil(bounded_gumbel_sample(pop, config.writing_days_spec, config.n_researchers))
    journal_q = bounded_gumbel_sample(pop, config.journal_quality_spec, config.n_journals)

    world.researchers = [
        Researcher(i, float(q), max(1, int(w)), tolerance_fraction=config.tolerance)
        for i, (q, w) in enumerate(zip(qualities, writing))
    ]
    world.journals = [make_all_acceptance_journal()] + [
        Journal(k + 1, float(q), tolerance_fraction=config.tolerance) for k, q in enumerate(journal_q)
    ]
    world.initial_quality = [j.quality for j in world.journals]
    for r in world.researchers:
        r.writing_started = 0
        world.agenda.setdefault(r.writing_days - 1, {}).setdefault(r.id, []).append((WRITE, None, None))
    return world
