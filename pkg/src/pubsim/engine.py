"""Day-by-day driver for one replication.

Each simulated day the researchers with something to do (finish a paper,
resubmit, answer an invitation, deliver a review) are activated once each in a
random order drawn from the scheduler stream. Researchers with nothing due
would do nothing, so they are not visited. Journal decisions and the warehouse
allocation check run after all activations.
"""

from __future__ import annotations

import logging

from pubsim.config import SimConfig
from pubsim.daa import WarehouseProcess
from pubsim.metrics import MetricsLedger
from pubsim.model import draw_paper_quality
from pubsim.reviewing import RESPOND, RESUBMIT, REVIEW, WRITE, PublicationProcess
from pubsim.status_quo import StatusQuoProcess
from pubsim.world import World, initialize_world

log = logging.getLogger(__name__)

__all__ = ["Simulation", "initialize_world", "run", "make_process"]


def make_process(world: World, **kwargs) -> PublicationProcess:
    if world.config.scenario == "daa":
        return WarehouseProcess(world, **kwargs)
    return StatusQuoProcess(world)


class Simulation:
    def __init__(self, config: SimConfig, keep_papers: bool = False, **process_kwargs) -> None:
        self.config = config
        self.world = initialize_world(config, keep_papers=keep_papers)
        self.process = make_process(self.world, **process_kwargs)
        self.total_days = config.rampup_days + config.run_days
        self._sigma_paper = config.sigma_paper

    @property
    def day(self) -> int:
        return self.world.day

    def step(self) -> None:
        world = self.world
        day = world.day
        if day == world.measure_start:
            world.snapshot_starting_quality()
        bucket = world.agenda.pop(day, None)
        if bucket:
            order = sorted(bucket)
            world.streams["scheduler"].generator.shuffle(order)
            for rid in order:
                self._activate(world.researchers[rid], bucket[rid], day)
        self.process.end_of_day(day)
        world.day = day + 1

    def _activate(self, researcher, tasks: list[tuple], day: int) -> None:
        tasks.sort(key=lambda t: t[0])
        process = self.process
        for kind, a, b in tasks:
            if kind == WRITE:
                self._finish_paper(researcher, day)
            elif kind == RESUBMIT:
                process.on_resubmit(researcher, a, day)
            elif kind == RESPOND:
                process.handle_response(researcher, a, b, day)
            elif kind == REVIEW:
                process.handle_review(researcher, a, b, day)

    def _finish_paper(self, researcher, day: int) -> None:
        world = self.world
        quality = draw_paper_quality(world.streams["paper_quality"], researcher.quality, self._sigma_paper)
        paper = world.new_paper(researcher, quality, day)
        if day >= world.measure_start:
            world.ledger.written_papers += 1
        researcher.writing_started = day + 1
        world.schedule(day + researcher.writing_days, researcher.id, (WRITE, None, None))
        self.process.on_paper_written(researcher, paper, day)

    def run(self) -> MetricsLedger:
        while self.world.day < self.total_days:
            self.step()
        if self.world.starting_quality is None:
            # no measured days were simulated
            self.world.snapshot_starting_quality()
        return self.world.finalize_ledger()


def run(config: SimConfig) -> MetricsLedger:
    """Simulate ``config`` from scratch and return the completed ledger."""
    log.info("running %s: %d researchers, %d journals, %d+%d years, seed %d", config.scenario,
             config.n_researchers, config.n_journals, config.rampup_years, config.run_years, config.seed)
    return Simulation(config).run()
