"""Agent-based simulation of journal peer review.

Two publication processes share one population of researchers and journals:
the status quo, where authors submit sequentially down a ladder of journals,
and a central warehouse that reviews each paper once and allocates papers to
journals by deferred acceptance.
"""

from pubsim.config import SimConfig
from pubsim.engine import Simulation, run
from pubsim.metrics import build_report, render_text
from pubsim.planner import PlannerParams, optimal_plan

__all__ = ["SimConfig", "Simulation", "run", "build_report", "render_text", "PlannerParams", "optimal_plan"]
__version__ = "0.1.0"
