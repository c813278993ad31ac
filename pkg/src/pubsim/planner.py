"""Optimal submission plan for an author facing a ladder of journals.

A journal accepting with probability ``p`` pays ``1/p``; a rejection costs one
period of discounting. With CRRA utility the per-period first-order condition
has a closed form, so the plan is built by backward induction from the
terminal sure-acceptance period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from pubsim.errors import ConfigurationError, DomainError

P_MIN = 1e-9
_LOG_BRANCH = 1e-9


def crra_utility(x: float, r: float) -> float:
    """``(x**(1-r) - 1) / (1-r)``, or ``ln x`` when ``r`` is (numerically) 1."""
    if not x > 0:
        raise DomainError(f"CRRA utility needs x > 0, got {x}")
    if abs(r - 1.0) < _LOG_BRANCH:
        return math.log(x)
    # + 0.0 turns the -0.0 produced at x == 1 into 0.0
    return (x ** (1.0 - r) - 1.0) / (1.0 - r) + 0.0


def one_shot_optimum(r: float) -> float:
    """Optimal acceptance probability with a single risky attempt."""
    if not r > 0:
        raise ConfigurationError(f"risk aversion must be positive, got {r}")
    if abs(r - 1.0) < _LOG_BRANCH:
        return math.exp(-1.0)
    return min(1.0, r ** (1.0 / (1.0 - r)))


@dataclass(frozen=True)
class PlannerParams:
    r: float
    beta: float
    n: int

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise ConfigurationError(f"r must be positive, got {self.r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigurationError(f"beta must lie in [0, 1], got {self.beta}")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class SubmissionPlan:
    """Target acceptance probability and continuation value for each period.

    ``probs[i]`` and ``values[i]`` belong to period ``i + 1``. ``clamped`` lists
    the (1-based) periods whose first-order condition had no interior root.
    """

    probs: tuple[float, ...]
    values: tuple[float, ...]
    clamped: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.probs)


def _stage_optimum(r: float, continuation: float) -> tuple[float, bool]:
    """Maximizer of ``p*u(1/p) + (1-p)*continuation`` over ``(0, 1]``."""
    if abs(r - 1.0) < _LOG_BRANCH:
        p = math.exp(-(1.0 + continuation))
    else:
        base = (1.0 + (1.0 - r) * continuation) / r
        if base <= 0.0:
            return P_MIN, True
        p = base ** (1.0 / (r - 1.0))
    if p >= 1.0:
        return 1.0, False
    if p < P_MIN:
        return P_MIN, True
    return p, False


def optimal_plan(params: PlannerParams) -> SubmissionPlan:
    r, beta, n = params.r, params.beta, int(params.n)
    probs = [1.0] * n
    values = [0.0] * n  # u(1) in the terminal period
    clamped = []
    for i in range(n - 2, -1, -1):
        continuation = beta * values[i + 1]
        p, hit_floor = _stage_optimum(r, continuation)
        if hit_floor:
            clamped.append(i + 1)
        probs[i] = p
        values[i] = p * crra_utility(1.0 / p, r) + (1.0 - p) * continuation
    return SubmissionPlan(tuple(probs), tuple(values), tuple(sorted(clamped)))


def expected_plan_utility(probs, r: float, beta: float) -> float:
    """Expected utility of following ``probs`` (last entry must be 1)."""
    total = 0.0
    reach = 1.0
    for i, p in enumerate(probs):
        total += reach * beta**i * p * crra_utility(1.0 / p, r)
        reach *= 1.0 - p
    return total


def horizon_diagnostic(plan: SubmissionPlan, beta: float) -> list[bool]:
    """Flag each non-terminal period whose value falls below the discounted next one.

    A ``True`` entry means the author would rather skip that period.
    """
    v = plan.values
    return [v[i] < beta * v[i + 1] for i in range(len(v) - 1)]
