from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pubsim.errors import ConfigurationError, DomainError
from pubsim.planner import (
    PlannerParams,
    SubmissionPlan,
    crra_utility,
    expected_plan_utility,
    horizon_diagnostic,
    one_shot_optimum,
    optimal_plan,
)

FIG_R_PANEL = [(r, 0.9) for r in (1.5, 2.0, 3.0)]
FIG_BETA_PANEL = [(2.0, b) for b in (0.7, 0.9, 1.0)]


# ----------------------------------------------------------------- oracle


def _u(x, r):
    if abs(r - 1.0) < 1e-12:
        return np.log(x)
    return (x ** (1.0 - r) - 1.0) / (1.0 - r)


def _stage_value(p, r, cont):
    return p * _u(1.0 / p, r) + (1.0 - p) * cont


def grid_plan(r: float, beta: float, n: int) -> tuple[list[float], list[float]]:
    """Backward induction by brute-force grid search with two refinements."""
    probs, values = [1.0], [0.0]
    for _ in range(n - 1):
        cont = beta * values[0]
        grid = np.linspace(1e-6, 1.0, 20_001)
        for _ in range(2):
            vals = _stage_value(grid, r, cont)
            k = int(np.argmax(vals))
            step = grid[1] - grid[0]
            grid = np.linspace(max(1e-9, grid[k] - 2 * step), min(1.0, grid[k] + 2 * step), 2_001)
        vals = _stage_value(grid, r, cont)
        k = int(np.argmax(vals))
        probs.insert(0, float(grid[k]))
        values.insert(0, float(vals[k]))
    return probs, values


# ----------------------------------------------------------------- utility


def test_crra_log_branch():
    assert crra_utility(math.e, 1.0) == pytest.approx(1.0)
    assert crra_utility(math.e, 1.0 + 1e-12) == pytest.approx(1.0)


def test_crra_known_values():
    assert crra_utility(4.0, 2.0) == pytest.approx(0.75)
    assert crra_utility(4.0, 1.5) == pytest.approx(1.0)


def test_utility_of_a_sure_thing_is_positive_zero():
    v = crra_utility(1.0, 1.5)
    assert v == 0.0 and math.copysign(1.0, v) == 1.0


@pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
def test_crra_domain(x):
    with pytest.raises(DomainError):
        crra_utility(x, 2.0)


# --------------------------------------------------------------- one shot


@pytest.mark.parametrize("r", [1.0, 1.0 + 1e-7, 1.0 - 1e-7])
def test_one_shot_log_limit(r):
    assert abs(one_shot_optimum(r) - 0.367879) <= 1e-5


@pytest.mark.parametrize("r", [0.5, 1.5, 2.0, 3.0])
def test_one_shot_matches_grid(r):
    grid = np.linspace(1e-6, 1.0, 1_000_001)
    best = grid[np.argmax(grid * _u(1.0 / grid, r))]
    assert one_shot_optimum(r) == pytest.approx(best, abs=1e-5)


def test_one_shot_rejects_nonpositive_r():
    with pytest.raises(ConfigurationError):
        one_shot_optimum(0.0)


# ----------------------------------------------------------------- plans


def test_worked_example():
    plan = optimal_plan(PlannerParams(2.0, 0.9, 3))
    assert plan.probs == pytest.approx((0.3875, 0.5, 1.0), abs=1e-12)
    assert plan.values == pytest.approx((0.37515625, 0.25, 0.0), abs=1e-12)
    assert plan.clamped == ()


def test_single_period_plan():
    plan = optimal_plan(PlannerParams(1.5, 0.9, 1))
    assert plan.probs == (1.0,) and plan.values == (0.0,) and plan.n == 1


def test_default_parameters_plan():
    plan = optimal_plan(PlannerParams(1.5, 0.9, 6))
    assert plan.probs == pytest.approx((0.2285, 0.2482, 0.2796, 0.3338, 0.4444, 1.0), abs=1e-4)


def test_two_period_first_entry_is_the_one_shot_optimum():
    for r in (1.5, 2.0, 3.0):
        assert optimal_plan(PlannerParams(r, 0.9, 2)).probs[0] == pytest.approx(one_shot_optimum(r))


_rng = np.random.default_rng(20240611)
RANDOM_DRAWS = [
    (float(_rng.uniform(0.5, 4.0)), float(_rng.uniform(0.0, 1.0)), int(_rng.integers(1, 9))) for _ in range(50)
]


@pytest.mark.parametrize("r, beta, n", RANDOM_DRAWS)
def test_plan_agrees_with_grid_search(r, beta, n):
    plan = optimal_plan(PlannerParams(r, beta, n))
    probs, values = grid_plan(r, beta, n)
    assert np.max(np.abs(np.array(plan.probs) - probs)) <= 1e-3
    assert np.max(np.abs(np.array(plan.values) - values)) <= 1e-3


@pytest.mark.parametrize("r, beta", FIG_R_PANEL + FIG_BETA_PANEL)
def test_plans_increase_over_attempts(r, beta):
    for n in range(1, 9):
        p = optimal_plan(PlannerParams(r, beta, n)).probs
        assert all(a < b for a, b in zip(p, p[1:]))


def test_more_risk_aversion_raises_every_target():
    for n in range(2, 9):
        plans = [optimal_plan(PlannerParams(r, 0.9, n)).probs for r in (1.5, 2.0, 3.0)]
        for lo, hi in zip(plans, plans[1:]):
            assert all(a < b for a, b in zip(lo[:-1], hi[:-1]))


def test_heavier_discounting_raises_targets():
    for n in range(2, 9):
        plans = [optimal_plan(PlannerParams(2.0, b, n)).probs for b in (1.0, 0.9, 0.7)]
        for patient, impatient in zip(plans, plans[1:]):
            # the second-to-last target faces a zero continuation, so beta cannot move it
            assert patient[-2] == pytest.approx(impatient[-2])
            assert all(a < b for a, b in zip(patient[:-2], impatient[:-2]))


@given(r=st.floats(0.3, 5.0), beta=st.floats(0.0, 1.0), n=st.integers(1, 8))
def test_values_equal_expected_utility_of_the_plan(r, beta, n):
    plan = optimal_plan(PlannerParams(r, beta, n))
    assert expected_plan_utility(plan.probs, r, beta) == pytest.approx(plan.values[0], abs=1e-10)
    assert plan.probs[-1] == 1.0
    assert all(0.0 < p <= 1.0 for p in plan.probs)


@given(
    r=st.floats(0.5, 4.0),
    beta=st.floats(0.1, 1.0),
    n=st.integers(2, 6),
    i=st.integers(0, 4),
    eps=st.floats(-0.05, 0.05).filter(lambda e: abs(e) > 1e-6),
)
def test_perturbing_one_target_never_helps(r, beta, n, i, eps):
    plan = optimal_plan(PlannerParams(r, beta, n))
    i = i % (n - 1)
    probs = list(plan.probs)
    probs[i] = min(1.0, max(1e-6, probs[i] + eps))
    assert expected_plan_utility(probs, r, beta) <= plan.values[0] + 1e-12


def test_horizon_diagnostic_on_optimal_plans():
    for r, beta in FIG_R_PANEL + FIG_BETA_PANEL:
        plan = optimal_plan(PlannerParams(r, beta, 8))
        flags = horizon_diagnostic(plan, beta)
        assert len(flags) == 7 and not any(flags)


def test_horizon_diagnostic_flags_a_bad_period():
    plan = SubmissionPlan((0.5, 0.3, 1.0), (0.1, 0.4, 0.0))
    assert horizon_diagnostic(plan, 0.9) == [True, False]


@pytest.mark.parametrize("r, beta, n", [(0.0, 0.9, 3), (2.0, -0.1, 3), (2.0, 1.1, 3), (2.0, 0.9, 0), (2.0, 0.9, 2.5)])
def test_param_validation(r, beta, n):
    with pytest.raises(ConfigurationError):
        PlannerParams(r, beta, n)
