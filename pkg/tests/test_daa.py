from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import tiny_config
from pubsim.daa import (
    ReadyPaper,
    build_allocation_instance,
    compute_capacities,
    paper_preference_list,
    warehouse_invitation_response,
)
from pubsim.engine import Simulation
from pubsim.matching import check_stability, serial_dictatorship, solve_journal_optimal
from pubsim.model import ALL_ACCEPTANCE_ID, Journal, Paper, Researcher, make_all_acceptance_journal
from pubsim.stochastics import RngHandle


@pytest.mark.parametrize("n_p, per, sink", [(105, 1, 5), (101, 1, 1), (250, 2, 50), (11, 1, 1), (21, 1, 11)])
def test_capacity_examples(n_p, per, sink):
    caps = compute_capacities(n_p, 100 if n_p > 21 else 10)
    assert (caps.per_journal, caps.all_acceptance) == (per, sink)


@given(n_j=st.integers(1, 200), extra=st.integers(0, 5000))
def test_capacity_invariants(n_j, extra):
    n_p = n_j + 1 + extra
    caps = compute_capacities(n_p, n_j)
    assert caps.total == n_p == sum(caps.as_dict().values())
    assert caps.per_journal == n_p // (n_j + 1)
    assert caps.all_acceptance >= caps.per_journal


def test_capacity_precondition():
    with pytest.raises(ValueError):
        compute_capacities(10, 10)


def test_preference_list_shape():
    journals = [make_all_acceptance_journal()] + [Journal(k, 0.1 * k) for k in range(1, 9)]
    prefs = paper_preference_list(RngHandle(0, 3), journals)
    assert len(prefs) == 9
    assert prefs[-1] == ALL_ACCEPTANCE_ID
    assert sorted(prefs[:-1]) == list(range(1, 9))


def test_preference_list_follows_quality_when_gaps_are_wide():
    journals = [make_all_acceptance_journal()] + [Journal(k, 0.2 * k) for k in range(1, 5)]
    assert paper_preference_list(RngHandle(0, 3), journals, 0.01) == [4, 3, 2, 1, 0]


def test_warehouse_reviewers_only_check_capacity():
    r = Researcher(0, 0.99, 100)
    for load in (0, 1, 2):
        r.review_load = load
        assert warehouse_invitation_response(r) == "accept"
    r.review_load = 3
    assert warehouse_invitation_response(r) == "decline"


def _ready(n, n_j, seed=0):
    import random

    rng = random.Random(seed)
    out = []
    for i in range(n):
        prefs = rng.sample(range(1, n_j + 1), n_j) + [ALL_ACCEPTANCE_ID]
        out.append(ReadyPaper(Paper(i, 0, 0.5, 0), rng.random(), prefs, rng.randint(0, 5)))
    return out


@pytest.mark.parametrize("n, n_j", [(11, 10), (17, 4), (40, 6)])
def test_allocation_instance_is_serial_dictatorship_by_score(n, n_j):
    ready = _ready(n, n_j)
    inst, ranking, caps = build_allocation_instance(ready, n_j)
    scores = [rp.score for rp in ranking]
    assert scores == sorted(scores, reverse=True)
    result = solve_journal_optimal(inst)
    assert len(result.assignment) == n
    assert check_stability(inst, result) == []
    order = [rp.paper.id for rp in ranking]
    assert result.assignment == serial_dictatorship(order, inst.paper_prefs, inst.capacities).assignment
    for j, cap in caps.as_dict().items():
        assert len(result.assignees(j)) == cap


def test_ties_in_score_break_by_intake_then_id():
    papers = [ReadyPaper(Paper(i, 0, 0.5, 0), 0.5, [1, 0], day) for i, day in [(3, 2), (1, 2), (2, 1)]]
    _, ranking, _ = build_allocation_instance(papers, 1)
    assert [rp.paper.id for rp in ranking] == [2, 1, 3]


# -------------------------------------------------------------- simulation


@pytest.fixture(scope="module")
def finished():
    sim = Simulation(tiny_config(scenario="daa"), keep_papers=True, verify_stability=True)
    ledger = sim.run()
    return sim, ledger


def test_single_attempt_and_delay_floor(finished):
    _, ledger = finished
    assert ledger.records
    assert all(r.attempts == 1 for r in ledger.records)
    assert min(r.delay_days for r in ledger.records) >= 89
    assert all(r.utility == r.discounted_utility for r in ledger.records)


def test_rounds_empty_the_ready_list_and_respect_the_trigger(finished):
    sim, _ = finished
    inv = sim.process.inventory
    assert len(inv.ready) < sim.config.n_journals + 1
    assert inv.history
    for rnd in inv.history:
        assert rnd.n_papers >= sim.config.n_journals + 1
        assert rnd.capacities.total == rnd.n_papers


def test_every_paper_reviewed_exactly_once(finished):
    sim, _ = finished
    for paper in sim.world.papers:
        assert len(paper.history) <= 1
        if paper.is_published:
            assert len(paper.history[0].scores) == 3


def test_reviews_per_publication_close_to_three(finished):
    _, ledger = finished
    assert ledger.reviews_completed / len(ledger.records) == pytest.approx(3.0, abs=0.1)
