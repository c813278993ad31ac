from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import tiny_config
from pubsim.engine import run
from pubsim.metrics import (
    JournalRecord,
    MetricsLedger,
    build_report,
    dumps_report,
    load_ledger,
    render_text,
    summarize,
    write_outputs,
)


def _pub(ledger, aa=False, delay=100, attempts=2, fit=0.9, q=0.4):
    ledger.add_publication(
        paper_id=len(ledger.records),
        journal_id=0 if aa else 1,
        is_all_acceptance=aa,
        delay_days=delay,
        attempts=attempts,
        quality_fit=fit,
        utility=0.3,
        discounted_utility=0.27,
        paper_quality=q,
    )


def test_summary_by_hand():
    s = summarize([1, 2, 3, 4, 100])
    assert s["count"] == 5 and s["mean"] == 22.0 and s["median"] == 3.0
    assert (s["min"], s["max"]) == (1.0, 100.0)
    assert (s["q1"], s["q3"]) == (2.0, 4.0)
    assert s["mad"] == 1.0


def test_even_count_uses_lower_median():
    s = summarize([4, 1, 3, 2])
    assert s["median"] == 2.0 and s["q1"] == 1.0 and s["q3"] == 3.0


def test_empty_summary():
    s = summarize([])
    assert s["count"] == 0 and s["mean"] is None and s["mad"] is None


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=200))
def test_summary_order_properties(xs):
    s = summarize(xs)
    assert s["min"] <= s["q1"] <= s["median"] <= s["q3"] <= s["max"]
    assert s["mad"] >= 0
    assert s["mean"] == pytest.approx(np.mean(xs))
    assert s["median"] in xs


def test_single_all_acceptance_publication_shares():
    ledger = MetricsLedger("status_quo", written_papers=1)
    _pub(ledger, aa=True, delay=0, attempts=6, fit=0.6)
    rep = build_report(ledger)
    assert rep["ratios"]["peer_reviewed_share_of_publications"] == 0.0
    assert rep["ratios"]["all_acceptance_share_of_publications"] == 1.0
    assert rep["published_papers"]["quality_fit"]["excluding_all_acceptance"]["count"] == 0
    assert "All-acceptance" in render_text(rep)


def test_ratios():
    ledger = MetricsLedger("daa", written_papers=10, invitations_sent=40, reviews_completed=30)
    for _ in range(5):
        _pub(ledger)
    rep = build_report(ledger)
    r = rep["ratios"]
    assert r["reviews_per_publication"] == 6.0
    assert r["invitations_per_paper"] == 4.0
    assert r["reviewer_acceptance_rate"] == 0.75
    assert r["published_share_of_papers"] == 0.5


def test_empty_ledger_report_renders():
    rep = build_report(MetricsLedger("daa"))
    assert rep["ratios"]["reviews_per_publication"] is None
    render_text(rep)
    dumps_report(rep)


def test_journal_change_excludes_all_acceptance():
    ledger = MetricsLedger("status_quo")
    ledger.journals = [JournalRecord(0, True, 0.0, 0.0, 0.0), JournalRecord(1, False, 0.5, 0.4, 0.44),
                       JournalRecord(2, False, 0.2, 0.2, 0.18)]
    change = build_report(ledger)["journal_quality"]["change_pct"]
    assert change["count"] == 2
    assert change["mean"] == pytest.approx(0.0)
    assert change["max"] == pytest.approx(10.0)


@pytest.fixture(scope="module")
def persisted(tmp_path_factory):
    cfg = tiny_config()
    ledger = run(cfg)
    report = build_report(ledger, cfg.to_dict())
    out = tmp_path_factory.mktemp("run")
    write_outputs(ledger, report, out)
    return out, report


def test_reloaded_ledger_reproduces_report_bytes(persisted):
    out, report = persisted
    ledger, config = load_ledger(out)
    assert dumps_report(build_report(ledger, config)) == (out / "summary.json").read_text()


def test_output_files(persisted):
    out, report = persisted
    pubs = (out / "publications.csv").read_text().splitlines()
    assert pubs[0].startswith("paper_id,journal_id,is_all_acceptance")
    assert len(pubs) - 1 == report["counts"]["publications_total"]
    journals = (out / "journals.csv").read_text().splitlines()
    assert len(journals) - 1 == report["config"]["n_journals"] + 1


def test_text_agrees_with_json_on_every_scalar(persisted):
    _, report = persisted
    text = render_text(report)
    c, r = report["counts"], report["ratios"]
    for key in ("written_papers", "publications_total", "publications_peer_reviewed", "reviews", "invitations"):
        assert f"{c[key]:,}" in text
    for key in ("reviews_per_publication", "invitations_per_publication", "reviews_per_paper"):
        assert f"{r[key]:,.2f}" in text
    for key in ("reviewer_acceptance_rate", "all_acceptance_share_of_publications", "published_share_of_papers"):
        assert f"{100 * r[key]:.2f}%" in text
    for name in ("delay_days", "attempts", "quality_fit", "utility", "discounted_utility"):
        stats = report["published_papers"][name]["all"]
        row = next(line for line in text.splitlines() if line.startswith(_label(name)))
        for k in ("mean", "median", "min", "max", "q1", "q3", "mad"):
            assert f"{stats[k]:,.2f}" in row


def _label(name):
    return {"delay_days": "Publication delay", "attempts": "Submission attempts", "quality_fit": "Quality fit",
            "utility": "Utility", "discounted_utility": "Discounted utility"}[name]
