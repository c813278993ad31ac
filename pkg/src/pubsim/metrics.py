"""Publication ledger, summary statistics, and the on-disk result format.

Output files written by :func:`write_outputs`:

``summary.json``
    Config, raw ledger counters, and every report scalar and stat row.
``publications.csv``
    One row per measured publication; columns are the
    :class:`PublicationRecord` fields in declaration order.
``journals.csv``
    ``journal_id, is_all_acceptance, initial_quality, starting_quality,
    final_quality, accepted_total``; starting quality is taken when the
    measured window opens.

All files are UTF-8 with LF line endings. Floats are written with ``repr`` so a
ledger reloaded from disk reproduces the report byte for byte.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

STAT_KEYS = ("count", "mean", "median", "min", "max", "q1", "q3", "mad")


@dataclass(slots=True)
class PublicationRecord:
    paper_id: int
    journal_id: int
    is_all_acceptance: bool
    delay_days: int
    attempts: int
    quality_fit: float
    utility: float
    discounted_utility: float
    paper_quality: float


@dataclass(slots=True)
class JournalRecord:
    journal_id: int
    is_all_acceptance: bool
    initial_quality: float
    starting_quality: float
    final_quality: float
    accepted_total: int = 0


@dataclass
class MetricsLedger:
    scenario: str
    records: list[PublicationRecord] = field(default_factory=list)
    written_papers: int = 0
    invitations_sent: int = 0
    reviews_completed: int = 0
    journals: list[JournalRecord] = field(default_factory=list)

    def add_publication(self, **fields: Any) -> None:
        self.records.append(PublicationRecord(**fields))

    def column(self, name: str, *, peer_reviewed_only: bool = False, all_acceptance_only: bool = False) -> list:
        rows = self.records
        if peer_reviewed_only:
            rows = [r for r in rows if not r.is_all_acceptance]
        elif all_acceptance_only:
            rows = [r for r in rows if r.is_all_acceptance]
        return [getattr(r, name) for r in rows]


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def _lower_median(sorted_vals: np.ndarray) -> float:
    return float(sorted_vals[(len(sorted_vals) - 1) // 2])


def summarize(values) -> dict[str, Any]:
    """Mean, lower median, extremes, Tukey hinges, and median absolute deviation.

    Hinges are lower medians of the two halves, each half including the middle
    element when the count is odd. An empty input gives ``count == 0`` and
    ``None`` everywhere else.
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n == 0:
        return dict.fromkeys(STAT_KEYS, None) | {"count": 0}
    half = n // 2
    lower = x[: half + 1] if n % 2 else x[:half]
    upper = x[half:]
    med = _lower_median(x)
    return {
        "count": n,
        "mean": float(np.mean(x)),
        "median": med,
        "min": float(x[0]),
        "max": float(x[-1]),
        "q1": _lower_median(lower),
        "q3": _lower_median(upper),
        "mad": _lower_median(np.sort(np.abs(x - med))),
    }


def _ratio(num: float, den: float) -> float | None:
    return num / den if den else None


METRIC_ROWS = (
    ("delay_days", "Publication delay [days]"),
    ("attempts", "Submission attempts"),
    ("quality_fit", "Quality fit"),
    ("utility", "Utility"),
    ("discounted_utility", "Discounted utility"),
)


def build_report(ledger: MetricsLedger, config: dict[str, Any] | None = None) -> dict[str, Any]:
    recs = ledger.records
    total = len(recs)
    all_acc = sum(1 for r in recs if r.is_all_acceptance)
    peer = total - all_acc
    written = ledger.written_papers

    counts = {
        "written_papers": written,
        "publications_total": total,
        "publications_peer_reviewed": peer,
        "publications_all_acceptance": all_acc,
        "reviews": ledger.reviews_completed,
        "invitations": ledger.invitations_sent,
    }
    ratios = {
        "published_share_of_papers": _ratio(total, written),
        "peer_reviewed_share_of_papers": _ratio(peer, written),
        "all_acceptance_share_of_papers": _ratio(all_acc, written),
        "peer_reviewed_share_of_publications": _ratio(peer, total),
        "all_acceptance_share_of_publications": _ratio(all_acc, total),
        "reviews_per_paper": _ratio(ledger.reviews_completed, written),
        "reviews_per_publication": _ratio(ledger.reviews_completed, total),
        "invitations_per_paper": _ratio(ledger.invitations_sent, written),
        "invitations_per_publication": _ratio(ledger.invitations_sent, total),
        "reviewer_acceptance_rate": _ratio(ledger.reviews_completed, ledger.invitations_sent),
    }
    published = {
        name: {
            "all": summarize(ledger.column(name)),
            "excluding_all_acceptance": summarize(ledger.column(name, peer_reviewed_only=True)),
        }
        for name, _ in METRIC_ROWS
    }
    published["all_acceptance_paper_quality"] = {
        "all": summarize(ledger.column("paper_quality", all_acceptance_only=True))
    }

    peers = [j for j in ledger.journals if not j.is_all_acceptance]
    change = [
        (j.final_quality - j.starting_quality) / j.starting_quality * 100.0
        for j in peers
        if j.starting_quality > 0
    ]
    journal_quality = {
        "initial": summarize([j.initial_quality for j in peers]),
        "starting": summarize([j.starting_quality for j in peers]),
        "final": summarize([j.final_quality for j in peers]),
        "change_pct": summarize(change),
    }
    report = {"scenario": ledger.scenario}
    if config is not None:
        report["config"] = config
    report |= {
        "ledger": {
            "written_papers": ledger.written_papers,
            "invitations_sent": ledger.invitations_sent,
            "reviews_completed": ledger.reviews_completed,
        },
        "counts": counts,
        "ratios": ratios,
        "published_papers": published,
        "journal_quality": journal_quality,
    }
    return report


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _fmt(v: Any, digits: int = 2) -> str:
    if v is None:
        return "-"
    if isinstance(v, int):
        return f"{v:,}"
    return f"{v:,.{digits}f}"


def _pct(v: float | None) -> str:
    return "-" if v is None else f"{100.0 * v:.2f}%"


def render_text(report: dict[str, Any]) -> str:
    c, r = report["counts"], report["ratios"]
    title = "Status quo" if report["scenario"] == "status_quo" else "DAA"
    out = [f"{title} simulation key metrics", ""]
    out.append(f"{'General':<32}{'Count':>14}{'/Papers':>12}{'/Publications':>15}")
    out.append(f"{'Written papers':<32}{_fmt(c['written_papers']):>14}{'100%':>12}{'-':>15}")
    out.append("Publications:")
    out.append(f"{'    Total':<32}{_fmt(c['publications_total']):>14}"
               f"{_pct(r['published_share_of_papers']):>12}{'100%' if c['publications_total'] else '-':>15}")
    out.append(f"{'    Peer-reviewed':<32}{_fmt(c['publications_peer_reviewed']):>14}"
               f"{_pct(r['peer_reviewed_share_of_papers']):>12}{_pct(r['peer_reviewed_share_of_publications']):>15}")
    out.append(f"{'    All-acceptance':<32}{_fmt(c['publications_all_acceptance']):>14}"
               f"{_pct(r['all_acceptance_share_of_papers']):>12}{_pct(r['all_acceptance_share_of_publications']):>15}")
    out.append(f"{'Reviews':<32}{_fmt(c['reviews']):>14}"
               f"{_fmt(r['reviews_per_paper']):>12}{_fmt(r['reviews_per_publication']):>15}")
    out.append(f"{'Review invitations':<32}{_fmt(c['invitations']):>14}"
               f"{_fmt(r['invitations_per_paper']):>12}{_fmt(r['invitations_per_publication']):>15}")
    out.append(f"{'Reviewer acceptance rate':<32}{_pct(r['reviewer_acceptance_rate']):>14}")
    out.append("")

    cols = ("mean", "median", "min", "max", "q1", "q3", "mad")
    header = f"{'Published papers':<32}" + "".join(f"{k.upper() if k in ('q1', 'q3', 'mad') else k.title():>10}" for k in cols)
    out.append(header)
    rows = [(name, label) for name, label in METRIC_ROWS] + [("all_acceptance_paper_quality", "All-acceptance paper quality")]
    for name, label in rows:
        variants = report["published_papers"][name]
        stats = variants["all"]
        out.append(f"{label:<32}" + "".join(f"{_fmt(stats[k]):>10}" for k in cols))
        if "excluding_all_acceptance" in variants:
            stats = variants["excluding_all_acceptance"]
            out.append(f"{'':<32}" + "".join(f"{'(' + _fmt(stats[k]) + ')':>10}" for k in cols))
    out.append("(parenthesised rows exclude the all-acceptance journal; MAD is the median absolute deviation)")
    out.append("")

    out.append(f"{'Journal quality':<32}" + "".join(f"{k.upper() if k in ('q1', 'q3') else k.title():>10}" for k in cols[:-1]))
    labels = {"initial": "Initial quality", "starting": "Starting quality", "final": "Final quality",
              "change_pct": "Quality change [%]"}
    for key, label in labels.items():
        stats = report["journal_quality"][key]
        out.append(f"{label:<32}" + "".join(f"{_fmt(stats[k]):>10}" for k in cols[:-1]))
    out.append("(excludes the all-acceptance journal; starting quality is measured after rampup)")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

PUBLICATION_COLUMNS = tuple(f.name for f in dataclasses.fields(PublicationRecord))
JOURNAL_COLUMNS = tuple(f.name for f in dataclasses.fields(JournalRecord))


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def write_outputs(ledger: MetricsLedger, report: dict[str, Any], out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(dumps_report(report), encoding="utf-8", newline="\n")
    with open(out / "publications.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PUBLICATION_COLUMNS)
        for rec in ledger.records:
            w.writerow([int(v) if isinstance(v, bool) else v for v in dataclasses.astuple(rec)])
    with open(out / "journals.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(JOURNAL_COLUMNS)
        for j in ledger.journals:
            w.writerow([int(v) if isinstance(v, bool) else v for v in dataclasses.astuple(j)])


def _parse_row(row: dict[str, str], types: dict[str, type]) -> dict[str, Any]:
    out = {}
    for key, typ in types.items():
        raw = row[key]
        out[key] = bool(int(raw)) if typ is bool else typ(raw)
    return out


def load_ledger(out_dir: str | Path) -> tuple[MetricsLedger, dict[str, Any] | None]:
    """Rebuild a ledger (and its config, if recorded) from a results directory."""
    out = Path(out_dir)
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    counters = summary["ledger"]
    ledger = MetricsLedger(
        scenario=summary["scenario"],
        written_papers=counters["written_papers"],
        invitations_sent=counters["invitations_sent"],
        reviews_completed=counters["reviews_completed"],
    )
    pub_types = {"paper_id": int, "journal_id": int, "is_all_acceptance": bool, "delay_days": int,
                 "attempts": int, "quality_fit": float, "utility": float, "discounted_utility": float,
                 "paper_quality": float}
    with open(out / "publications.csv", encoding="utf-8", newline="") as fh:
        ledger.records = [PublicationRecord(**_parse_row(row, pub_types)) for row in csv.DictReader(fh)]
    j_types = {"journal_id": int, "is_all_acceptance": bool, "initial_quality": float,
               "starting_quality": float, "final_quality": float, "accepted_total": int}
    with open(out / "journals.csv", encoding="utf-8", newline="") as fh:
        ledger.journals = [JournalRecord(**_parse_row(row, j_types)) for row in csv.DictReader(fh)]
    return ledger, summary.get("config")
