"""Simulation configuration and its JSON file format.

The JSON schema is flat and uses the :class:`SimConfig` field names. Gumbel
population specs are objects ``{"skew": "right"|"left", "lo": x, "hi": y}``.
Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pubsim.errors import ConfigurationError
from pubsim.stochastics import BoundedGumbelSpec

log = logging.getLogger(__name__)

SCENARIOS = ("status_quo", "daa")
DAYS_PER_YEAR = 365


def normalize_scenario(name: str) -> str:
    key = str(name).strip().lower().replace("-", "_")
    if key not in SCENARIOS:
        raise ConfigurationError(f"scenario: expected one of status-quo, daa; got {name!r}")
    return key


def _gumbel(skew: str, lo: float, hi: float) -> dict[str, Any]:
    return {"skew": skew, "lo": lo, "hi": hi}


@dataclass
class SimConfig:
    scenario: str = "status_quo"
    seed: int = 0
    n_researchers: int = 12_500
    n_journals: int = 100
    researcher_quality: dict = field(default_factory=lambda: _gumbel("right", 0.0, 1.0))
    journal_quality: dict = field(default_factory=lambda: _gumbel("right", 0.0, 1.0))
    writing_days: dict = field(default_factory=lambda: _gumbel("left", 60.0, 500.0))
    eta_resp: int = 20
    eta_rev: int = 70
    r: float = 1.5
    beta: float = 0.9
    n_att: int = 6
    n_wait_years: float = 35.0
    sigma_paper: float = 0.1
    sigma_review: float = 0.2
    sigma_journal: float = 0.05
    tolerance: float = 0.1
    review_capacity: int = 3
    rampup_years: int = 50
    run_years: int = 100

    def __post_init__(self) -> None:
        self.scenario = normalize_scenario(self.scenario)
        self.validate()

    # ------------------------------------------------------------------ checks

    def validate(self) -> None:
        def need(cond: bool, name: str, msg: str) -> None:
            if not cond:
                raise ConfigurationError(f"{name}: {msg} (got {getattr(self, name)!r})")

        def is_int(v: Any) -> bool:
            return isinstance(v, int) and not isinstance(v, bool)

        need(is_int(self.seed) and 0 <= self.seed < 2**64, "seed", "must be an unsigned 64-bit integer")
        need(is_int(self.n_researchers) and self.n_researchers >= 5, "n_researchers", "must be an integer >= 5")
        need(is_int(self.n_journals) and self.n_journals >= 1, "n_journals", "must be an integer >= 1")
        for name in ("eta_resp", "eta_rev", "n_att", "review_capacity"):
            need(is_int(getattr(self, name)) and getattr(self, name) >= 1, name, "must be a positive integer")
        for name in ("rampup_years", "run_years"):
            need(is_int(getattr(self, name)) and getattr(self, name) >= 0, name, "must be a non-negative integer")
        for name in ("sigma_paper", "sigma_review", "sigma_journal", "r"):
            v = getattr(self, name)
            need(isinstance(v, (int, float)) and math.isfinite(v) and v > 0, name, "must be positive")
        need(isinstance(self.beta, (int, float)) and 0.0 <= self.beta <= 1.0, "beta", "must lie in [0, 1]")
        need(isinstance(self.tolerance, (int, float)) and 0.0 <= self.tolerance < 1.0, "tolerance", "must lie in [0, 1)")
        need(isinstance(self.n_wait_years, (int, float)) and self.n_wait_years > 0, "n_wait_years", "must be positive")
        for name in ("researcher_quality", "journal_quality", "writing_days"):
            self._gumbel_spec(name)
        for name in ("researcher_quality", "journal_quality"):
            spec = getattr(self, name)
            need(spec["lo"] >= 0.0 and spec["hi"] <= 1.0, name, "support must lie within [0, 1]")
        need(self.writing_days["lo"] >= 0.0, "writing_days", "support must be non-negative")
        if self.eta_resp + self.eta_rev != 90:
            log.warning("first response time eta_resp + eta_rev = %d differs from the 90-day default",
                        self.eta_resp + self.eta_rev)

    def _gumbel_spec(self, name: str) -> BoundedGumbelSpec:
        raw = getattr(self, name)
        if not isinstance(raw, dict) or set(raw) != {"skew", "lo", "hi"}:
            raise ConfigurationError(f"{name}: expected an object with keys skew, lo, hi (got {raw!r})")
        try:
            return BoundedGumbelSpec(raw["skew"], float(raw["lo"]), float(raw["hi"]))
        except (ConfigurationError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"{name}: {exc}") from None

    # ------------------------------------------------------------- derived

    @property
    def researcher_quality_spec(self) -> BoundedGumbelSpec:
        return self._gumbel_spec("researcher_quality")

    @property
    def journal_quality_spec(self) -> BoundedGumbelSpec:
        return self._gumbel_spec("journal_quality")

    @property
    def writing_days_spec(self) -> BoundedGumbelSpec:
        return self._gumbel_spec("writing_days")

    @property
    def rampup_days(self) -> int:
        return self.rampup_years * DAYS_PER_YEAR

    @property
    def run_days(self) -> int:
        return self.run_years * DAYS_PER_YEAR

    @property
    def wait_days(self) -> float:
        return self.n_wait_years * DAYS_PER_YEAR

    # ------------------------------------------------------------ (de)serialize

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SimConfig:
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> SimConfig:
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def with_overrides(self, overrides: list[str] | dict[str, Any]) -> SimConfig:
        """Return a copy with ``key=value`` overrides applied.

        Values are parsed as JSON when possible, so ``run_years=3`` is an int and
        ``scenario=daa`` stays a string. Dotted keys reach into Gumbel specs.
        """
        data = self.to_dict()
        items = overrides.items() if isinstance(overrides, dict) else (_split(o) for o in overrides)
        for key, value in items:
            head, _, tail = key.partition(".")
            if head not in data:
                raise ConfigurationError(f"unknown config key {head!r}")
            if tail:
                if not isinstance(data[head], dict) or tail not in data[head]:
                    raise ConfigurationError(f"unknown config key {key!r}")
                data[head] = {**data[head], tail: value}
            else:
                data[head] = value
        return SimConfig.from_dict(data)

    @classmethod
    def desk(cls, **overrides: Any) -> SimConfig:
        """Scaled-down configuration that runs in well under a minute."""
        base = dict(n_researchers=1250, n_journals=10, rampup_years=5, run_years=15)
        base.update(overrides)
        return cls(**base)


def _split(item: str) -> tuple[str, Any]:
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ConfigurationError(f"override must look like key=value, got {item!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value
