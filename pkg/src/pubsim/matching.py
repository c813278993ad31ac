"""Many-to-one stable matching of papers to journals with capacities.

Journals propose (hospital-proposing deferred acceptance), which yields the
journal-optimal stable matching. Preference lists must be strict; a pair is
acceptable only if each side lists the other.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field

from pubsim.errors import MatchingError


@dataclass
class MatchingInstance:
    paper_prefs: Mapping[Hashable, Sequence[Hashable]]
    journal_prefs: Mapping[Hashable, Sequence[Hashable]]
    capacities: Mapping[Hashable, int]

    def validate(self) -> None:
        papers = self.paper_prefs.keys()
        journals = self.journal_prefs.keys()
        if set(self.capacities) != set(journals):
            raise MatchingError("capacities must be given for exactly the journals with preference lists")
        for j, cap in self.capacities.items():
            if int(cap) != cap or cap < 0:
                raise MatchingError(f"capacity of journal {j!r} must be a non-negative integer")
        for p, prefs in self.paper_prefs.items():
            if len(set(prefs)) != len(prefs):
                raise MatchingError(f"paper {p!r} lists a journal twice")
            unknown = [j for j in prefs if j not in journals]
            if unknown:
                raise MatchingError(f"paper {p!r} ranks unknown journals {unknown!r}")
        for j, prefs in self.journal_prefs.items():
            if len(set(prefs)) != len(prefs):
                raise MatchingError(f"journal {j!r} lists a paper twice")
            unknown = [p for p in prefs if p not in papers]
            if unknown:
                raise MatchingError(f"journal {j!r} ranks unknown papers {unknown!r}")


@dataclass
class MatchingResult:
    assignment: dict[Hashable, Hashable] = field(default_factory=dict)

    def assignees(self, journal: Hashable) -> list[Hashable]:
        return [p for p, j in self.assignment.items() if j == journal]


def _ranks(prefs: Mapping[Hashable, Sequence[Hashable]]) -> dict[Hashable, dict[Hashable, int]]:
    return {owner: {item: i for i, item in enumerate(lst)} for owner, lst in prefs.items()}


def solve_journal_optimal(instance: MatchingInstance) -> MatchingResult:
    instance.validate()
    paper_rank = _ranks(instance.paper_prefs)
    held: dict[Hashable, Hashable] = {}
    free = {j: int(c) for j, c in instance.capacities.items()}
    cursor = dict.fromkeys(instance.journal_prefs, 0)
    queue = deque(j for j in instance.journal_prefs if free[j] > 0)
    queued = set(queue)

    while queue:
        j = queue.popleft()
        queued.discard(j)
        prefs = instance.journal_prefs[j]
        while free[j] > 0 and cursor[j] < len(prefs):
            p = prefs[cursor[j]]
            cursor[j] += 1
            ranks = paper_rank[p]
            mine = ranks.get(j)
            if mine is None:
                continue
            current = held.get(p)
            if current is None:
                held[p] = j
                free[j] -= 1
            elif mine < ranks[current]:
                held[p] = j
                free[j] -= 1
                free[current] += 1
                if current not in queued:
                    queue.append(current)
                    queued.add(current)
    return MatchingResult(held)


def check_stability(instance: MatchingInstance, result: MatchingResult) -> list[tuple[Hashable, Hashable]]:
    """All blocking pairs of ``result``; an empty list certifies stability."""
    paper_rank = _ranks(instance.paper_prefs)
    journal_rank = _ranks(instance.journal_prefs)
    members: dict[Hashable, list[Hashable]] = {j: [] for j in instance.journal_prefs}
    for p, j in result.assignment.items():
        members[j].append(p)

    blocking = []
    for p, prefs in instance.paper_prefs.items():
        current = result.assignment.get(p)
        limit = paper_rank[p][current] if current is not None else len(prefs)
        for j in prefs[:limit]:
            j_rank = journal_rank[j]
            if p not in j_rank:
                continue
            if len(members[j]) < instance.capacities[j]:
                blocking.append((p, j))
            elif any(j_rank[p] < j_rank[q] for q in members[j]):
                blocking.append((p, j))
    return blocking


def serial_dictatorship(
    order: Sequence[Hashable],
    paper_prefs: Mapping[Hashable, Sequence[Hashable]],
    capacities: Mapping[Hashable, int],
) -> MatchingResult:
    """Papers pick in ``order``, each taking its favourite journal with room left."""
    room = dict(capacities)
    out = {}
    for p in order:
        for j in paper_prefs[p]:
            if room.get(j, 0) > 0:
                room[j] -= 1
                out[p] = j
                break
    return MatchingResult(out)
