"""Exhaustive search for small layered witness digraphs.

Candidates have ``t`` layers of ``k`` consecutive vertices; every pair of
vertices in different layers is either an arc from the lower layer to the
higher one or absent. For each ``t`` the ``2**P`` arc subsets (``P`` cross
pairs) are tried in increasing bitmask order, so the first witness found is
the smallest by vertex count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cliques import max_stable_set
from .graphs import LayeredDigraph, Layering
from .verifier import HOLDS_EXHAUSTIVE, INCONCLUSIVE, verify_exhaustive


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "none-found" | "budget-exhausted"
    witness: LayeredDigraph | None
    examined: int
    coverage: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .io import SCHEMA, layered_to_dict

        return {
            "schema": SCHEMA,
            "status": self.status,
            "examined": self.examined,
            "coverage": [dict(c) for c in self.coverage],
            "witness": None if self.witness is None else layered_to_dict(self.witness),
        }


def _cross_pairs(t: int, k: int) -> list[tuple[int, int]]:
    return [(i * k + a, j * k + b) for i in range(t) for j in range(i + 1, t)
            for a in range(k) for b in range(k)]


def search_small(k: int, max_n: int, budget: int, verify_budget: int | None = 100_000) -> SearchResult:
    """Smallest layered digraph on at most ``max_n`` vertices passing the exhaustive check.

    ``budget`` caps the number of candidate digraphs examined.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if budget <= 0:
        return SearchResult("none-found", None, 0, [])
    examined = 0
    coverage: list[dict] = []
    for t in range(1, max_n // k + 1):
        pairs = _cross_pairs(t, k)
        total = 1 << len(pairs)
        layering = Layering(tuple(tuple(range(i * k, i * k + k)) for i in range(t)), k)
        row = {"t": t, "n": t * k, "total": total, "examined": 0, "inconclusive": 0}
        coverage.append(row)
        for bits in range(total):
            if examined >= budget:
                return SearchResult("budget-exhausted", None, examined, coverage)
            examined += 1
            row["examined"] += 1
            arcs = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
            d = LayeredDigraph(t * k, layering, arcs)
            dg, _ = d.to_digraph()
            if len(max_stable_set(dg)) != k:
                continue
            verdict = verify_exhaustive(d, k, budget=verify_budget)
            if verdict.outcome == HOLDS_EXHAUSTIVE:
                return SearchResult("found", d, examined, coverage)
            if verdict.outcome == INCONCLUSIVE:
                row["inconclusive"] += 1
    if not coverage:
        return SearchResult("none-found", None, examined, coverage)
    status = "none-found" if all(r["inconclusive"] == 0 for r in coverage) else "budget-exhausted"
    return SearchResult(status, None, examined, coverage)
