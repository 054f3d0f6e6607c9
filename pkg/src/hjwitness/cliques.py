"""Exact clique kernels on bitmask graphs.

The maximum-clique search is a branch and bound in the style of Tomita's
MCQ: candidates are greedily coloured and a branch is cut when the clique
so far plus the colour count cannot beat the incumbent. Vertices are
relabelled by a degeneracy order first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import Digraph, LayeredDigraph, Layering, UGraph, as_digraph, induced_subgraph, iter_bits, mask_of

DEFAULT_ENUM_LIMIT = 10**7
# Existence queries up to this size use plain DFS instead of branch and bound.
SMALL_CLIQUE = 4


class BudgetExceeded(RuntimeError):
    """An exact search ran out of its node budget. The search is never approximate."""


class CliqueLimitExceeded(RuntimeError):
    """Clique enumeration hit its result cap where a complete list was required."""


@dataclass(frozen=True)
class CliqueEnumeration:
    cliques: list[tuple[int, ...]]
    truncated: bool

    def __len__(self) -> int:
        return len(self.cliques)

    def require_complete(self) -> list[tuple[int, ...]]:
        if self.truncated:
            raise CliqueLimitExceeded(f"enumeration truncated at {len(self.cliques)} cliques")
        return self.cliques


def enumerate_cliques(g: UGraph, r: int, limit: int | None = DEFAULT_ENUM_LIMIT) -> CliqueEnumeration:
    """All ``r``-cliques of ``g`` as sorted tuples, in lexicographic order."""
    if r < 1:
        raise ValueError("clique size must be at least 1")
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    adj = g.adj
    out: list[tuple[int, ...]] = []
    cap = limit if limit is not None else -1

    def rec(prefix: list[int], cand: int) -> bool:
        need = r - len(prefix)
        if need == 0:
            if len(out) == cap:
                return False
            out.append(tuple(prefix))
            return True
        if cand.bit_count() < need:
            return True
        for v in iter_bits(cand):
            prefix.append(v)
            ok = rec(prefix, cand & adj[v] & ~((2 << v) - 1))
            prefix.pop()
            if not ok:
                return False
        return True

    complete = rec([], (1 << g.n) - 1)
    return CliqueEnumeration(out, not complete)


def count_cliques(g: UGraph, r: int) -> int:
    """Number of ``r``-cliques, without materialising them."""
    if r < 1:
        raise ValueError("clique size must be at least 1")
    adj = g.adj
    if r == 1:
        return g.n
    if r == 2:
        return g.m

    def rec(cand: int, need: int) -> int:
        if need == 1:
            return cand.bit_count()
        total = 0
        for v in iter_bits(cand):
            nxt = cand & adj[v] & ~((2 << v) - 1)
            if nxt.bit_count() >= need - 1:
                total += rec(nxt, need - 1)
        return total

    return rec((1 << g.n) - 1, r)


def _degeneracy_order(adj: Sequence[int], mask: int) -> list[int]:
    """Vertices of ``mask`` in smallest-last order, highest core first."""
    deg = {v: (adj[v] & mask).bit_count() for v in iter_bits(mask)}
    remaining = mask
    removed: list[int] = []
    while remaining:
        v = min(iter_bits(remaining), key=lambda x: (deg[x], x))
        removed.append(v)
        remaining &= ~(1 << v)
        for u in iter_bits(adj[v] & remaining):
            deg[u] -= 1
    removed.reverse()
    return removed


class _Found(Exception):
    pass


def _max_clique(
    adj: Sequence[int],
    mask: int,
    floor: int = 0,
    stop_at: int | None = None,
    budget: int | None = None,
) -> list[int] | None:
    """Largest clique inside ``mask`` that is bigger than ``floor``.

    Returns ``None`` when no clique exceeds ``floor``. Stops early once a clique
    of size ``stop_at`` is found.
    """
    order = _degeneracy_order(adj, mask)
    pos = {v: i for i, v in enumerate(order)}
    # Local adjacency in the new labelling; bit i means order[i].
    local = [mask_of(pos[u] for u in iter_bits(adj[v] & mask)) for v in order]
    best: list[int] = []
    best_size = floor
    nodes = 0

    def colour(p: int) -> list[tuple[int, int]]:
        out = []
        c = 0
        while p:
            c += 1
            avail = p
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~local[v] & ~low
                p &= ~low
                out.append((v, c))
        return out

    def expand(r: list[int], p: int) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"clique search exceeded {budget} nodes")
        for v, c in reversed(colour(p)):
            if len(r) + c <= best_size:
                return
            r.append(v)
            np_ = p & local[v]
            if np_:
                expand(r, np_)
            elif len(r) > best_size:
                best = list(r)
                best_size = len(r)
                if stop_at is not None and best_size >= stop_at:
                    raise _Found
            r.pop()
            p &= ~(1 << v)

    if mask:
        try:
            expand([], (1 << len(order)) - 1)
        except _Found:
            pass
    if not best:
        return None
    return sorted(order[i] for i in best)


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: tuple[int, ...]


def clique_number(g: UGraph, budget: int | None = None) -> CliqueResult:
    """Exact clique number with one maximum clique as witness.

    Raises :class:`BudgetExceeded` if ``budget`` search nodes do not suffice.
    """
    best = _max_clique(g.adj, (1 << g.n) - 1, budget=budget)
    if best is None:
        return CliqueResult(0, ())
    return CliqueResult(len(best), tuple(best))


def find_clique(g: UGraph, r: int, mask: int | None = None, budget: int | None = None) -> tuple[int, ...] | None:
    """Some ``r``-clique inside ``mask`` (default: all vertices), or ``None``."""
    if r <= 0:
        return ()
    if mask is None:
        mask = (1 << g.n) - 1
    if r <= SMALL_CLIQUE:
        return _first_clique(g.adj, mask, r)
    best = _max_clique(g.adj, mask, floor=r - 1, stop_at=r, budget=budget)
    if best is None:
        return None
    # A leaf may overshoot r; any r of its vertices still form a clique.
    return tuple(best[:r])


def _first_clique(adj: Sequence[int], mask: int, r: int) -> tuple[int, ...] | None:
    """Lexicographically first ``r``-clique inside ``mask`` by plain DFS."""

    def rec(prefix: list[int], cand: int) -> tuple[int, ...] | None:
        need = r - len(prefix)
        if need == 0:
            return tuple(prefix)
        if cand.bit_count() < need:
            return None
        for v in iter_bits(cand):
            prefix.append(v)
            hit = rec(prefix, cand & adj[v] & ~((2 << v) - 1))
            prefix.pop()
            if hit is not None:
                return hit
        return None

    return rec([], mask)


def has_clique(g: UGraph, r: int, mask: int | None = None, budget: int | None = None) -> bool:
    return find_clique(g, r, mask, budget) is not None


def _stable_adjacency(d: Digraph) -> tuple[int, ...]:
    """Adjacency of the graph whose cliques are the stable sets of ``d``."""
    full = (1 << d.n) - 1
    return tuple(full & ~c & ~(1 << v) for v, c in enumerate(d.conflict_masks()))


def max_stable_set(d: Digraph, mask: int | None = None, budget: int | None = None) -> tuple[int, ...]:
    if mask is None:
        mask = (1 << d.n) - 1
    best = _max_clique(_stable_adjacency(d), mask, budget=budget)
    return tuple(best) if best else ()


def find_stable_set(d: Digraph, size: int, mask: int | None = None, budget: int | None = None) -> tuple[int, ...] | None:
    if size <= 0:
        return ()
    if mask is None:
        mask = (1 << d.n) - 1
    best = _max_clique(_stable_adjacency(d), mask, floor=size - 1, stop_at=size, budget=budget)
    return tuple(best[:size]) if best else None


def stability_number(d: Digraph | LayeredDigraph, budget: int | None = None) -> CliqueResult:
    """Exact stability number; the witness is given in the input's vertex ids."""
    dg, labels = as_digraph(d)
    best = max_stable_set(dg, budget=budget)
    return CliqueResult(len(best), tuple(labels[v] for v in best))


def greedy_disjoint_cliques(g: UGraph, k: int) -> Layering:
    """Repeatedly remove the lexicographically smallest ``k``-clique of what remains.

    The residual graph has no ``k``-clique on return.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    alive = (1 << g.n) - 1
    layers: list[tuple[int, ...]] = []
    # A clique in the shrinking residual never starts below the previous
    # smallest start, so the scan resumes from there.
    start = 0
    while True:
        found = _first_clique(g.adj, alive >> start << start, k)
        if found is None:
            break
        layers.append(found)
        start = found[0]
        alive &= ~mask_of(found)
    return Layering(tuple(layers), k)


def hitting_vertices(cliques: Iterable[Sequence[int]]) -> list[int]:
    """Greedy max-coverage hitting set; ties go to the smallest vertex."""
    rows = [tuple(c) for c in cliques]
    if not rows:
        return []
    widths = {len(c) for c in rows}
    chosen: list[int] = []
    if len(widths) == 1:
        arr = np.asarray(rows, dtype=np.int32)
        size = int(arr.max()) + 1
        while len(arr):
            # argmax returns the first maximum, i.e. the smallest vertex on ties.
            v = int(np.argmax(np.bincount(arr.ravel(), minlength=size)))
            chosen.append(v)
            arr = arr[~(arr == v).any(axis=1)]
    else:
        remaining = [set(c) for c in rows]
        while remaining:
            counts: dict[int, int] = {}
            for c in remaining:
                for v in c:
                    counts[v] = counts.get(v, 0) + 1
            v = min(counts, key=lambda x: (-counts[x], x))
            chosen.append(v)
            remaining = [c for c in remaining if v not in c]
    return sorted(chosen)


@dataclass(frozen=True)
class SubsetCertificate:
    verdict: str  # "certified-failure" | "no-counterexample-found"
    witness: tuple[int, ...] | None
    trials_run: int


def subset_clique_certificate(g: UGraph, u: int, k: int, trials: int, seed: int) -> SubsetCertificate:
    """Randomised search for a ``u``-subset with no ``k``-clique.

    A miss is not a proof that every ``u``-subset contains a ``k``-clique.
    """
    from .random_model import substream

    if not 0 <= u <= g.n:
        raise ValueError("subset size must lie in 0..n")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = substream(seed)
    for i in range(trials):
        s = np.sort(rng.choice(g.n, size=u, replace=False))
        if not has_clique(g, k, mask_of(int(v) for v in s)):
            return SubsetCertificate("certified-failure", tuple(int(v) for v in s), i + 1)
    return SubsetCertificate("no-counterexample-found", None, trials)


def clique_number_of_subset(g: UGraph, vertices: Iterable[int], budget: int | None = None) -> CliqueResult:
    sub, labels = induced_subgraph(g, vertices)
    res = clique_number(sub, budget=budget)
    return CliqueResult(res.size, tuple(labels[v] for v in res.witness))
