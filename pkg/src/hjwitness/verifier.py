"""Path partitions and checks of the path-deletion stability property.

A digraph ``D`` has the property for ``k`` when its stability number is
``k`` and removing the vertices of any ``k - 1`` directed paths still leaves a
stable set of size ``k``. Paths may overlap and single vertices count as
paths, unless ``disjoint=True`` is requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

import numpy as np

from .cliques import BudgetExceeded, find_stable_set, max_stable_set
from .graphs import Digraph, LayeredDigraph, as_digraph, is_directed_path, iter_bits, mask_of

HOLDS_EXHAUSTIVE = "holds-exhaustive"
HOLDS_NO_COUNTEREXAMPLE = "holds-no-counterexample"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PathPartition:
    """Vertex-disjoint directed paths covering the host digraph.

    ``stable_witness`` is a stable set of the host with exactly as many
    vertices as there are paths, so it certifies ``len(paths) <= alpha``.
    """

    paths: tuple[tuple[int, ...], ...]
    stable_witness: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.paths)


def validate_partition(d: Digraph, paths: Sequence[Sequence[int]]) -> bool:
    covered = [v for p in paths for v in p]
    if sorted(covered) != list(range(d.n)):
        return False
    return all(is_directed_path(d, p) for p in paths)


def _reduce(d: Digraph, paths: list[list[int]]) -> list[list[int]] | tuple[int, ...]:
    """One fewer path with starts drawn from the old starts, or a stable set of the current size.

    Iterative form of the inductive step: peel the start ``a`` of a path whose
    start has an arc to another start ``b``, recurse on the rest, then put
    ``a`` back in front of ``b`` or of its old successor, whichever still
    starts a path.
    """
    stack: list[tuple[int, int, int]] = []
    paths = [list(p) for p in paths]
    while True:
        starts = sorted(p[0] for p in paths)
        start_mask = mask_of(starts)
        pair = None
        for a in starts:
            hits = d.out[a] & start_mask
            if hits:
                pair = (a, (hits & -hits).bit_length() - 1)
                break
        if pair is None:
            return tuple(starts)
        a, b = pair
        ia = next(i for i, p in enumerate(paths) if p[0] == a)
        if len(paths[ia]) == 1:
            ib = next(i for i, p in enumerate(paths) if p[0] == b)
            paths[ib].insert(0, a)
            del paths[ia]
            break
        stack.append((a, paths[ia][1], b))
        paths[ia] = paths[ia][1:]
    while stack:
        a, succ, b = stack.pop()
        by_start = {p[0]: p for p in paths}
        target = by_start.get(succ) or by_start.get(b)
        assert target is not None, "path reduction lost both reinsertion points"
        target.insert(0, a)
    return paths


def gallai_milgram_partition(d: Digraph) -> PathPartition:
    """Partition ``d`` into at most ``alpha(d)`` directed paths.

    Starts from singletons and applies the reduction until the path starts are
    stable or the reduction exposes a stable set as large as the partition.
    Neither stopping rule computes ``alpha``.
    """
    paths: list[list[int]] = [[v] for v in range(d.n)]
    while True:
        res = _reduce(d, paths)
        if isinstance(res, tuple):
            witness = res
            break
        paths = res
    ordered = tuple(sorted(tuple(p) for p in paths))
    return PathPartition(ordered, witness)


def check_layer_path_property(d: LayeredDigraph) -> tuple[bool, tuple[int, int] | None]:
    """Every arc goes to a strictly higher layer; otherwise the first offending arc."""
    layer_of = d.layer_of()
    for u, v in d.sorted_arcs():
        if u not in layer_of or v not in layer_of or layer_of[u] >= layer_of[v]:
            return False, (u, v)
    return True, None


def lower_bound_remaining(d: LayeredDigraph, k: int) -> int:
    """Vertices guaranteed to survive deleting ``k - 1`` paths, each path meeting a layer at most once."""
    if any(len(layer) != k for layer in d.layers):
        raise ValueError("every layer must have exactly k vertices")
    return len(d.vertices()) - (k - 1) * d.layering.t


def iter_paths(d: Digraph) -> Iterator[tuple[int, ...]]:
    """Every directed path (vertex sequence), in DFS order from each start vertex."""
    def rec(path: list[int], used: int) -> Iterator[tuple[int, ...]]:
        yield tuple(path)
        for w in iter_bits(d.out[path[-1]] & ~used):
            path.append(w)
            yield from rec(path, used | 1 << w)
            path.pop()

    for v in range(d.n):
        yield from rec([v], 1 << v)


def maximal_paths(d: Digraph) -> list[tuple[int, ...]]:
    """Paths extendable at neither end."""
    out = []
    for path in iter_paths(d):
        used = mask_of(path)
        if d.out[path[-1]] & ~used or d.inn[path[0]] & ~used:
            continue
        out.append(path)
    return out


def _dominant_paths(paths: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], int]]:
    """One representative path per vertex set, dropping sets strictly inside another."""
    by_mask: dict[int, tuple[int, ...]] = {}
    for p in paths:
        by_mask.setdefault(mask_of(p), p)
    masks = sorted(by_mask, key=lambda m: (-m.bit_count(), m))
    kept: list[int] = []
    for m in masks:
        if not any(m & big == m for big in kept):
            kept.append(m)
    kept.sort(key=lambda m: by_mask[m])
    return [(by_mask[m], m) for m in kept]


@dataclass(frozen=True)
class Counterexample:
    paths: tuple[tuple[int, ...], ...]
    remaining: tuple[int, ...]
    remaining_stability: int
    stable_witness: tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    outcome: str
    k: int
    method: str
    budget: int | None
    work: int
    alpha: int | None
    counterexample: Counterexample | None = None
    reason: str = ""
    disjoint: bool = False

    @property
    def holds(self) -> bool:
        return self.outcome in (HOLDS_EXHAUSTIVE, HOLDS_NO_COUNTEREXAMPLE)


def _relabel_cx(cx: Counterexample, labels: list[int]) -> Counterexample:
    lab = labels.__getitem__
    return Counterexample(
        tuple(tuple(map(lab, p)) for p in cx.paths),
        tuple(map(lab, cx.remaining)),
        cx.remaining_stability,
        tuple(map(lab, cx.stable_witness)),
    )


def _deficiency(d: Digraph, paths: Sequence[Sequence[int]], k: int) -> Counterexample | None:
    """Counterexample if deleting ``paths`` leaves no stable ``k``-set."""
    full = (1 << d.n) - 1
    rest = full & ~mask_of(v for p in paths for v in p)
    if find_stable_set(d, k, rest) is not None:
        return None
    best = max_stable_set(d, rest)
    return Counterexample(tuple(tuple(p) for p in paths), tuple(iter_bits(rest)), len(best), best)


def _alpha_precheck(d: Digraph, k: int, method: str, budget: int | None) -> tuple[int, Verdict | None]:
    alpha_set = max_stable_set(d)
    alpha = len(alpha_set)
    if alpha == k:
        return alpha, None
    cx = Counterexample((), tuple(range(d.n)), alpha, alpha_set)
    reason = f"stability number is {alpha}, not {k}"
    return alpha, Verdict(FAILS, k, method, budget, 0, alpha, cx, reason)


def verify_exhaustive(
    d: Digraph | LayeredDigraph,
    k: int,
    budget: int | None = None,
    disjoint: bool = False,
) -> Verdict:
    """Check every choice of ``k - 1`` paths.

    Without ``disjoint`` only maximal paths are tried: any path lies inside a
    maximal one and deleting more vertices never raises the stability number.
    ``budget`` caps the number of deletion sets examined; running out gives
    ``inconclusive``, never a pass.
    """
    dg, labels = as_digraph(d)
    method = "exhaustive-disjoint" if disjoint else "exhaustive-maximal"
    alpha, early = _alpha_precheck(dg, k, method, budget)
    if early is not None:
        return Verdict(early.outcome, k, method, budget, 0, alpha,
                       _relabel_cx(early.counterexample, labels), early.reason, disjoint)
    if k == 1:
        return Verdict(HOLDS_EXHAUSTIVE, k, method, budget, 0, alpha, disjoint=disjoint)

    work = 0
    if disjoint:
        tuples = _disjoint_tuples(dg, k - 1)
    else:
        cands = _dominant_paths(maximal_paths(dg))
        tuples = (tuple(c[0] for c in combo) for combo in combinations_with_replacement(cands, k - 1))
    for combo in tuples:
        if budget is not None and work >= budget:
            return Verdict(INCONCLUSIVE, k, method, budget, work, alpha,
                           reason=f"budget of {budget} deletion sets exhausted", disjoint=disjoint)
        work += 1
        cx = _deficiency(dg, combo, k)
        if cx is not None:
            return Verdict(FAILS, k, method, budget, work, alpha, _relabel_cx(cx, labels),
                           "deleting these paths leaves no stable set of size k", disjoint)
    return Verdict(HOLDS_EXHAUSTIVE, k, method, budget, work, alpha, disjoint=disjoint)


def _disjoint_tuples(d: Digraph, size: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # Exactly `size` pairwise-disjoint paths, or fewer when the vertices run
    # out; fewer paths delete a subset of what some full tuple deletes.
    paths = sorted(iter_paths(d))
    masks = [mask_of(p) for p in paths]

    def rec(start: int, chosen: list[int], used: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if len(chosen) == size:
            yield tuple(paths[i] for i in chosen)
            return
        extended = False
        for i in range(start, len(paths)):
            if masks[i] & used:
                continue
            extended = True
            chosen.append(i)
            yield from rec(i + 1, chosen, used | masks[i])
            chosen.pop()
        if not extended:
            yield tuple(paths[i] for i in chosen)

    yield from rec(0, [], 0)


def _random_maximal_path(d: Digraph, rng: np.random.Generator, avoid: int = 0) -> tuple[int, ...]:
    free = ((1 << d.n) - 1) & ~avoid
    choices = list(iter_bits(free))
    v = choices[int(rng.integers(len(choices)))]
    path = [v]
    used = 1 << v
    while True:
        nxt = list(iter_bits(d.out[path[-1]] & free & ~used))
        if not nxt:
            break
        w = nxt[int(rng.integers(len(nxt)))]
        path.append(w)
        used |= 1 << w
    while True:
        prv = list(iter_bits(d.inn[path[0]] & free & ~used))
        if not prv:
            break
        w = prv[int(rng.integers(len(prv)))]
        path.insert(0, w)
        used |= 1 << w
    return tuple(path)


def _longest_sampled(d: Digraph, rng: np.random.Generator, avoid: int, tries: int) -> tuple[int, ...]:
    best: tuple[int, ...] = ()
    for _ in range(tries):
        p = _random_maximal_path(d, rng, avoid)
        if len(p) > len(best):
            best = p
    return best


def _stable_hitting_path(d: Digraph, rng: np.random.Generator, avoid: int, deleted: int, tries: int) -> tuple[int, ...]:
    # Prefer the sampled path meeting the current maximum stable set most often.
    target = mask_of(max_stable_set(d, ((1 << d.n) - 1) & ~deleted))
    best: tuple[int, ...] = ()
    score = -1
    for _ in range(tries):
        p = _random_maximal_path(d, rng, avoid)
        s = (mask_of(p) & target).bit_count() * d.n + len(p)
        if s > score:
            best, score = p, s
    return best


def verify_adversarial(
    d: Digraph | LayeredDigraph,
    k: int,
    budget: int,
    seed: int,
    disjoint: bool = False,
) -> Verdict:
    """Randomised search for ``k - 1`` paths whose removal destroys every stable ``k``-set.

    ``budget`` is the number of candidate path tuples tried. Each tuple is
    built by one of three rules in rotation: uniformly random maximal paths,
    the longest of several samples, and the sample covering most of a current
    maximum stable set. Never reports an exhaustive pass.
    """
    from .random_model import substream

    dg, labels = as_digraph(d)
    method = "adversarial"
    # Only a shortfall is fatal here: with alpha > k the deletion search is
    # still meaningful, and the verdict records alpha for the caller.
    alpha, early = _alpha_precheck(dg, k, method, budget)
    if early is not None and alpha < k:
        return Verdict(early.outcome, k, method, budget, 0, alpha,
                       _relabel_cx(early.counterexample, labels), early.reason, disjoint)
    if k == 1 or dg.n == 0:
        return Verdict(HOLDS_NO_COUNTEREXAMPLE, k, method, budget, 0, alpha, disjoint=disjoint)
    rng = substream(seed)
    tries = max(4, dg.n)
    for trial in range(budget):
        rule = trial % 3
        combo: list[tuple[int, ...]] = []
        used = 0
        for _ in range(k - 1):
            avoid = used if disjoint else 0
            if avoid == (1 << dg.n) - 1:
                break
            if rule == 0:
                p = _random_maximal_path(dg, rng, avoid)
            elif rule == 1:
                p = _longest_sampled(dg, rng, avoid, tries)
            else:
                p = _stable_hitting_path(dg, rng, avoid, used, tries)
            combo.append(p)
            used |= mask_of(p)
        cx = _deficiency(dg, combo, k)
        if cx is not None:
            return Verdict(FAILS, k, method, budget, trial + 1, alpha, _relabel_cx(cx, labels),
                           "deleting these paths leaves no stable set of size k", disjoint)
    return Verdict(HOLDS_NO_COUNTEREXAMPLE, k, method, budget, budget, alpha, disjoint=disjoint)


def recheck_counterexample(d: Digraph | LayeredDigraph, cx: Counterexample, k: int) -> bool:
    """Re-validate a failing verdict's evidence from scratch."""
    dg, labels = as_digraph(d)
    index = {v: i for i, v in enumerate(labels)}
    if not cx.paths:
        return len(max_stable_set(dg)) != k
    try:
        paths = [[index[v] for v in p] for p in cx.paths]
    except KeyError:
        return False
    if len(paths) > k - 1 or not all(is_directed_path(dg, p) for p in paths):
        return False
    rest = ((1 << dg.n) - 1) & ~mask_of(v for p in paths for v in p)
    return len(max_stable_set(dg, rest)) < k


__all__ = [
    "BudgetExceeded", "Counterexample", "FAILS", "HOLDS_EXHAUSTIVE", "HOLDS_NO_COUNTEREXAMPLE",
    "INCONCLUSIVE", "PathPartition", "Verdict", "check_layer_path_property",
    "gallai_milgram_partition", "iter_paths", "lower_bound_remaining", "maximal_paths",
    "recheck_counterexample", "validate_partition", "verify_adversarial", "verify_exhaustive",
]
