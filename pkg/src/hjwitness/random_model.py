"""Seeded G(n, p) sampling, clique-count closed forms and their Monte Carlo checks.

Randomness
----------
Every random stream is numpy's PCG64 seeded through
``SeedSequence(entropy=seed, spawn_key=key)``. The root stream of a seed has
``key == ()``; trial ``i`` of a Monte Carlo run uses ``key == (i,)``, which is
exactly ``SeedSequence(seed).spawn(...)[i]``. Both algorithms are fixed by
numpy and platform independent, so a (seed, key) pair always yields the same
graph.

G(n, p) draws one uniform double per pair, pairs taken in lexicographic order
``(0,1), (0,2), ..., (n-2,n-1)``; the pair is an edge iff the draw is ``< p``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .cliques import count_cliques, has_clique
from .graphs import UGraph

SEED_BITS = 64


class ClampedProbabilityWarning(UserWarning):
    pass


def substream(seed: int, *key: int) -> np.random.Generator:
    if not 0 <= seed < 1 << SEED_BITS:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def paper_probability(n: int, k: int) -> float:
    """``min(1, 20 * n**(-2/k))``; warns when the clamp is active."""
    p = 20.0 * n ** (-2.0 / k)
    if p > 1.0:
        warnings.warn(f"20*n^(-2/k) = {p:.6g} exceeds 1 for n={n}, k={k}; clamped to 1",
                      ClampedProbabilityWarning, stacklevel=2)
        return 1.0
    return p


@dataclass(frozen=True)
class ParamSet:
    n: int
    k: int
    p: float
    seed: int
    mode: str = "free"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < 1 << SEED_BITS:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode not in ("free", "paper"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def paper(cls, n: int, k: int, seed: int) -> "ParamSet":
        """Parameters with the edge probability ``min(1, 20 n^(-2/k))``; ``n`` must be a multiple of ``2k``."""
        if k < 1:
            raise ValueError("k must be at least 1")
        if n % (2 * k):
            raise ValueError(f"n={n} is not a multiple of 2k={2 * k}")
        return cls(n, k, paper_probability(n, k), seed, mode="paper")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ParamSet":
        allowed = {"n", "k", "p", "seed", "mode"}
        extra = set(data) - allowed
        if extra:
            raise ValueError(f"unknown ParamSet fields: {sorted(extra)}")
        return cls(int(data["n"]), int(data["k"]), float(data["p"]), int(data["seed"]), data.get("mode", "free"))


def gnp_from_rng(n: int, p: float, rng: np.random.Generator) -> UGraph:
    if n <= 1:
        return UGraph._trusted(n, (0,) * n)
    iu, ju = np.triu_indices(n, k=1)
    hits = rng.random(iu.size) < p
    a = np.zeros((n, n), dtype=bool)
    a[iu[hits], ju[hits]] = True
    a |= a.T
    packed = np.packbits(a, axis=1, bitorder="little")
    return UGraph._trusted(n, tuple(int.from_bytes(row.tobytes(), "little") for row in packed))


def sample_gnp(params: ParamSet, key: tuple[int, ...] = ()) -> UGraph:
    """G(n, p) from the substream ``key`` of ``params.seed`` (root stream by default)."""
    return gnp_from_rng(params.n, params.p, substream(params.seed, *key))


def _comb_times_power(c: int, p: float, e: int) -> float:
    if e == 0:
        return float(c)
    if p == 0.0 or c == 0:
        return 0.0
    if c < 1 << 1000:
        return float(c) * p ** e
    return math.exp(math.log(c) + e * math.log(p))


def expected_clique_count(n: int, r: int, p: float) -> float:
    """``C(n, r) * p**C(r, 2)``: expected number of ``r``-cliques in G(n, p)."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return _comb_times_power(math.comb(n, r), p, math.comb(r, 2))


def mu(u: int, k: int, p: float) -> float:
    """Expected number of ``k``-cliques inside a fixed ``u``-vertex subset."""
    if not 1 <= k <= u:
        raise ValueError(f"need 1 <= k <= u, got k={k}, u={u}")
    return _comb_times_power(math.comb(u, k), p, math.comb(k, 2))


def overlap_pair_coefficient(u: int, k: int, i: int) -> int:
    """Ordered pairs ``(S, T)`` of ``k``-subsets of a ``u``-set with ``|S & T| == i``."""
    return math.comb(u, i) * math.comb(u - i, k - i) * math.comb(u - k, k - i)


def count_overlap_pairs(u: int, k: int, i: int) -> int:
    """Brute-force count of the same pairs, by enumeration."""
    subsets = [frozenset(s) for s in combinations(range(u), k)]
    return sum(1 for s in subsets for t in subsets if len(s & t) == i)


def delta(u: int, k: int, p: float) -> float:
    """Sum of ``P[B_S and B_T]`` over ordered pairs of ``k``-subsets sharing 2..k-1 vertices."""
    if not 2 <= k <= u:
        raise ValueError(f"need 2 <= k <= u, got k={k}, u={u}")
    e_pair = 2 * math.comb(k, 2)
    return math.fsum(
        _comb_times_power(overlap_pair_coefficient(u, k, i), p, e_pair - math.comb(i, 2))
        for i in range(2, k)
    )


def janson_upper_bound(mu_: float, delta_: float) -> float:
    """``exp(-mu + delta/2)``. Values at or above 1 say nothing."""
    if mu_ < 0 or delta_ < 0:
        raise ValueError("mu and delta must be non-negative")
    return math.exp(-mu_ + delta_ / 2.0)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "trials": self.trials,
                "seed": self.seed, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "MCEstimate":
        extra = set(data) - {"mean", "stderr", "trials", "seed", "params", "schema"}
        if extra:
            raise ValueError(f"unknown estimate fields: {sorted(extra)}")
        return cls(float(data["mean"]), float(data["stderr"]), int(data["trials"]),
                   int(data["seed"]), dict(data.get("params", {})))


def _run_chunk(fn: Callable[[np.random.Generator], float], seed: int, lo: int, hi: int) -> list[float]:
    return [fn(substream(seed, i)) for i in range(lo, hi)]


def _trial_values(fn, seed: int, trials: int, workers: int) -> list[float]:
    if workers <= 1 or trials < 2 * workers:
        return _run_chunk(fn, seed, 0, trials)
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, fn, seed, int(lo), int(hi))
                   for lo, hi in zip(bounds[:-1], bounds[1:])]
        values: list[float] = []
        for f in futures:  # trial order, whatever the completion order
            values.extend(f.result())
    return values


class _CliqueCounter:
    def __init__(self, n: int, p: float, r: int) -> None:
        self.n, self.p, self.r = n, p, r

    def __call__(self, rng: np.random.Generator) -> float:
        return float(count_cliques(gnp_from_rng(self.n, self.p, rng), self.r))


class _CliqueFree:
    def __init__(self, u: int, p: float, k: int) -> None:
        self.u, self.p, self.k = u, p, k

    def __call__(self, rng: np.random.Generator) -> float:
        return 0.0 if has_clique(gnp_from_rng(self.u, self.p, rng), self.k) else 1.0


def mc_clique_count(params: ParamSet, r: int, trials: int, workers: int = 1) -> MCEstimate:
    """Mean and standard error of the ``r``-clique count over ``trials`` samples of G(n, p)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 1 <= r <= params.n:
        raise ValueError("need 1 <= r <= n")
    values = _trial_values(_CliqueCounter(params.n, params.p, r), params.seed, trials, workers)
    mean = math.fsum(values) / trials
    if trials > 1:
        var = math.fsum((x - mean) ** 2 for x in values) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return MCEstimate(mean, stderr, trials, params.seed,
                      {"n": params.n, "p": params.p, "r": r, "kind": "clique-count"})


def mc_no_clique_probability(u: int, k: int, p: float, trials: int, seed: int, workers: int = 1) -> MCEstimate:
    """Frequency of ``k``-clique-free samples of G(u, p), with binomial standard error."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 1 <= k <= u:
        raise ValueError("need 1 <= k <= u")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    values = _trial_values(_CliqueFree(u, p, k), seed, trials, workers)
    freq = math.fsum(values) / trials
    stderr = math.sqrt(freq * (1.0 - freq) / trials)
    return MCEstimate(freq, stderr, trials, seed,
                      {"u": u, "k": k, "p": p, "kind": "no-clique-prob"})
