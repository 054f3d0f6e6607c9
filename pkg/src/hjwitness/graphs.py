"""Immutable graph and digraph types.

Vertices are the integers ``0..n-1``. Adjacency is held as one Python int
bitmask per vertex, so pair queries are a shift-and-test and neighbourhood
intersection is a single ``&``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _full(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class UGraph:
    """Simple undirected graph on ``0..n-1``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        full = _full(self.n)
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise ValueError(f"vertex {v} has a neighbour out of range")
            if nb >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency at ({v}, {u})")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> "UGraph":
        # Skips validation; only for adjacency built symmetric by construction.
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UGraph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "UGraph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "UGraph":
        full = _full(n)
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "UGraph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def m(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u, nb in enumerate(self.adj):
            for v in iter_bits(nb >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for a, b in combinations(vs, 2))


@dataclass(frozen=True)
class Digraph:
    """Directed graph without self-loops; antiparallel arcs are allowed."""

    n: int
    out: tuple[int, ...]
    inn: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.out) != self.n:
            raise ValueError("out-adjacency length must equal n")
        full = _full(self.n)
        inn = [0] * self.n
        for u, nb in enumerate(self.out):
            if nb & ~full:
                raise ValueError(f"vertex {u} has an out-neighbour out of range")
            if nb >> u & 1:
                raise ValueError(f"self-loop at {u}")
            for v in iter_bits(nb):
                inn[v] |= 1 << u
        object.__setattr__(self, "inn", tuple(inn))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            out[u] |= 1 << v
        return cls(n, tuple(out))

    @classmethod
    def directed_cycle(cls, n: int) -> "Digraph":
        return cls.from_arcs(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def transitive_tournament(cls, n: int) -> "Digraph":
        return cls.from_arcs(n, combinations(range(n), 2))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.out) for v in iter_bits(nb)]

    @property
    def arc_count(self) -> int:
        return sum(nb.bit_count() for nb in self.out)

    def conflict_masks(self) -> tuple[int, ...]:
        """Per-vertex mask of vertices joined to it by an arc in either direction."""
        return tuple(o | i for o, i in zip(self.out, self.inn))


@dataclass(frozen=True)
class Layering:
    """Ordered, pairwise-disjoint vertex sets of equal size ``k``."""

    layers: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for i, layer in enumerate(self.layers):
            if len(layer) != self.k:
                raise ValueError(f"layer {i} has {len(layer)} vertices, expected {self.k}")
            if seen.intersection(layer) or len(set(layer)) != len(layer):
                raise ValueError(f"layer {i} overlaps an earlier layer")
            seen.update(layer)

    @classmethod
    def of(cls, layers: Iterable[Iterable[int]], k: int) -> "Layering":
        return cls(tuple(tuple(sorted(layer)) for layer in layers), k)

    @property
    def t(self) -> int:
        return len(self.layers)

    def vertices(self) -> list[int]:
        return sorted(v for layer in self.layers for v in layer)

    def layer_of(self) -> dict[int, int]:
        """Vertex -> 1-based layer index."""
        return {v: i for i, layer in enumerate(self.layers, start=1) for v in layer}

    def check_against(self, g: UGraph) -> None:
        for i, layer in enumerate(self.layers, start=1):
            if any(not 0 <= v < g.n for v in layer):
                raise ValueError(f"layer {i} has a vertex outside the graph")
            if not g.is_clique(layer):
                raise ValueError(f"layer {i} is not a clique of the source graph")


@dataclass(frozen=True)
class LayeredDigraph:
    """Digraph on the union of a layering's vertex sets.

    Invariants against the source graph are enforced by
    :func:`build_layered_digraph`, not here, so files with defects can still
    be loaded and diagnosed.
    """

    n: int
    layering: Layering
    arcs: frozenset[tuple[int, int]]

    @property
    def k(self) -> int:
        return self.layering.k

    @property
    def layers(self) -> tuple[tuple[int, ...], ...]:
        return self.layering.layers

    def vertices(self) -> list[int]:
        return self.layering.vertices()

    def layer_of(self) -> dict[int, int]:
        return self.layering.layer_of()

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def to_digraph(self) -> tuple[Digraph, list[int]]:
        """Compact relabelling onto ``0..|V|-1``; returns the digraph and the labels."""
        labels = self.vertices()
        index = {v: i for i, v in enumerate(labels)}
        return Digraph.from_arcs(len(labels), ((index[u], index[v]) for u, v in self.arcs)), labels


def as_digraph(d: Digraph | LayeredDigraph) -> tuple[Digraph, list[int]]:
    if isinstance(d, LayeredDigraph):
        return d.to_digraph()
    return d, list(range(d.n))


def complement(g: UGraph) -> UGraph:
    full = _full(g.n)
    return UGraph._trusted(g.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(g.adj)))


def induced_subgraph(g: UGraph, s: Iterable[int]) -> tuple[UGraph, list[int]]:
    """Subgraph induced on ``s``, relabelled in ascending order of original id.

    Returns the subgraph and ``labels`` with ``labels[new] == old``.
    """
    labels = sorted(set(s))
    for v in labels:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    adj = []
    for v in labels:
        nb = g.adj[v]
        adj.append(mask_of(i for i, u in enumerate(labels) if nb >> u & 1))
    return UGraph._trusted(len(labels), tuple(adj)), labels


def build_layered_digraph(g: UGraph, layering: Layering) -> LayeredDigraph:
    """Orient the non-edges of ``g`` between layers from lower to higher layer index."""
    layering.check_against(g)
    arcs = set()
    layers = layering.layers
    for i, lower in enumerate(layers):
        for upper in layers[i + 1:]:
            for u in lower:
                for v in upper:
                    if not g.has_edge(u, v):
                        arcs.add((u, v))
    d = LayeredDigraph(g.n, layering, frozenset(arcs))
    layer_of = layering.layer_of()
    assert all(layer_of[u] < layer_of[v] for u, v in d.arcs), "backward arc in layered digraph"
    return d


def is_directed_path(d: Digraph | LayeredDigraph, seq: Sequence[int]) -> bool:
    try:
        seq = [int(v) for v in seq]
    except (TypeError, ValueError):
        return False
    if not seq or len(set(seq)) != len(seq):
        return False
    if isinstance(d, LayeredDigraph):
        verts = set(d.vertices())
        return all(v in verts for v in seq) and all(
            (a, b) in d.arcs for a, b in zip(seq, seq[1:])
        )
    if any(not 0 <= v < d.n for v in seq):
        return False
    return all(d.has_arc(a, b) for a, b in zip(seq, seq[1:]))
