"""Text and JSON formats for graphs, digraphs, reports and verdicts.

Graph text format::

    n m
    u v        (m lines, 0 <= u < v < n, ascending lexicographic order)

Digraph files use the same layout with ordered arcs ``u v``. Layered digraphs
are JSON objects ``{"n", "k", "layers", "arcs"}``. Every report carries
``"schema": "1"`` and rejects unknown top-level fields; wall-clock numbers
live under ``"timing"`` only, which :func:`dumps` drops in canonical mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .construction import Check, ConstructionReport, Thresholds, WitnessCandidate
from .graphs import Digraph, LayeredDigraph, Layering, UGraph
from .random_model import MCEstimate, ParamSet
from .verifier import Counterexample, PathPartition, Verdict

SCHEMA = "1"


class FormatError(ValueError):
    pass


def format_graph(g: UGraph) -> str:
    edges = g.edges()
    return "".join([f"{g.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def format_digraph(d: Digraph) -> str:
    arcs = d.arcs()
    return "".join([f"{d.n} {len(arcs)}\n"] + [f"{u} {v}\n" for u, v in arcs])


def _parse_pairs(text: str) -> tuple[int, list[tuple[int, int]]]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file")
    try:
        n, m = (int(x) for x in lines[0].split())
        pairs = []
        for line in lines[1:]:
            if not line.strip():
                continue
            u, v = (int(x) for x in line.split())
            pairs.append((u, v))
    except ValueError as exc:
        raise FormatError(f"malformed line: {exc}") from None
    if n < 0 or len(pairs) != m:
        raise FormatError(f"header announces {m} pairs, found {len(pairs)}")
    if len(set(pairs)) != len(pairs):
        raise FormatError("duplicate pair")
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise FormatError(f"invalid pair {u} {v} for n={n}")
    return n, pairs


def parse_graph(text: str) -> UGraph:
    n, pairs = _parse_pairs(text)
    if any(u >= v for u, v in pairs):
        raise FormatError("graph edges must satisfy u < v")
    return UGraph.from_edges(n, pairs)


def parse_digraph(text: str) -> Digraph:
    n, pairs = _parse_pairs(text)
    return Digraph.from_arcs(n, pairs)


def layered_to_dict(d: LayeredDigraph) -> dict:
    return {"n": d.n, "k": d.k, "layers": [list(layer) for layer in d.layers],
            "arcs": [list(a) for a in d.sorted_arcs()]}


def layered_from_dict(data: dict) -> LayeredDigraph:
    _require_keys(data, {"n", "k", "layers", "arcs"}, optional={"schema"})
    try:
        n, k = int(data["n"]), int(data["k"])
        layering = Layering(tuple(tuple(int(v) for v in layer) for layer in data["layers"]), k)
        arcs = frozenset((int(u), int(v)) for u, v in data["arcs"])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed layered digraph: {exc}") from None
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise FormatError(f"invalid arc {u} {v}")
    if any(not 0 <= v < n for v in layering.vertices()):
        raise FormatError("layer vertex out of range")
    return LayeredDigraph(n, layering, arcs)


def _require_keys(data: Any, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(data, dict):
        raise FormatError("expected a JSON object")
    missing = required - set(data)
    extra = set(data) - required - set(optional)
    if missing:
        raise FormatError(f"missing fields: {sorted(missing)}")
    if extra:
        raise FormatError(f"unknown fields: {sorted(extra)}")


def dumps(obj: dict, canonical: bool = False) -> str:
    if canonical:
        obj = {key: val for key, val in obj.items() if key != "timing"}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class RunConfig:
    """Flags a command ran with, stored in its report."""

    command: str
    options: dict = field(default_factory=dict)
    version: str = SCHEMA

    def to_dict(self) -> dict:
        return {"command": self.command, "options": dict(self.options), "version": self.version}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        _require_keys(data, {"command", "options", "version"})
        if data["version"] != SCHEMA:
            raise FormatError(f"unsupported config version {data['version']!r}")
        return cls(data["command"], dict(data["options"]), data["version"])

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def estimate_to_dict(est: MCEstimate, extra: dict | None = None) -> dict:
    out = {"schema": SCHEMA, **est.to_dict()}
    if extra:
        out.update(extra)
    return out


def counterexample_to_dict(cx: Counterexample | None) -> dict | None:
    if cx is None:
        return None
    return {"paths": [list(p) for p in cx.paths], "remaining": list(cx.remaining),
            "remaining_stability": cx.remaining_stability, "stable_witness": list(cx.stable_witness)}


def counterexample_from_dict(data: dict | None) -> Counterexample | None:
    if data is None:
        return None
    _require_keys(data, {"paths", "remaining", "remaining_stability", "stable_witness"})
    return Counterexample(tuple(tuple(p) for p in data["paths"]), tuple(data["remaining"]),
                          int(data["remaining_stability"]), tuple(data["stable_witness"]))


VERDICT_KEYS = {"schema", "outcome", "k", "method", "budget", "work", "alpha",
                "counterexample", "reason", "disjoint"}


def verdict_to_dict(v: Verdict) -> dict:
    return {"schema": SCHEMA, "outcome": v.outcome, "k": v.k, "method": v.method, "budget": v.budget,
            "work": v.work, "alpha": v.alpha, "counterexample": counterexample_to_dict(v.counterexample),
            "reason": v.reason, "disjoint": v.disjoint}


def verdict_from_dict(data: dict) -> Verdict:
    _require_keys(data, VERDICT_KEYS, optional={"config", "timing"})
    return Verdict(data["outcome"], int(data["k"]), data["method"], data["budget"], int(data["work"]),
                   data["alpha"], counterexample_from_dict(data["counterexample"]), data["reason"],
                   bool(data["disjoint"]))


def partition_to_dict(p: PathPartition) -> dict:
    return {"schema": SCHEMA, "count": len(p.paths), "paths": [list(x) for x in p.paths],
            "stable_witness": list(p.stable_witness)}


def partition_from_dict(data: dict) -> PathPartition:
    _require_keys(data, {"schema", "count", "paths", "stable_witness"}, optional={"config", "timing"})
    paths = tuple(tuple(int(v) for v in x) for x in data["paths"])
    if len(paths) != data["count"]:
        raise FormatError("path count does not match the path list")
    return PathPartition(paths, tuple(data["stable_witness"]))


def _candidate_to_dict(c: WitnessCandidate) -> dict:
    return {
        "attempt": c.attempt,
        "g": format_graph(c.g),
        "deleted": list(c.deleted),
        "g_prime": None if c.g_prime is None else format_graph(c.g_prime),
        "g_prime_labels": list(c.g_prime_labels),
        "layering": None if c.layering is None else {"k": c.layering.k, "layers": [list(x) for x in c.layering.layers]},
        "d": None if c.d is None else layered_to_dict(c.d),
        "stage_stats": dict(c.stage_stats),
    }


def _candidate_from_dict(data: dict, params: ParamSet) -> WitnessCandidate:
    _require_keys(data, {"attempt", "g", "deleted", "g_prime", "g_prime_labels", "layering", "d", "stage_stats"})
    lay = data["layering"]
    return WitnessCandidate(
        params,
        int(data["attempt"]),
        parse_graph(data["g"]),
        tuple(data["deleted"]),
        None if data["g_prime"] is None else parse_graph(data["g_prime"]),
        tuple(data["g_prime_labels"]),
        None if lay is None else Layering(tuple(tuple(x) for x in lay["layers"]), int(lay["k"])),
        None if data["d"] is None else layered_from_dict(data["d"]),
        dict(data["stage_stats"]),
    )


REPORT_KEYS = {"schema", "kind", "params", "thresholds", "max_attempts", "success", "candidate",
               "checks", "attempts", "timing"}


def report_to_dict(r: ConstructionReport, config: RunConfig | None = None) -> dict:
    out = {
        "schema": SCHEMA,
        "kind": "construction",
        "params": r.params.to_dict(),
        "thresholds": r.thresholds.to_dict(),
        "max_attempts": r.max_attempts,
        "success": r.success,
        "candidate": _candidate_to_dict(r.candidate),
        "checks": [{"name": c.name, "status": c.status, "reason": c.reason} for c in r.checks],
        "attempts": [dict(a) for a in r.attempts],
        "timing": dict(r.timing),
    }
    if config is not None:
        out["config"] = config.to_dict()
    return out


def report_from_dict(data: dict) -> ConstructionReport:
    _require_keys(data, REPORT_KEYS - {"timing"}, optional={"timing", "config"})
    if data["schema"] != SCHEMA or data["kind"] != "construction":
        raise FormatError("not a version-1 construction report")
    params = ParamSet.from_dict(data["params"])
    return ConstructionReport(
        params,
        Thresholds.from_dict(data["thresholds"]),
        int(data["max_attempts"]),
        bool(data["success"]),
        _candidate_from_dict(data["candidate"], params),
        tuple(Check(c["name"], c["status"], c["reason"]) for c in data["checks"]),
        tuple(dict(a) for a in data["attempts"]),
        dict(data.get("timing", {})),
    )


def load_digraph(path: str | Path) -> Digraph | LayeredDigraph:
    """Digraph text file, layered-digraph JSON, or a construction report (its ``d``)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
        if isinstance(data, dict) and data.get("kind") == "construction":
            d = report_from_dict(data).candidate.d
            if d is None:
                raise FormatError("report has no layered digraph")
            return d
        return layered_from_dict(data)
    return parse_digraph(text)
