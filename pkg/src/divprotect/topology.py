"""Mesh topology model and scenario file round-tripping.

Distances are stored internally as integer millimetres so that length
comparisons and tie detection are exact; the public accessors report
kilometres. Scenario files declare their own distance unit.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np
import yaml

# Millimetres per declared file unit. "10mi" shows up in older long-haul
# studies whose span tables are given in tens of miles.
MM_PER_UNIT = {
    "km": 1_000_000,
    "mi": 1_609_344,
    "10mi": 16_093_440,
}

KM_PER_MM = 1e-6


class ScenarioError(ValueError):
    """Raised when a scenario document fails parsing or validation."""


@dataclass(frozen=True)
class Link:
    """Undirected span between two nodes. Endpoints satisfy a < b."""

    id: int
    a: int
    b: int
    length_mm: int

    @property
    def distance_km(self) -> float:
        return self.length_mm * KM_PER_MM

    def other(self, node: int) -> int:
        if node == self.a:
            return self.b
        if node == self.b:
            return self.a
        raise ValueError(f"node {node} is not an endpoint of link {self.id}")


@dataclass(frozen=True)
class Flow:
    """A unidirectional demand of integer rate between two nodes."""

    src: int
    dst: int
    rate: int = 1


@dataclass(frozen=True)
class Path:
    """Simple path; nodes and links are aligned (len(links) == len(nodes)-1)."""

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    length_mm: int

    @property
    def src(self) -> int:
        return self.nodes[0]

    @property
    def dst(self) -> int:
        return self.nodes[-1]

    @property
    def hops(self) -> int:
        return len(self.links)

    @property
    def length_km(self) -> float:
        return self.length_mm * KM_PER_MM


@dataclass(frozen=True)
class Route:
    """Walk that may revisit nodes but never reuses a link.

    Used for parity trails that tap several sources on the way to a
    decode point; ``tail_mm`` measures from a tap to the end.
    """

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    length_mm: int
    seg_mm: tuple[int, ...] = ()

    @property
    def src(self) -> int:
        return self.nodes[0]

    @property
    def dst(self) -> int:
        return self.nodes[-1]

    @property
    def length_km(self) -> float:
        return self.length_mm * KM_PER_MM

    def tail_mm(self, node: int) -> int:
        """Distance from the first visit of ``node`` to the route end."""
        walked = 0
        for i, v in enumerate(self.nodes):
            if v == node:
                return self.length_mm - walked
            walked += self.seg_mm[i]
        raise ValueError(f"node {node} not on route")


class Topology:
    """Connected undirected graph with positive integer-mm span lengths.

    Exposes CSR adjacency (sorted by neighbour id) for the routing
    kernels plus convenience lookups for everything else.
    """

    def __init__(
        self,
        n: int,
        links: list[tuple[int, int, int]],
        unit: str = "km",
        names: dict[int, str] | None = None,
    ):
        if unit not in MM_PER_UNIT:
            raise ScenarioError(f"unknown distance unit {unit!r}")
        if n < 2:
            raise ScenarioError("topology needs at least two nodes")
        self.n = n
        self.unit = unit
        self.names = dict(names or {})
        self.links: list[Link] = []
        seen: dict[tuple[int, int], int] = {}
        for idx, (a, b, mm) in enumerate(links):
            if not (0 <= a < n and 0 <= b < n):
                raise ScenarioError(f"link {idx}: endpoint out of range")
            if a == b:
                raise ScenarioError(f"link {idx}: self-loop at node {a}")
            if mm <= 0:
                raise ScenarioError(f"link {idx}: distance must be positive")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ScenarioError(
                    f"link {idx}: duplicate span {key[0]}-{key[1]} (first at link {seen[key]})"
                )
            seen[key] = idx
            self.links.append(Link(idx, key[0], key[1], int(mm)))
        self.m = len(self.links)
        if self.m == 0:
            raise ScenarioError("topology has no links")
        self._link_by_pair = {(l.a, l.b): l for l in self.links}

        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for l in self.links:
            adj[l.a].append((l.b, l.id))
            adj[l.b].append((l.a, l.id))
        for row in adj:
            row.sort()
        self.adj_indptr = np.zeros(n + 1, dtype=np.int64)
        self.adj_node = np.zeros(2 * self.m, dtype=np.int64)
        self.adj_link = np.zeros(2 * self.m, dtype=np.int64)
        k = 0
        for v in range(n):
            for nbr, lid in adj[v]:
                self.adj_node[k] = nbr
                self.adj_link[k] = lid
                k += 1
            self.adj_indptr[v + 1] = k
        self.link_mm = np.array([l.length_mm for l in self.links], dtype=np.int64)
        for arr in (self.adj_indptr, self.adj_node, self.adj_link, self.link_mm):
            arr.setflags(write=False)

        self.warnings: list[str] = []
        self._validate_connectivity()
        for v in range(n):
            if self.degree(v) == 1:
                lid = int(self.adj_link[self.adj_indptr[v]])
                self.warnings.append(
                    f"node {self.label(v)} has degree 1; link {lid} cannot be protected"
                )

    @property
    def unit_scale(self) -> float:
        """Kilometres per declared file unit."""
        return MM_PER_UNIT[self.unit] * KM_PER_MM

    def label(self, v: int) -> str:
        name = self.names.get(v)
        return f"{v} ({name})" if name else str(v)

    def degree(self, v: int) -> int:
        return int(self.adj_indptr[v + 1] - self.adj_indptr[v])

    def neighbors(self, v: int):
        """Yield (neighbor, link_id) sorted by neighbor id."""
        for k in range(self.adj_indptr[v], self.adj_indptr[v + 1]):
            yield int(self.adj_node[k]), int(self.adj_link[k])

    def link_between(self, a: int, b: int) -> Link | None:
        return self._link_by_pair.get((min(a, b), max(a, b)))

    def blocked_mask(self, excluded=()) -> np.ndarray:
        mask = np.zeros(self.m, dtype=np.uint8)
        for e in excluded:
            lid = e.id if isinstance(e, Link) else int(e)
            mask[lid] = 1
        return mask

    def make_path(self, nodes: list[int]) -> Path:
        """Build a Path from a node sequence; links must all exist."""
        links = []
        total = 0
        for u, v in zip(nodes, nodes[1:]):
            l = self.link_between(u, v)
            if l is None:
                raise ValueError(f"no link {u}-{v}")
            links.append(l.id)
            total += l.length_mm
        if len(set(nodes)) != len(nodes):
            raise ValueError("path revisits a node")
        return Path(tuple(nodes), tuple(links), total)

    def make_route(self, nodes: list[int]) -> Route:
        """Build a Route from a node walk; links must exist and not repeat."""
        links = []
        segs = []
        total = 0
        for u, v in zip(nodes, nodes[1:]):
            l = self.link_between(u, v)
            if l is None:
                raise ValueError(f"no link {u}-{v}")
            links.append(l.id)
            segs.append(l.length_mm)
            total += l.length_mm
        if len(set(links)) != len(links):
            raise ValueError("route reuses a link")
        segs.append(0)
        return Route(tuple(nodes), tuple(links), total, tuple(segs))

    def _validate_connectivity(self) -> None:
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for w, _ in self.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if not seen.all():
            missing = [self.label(v) for v in np.nonzero(~seen)[0][:5]]
            raise ScenarioError(f"topology is disconnected; unreachable nodes: {', '.join(missing)}")

    @classmethod
    def from_edge_list(cls, edges, unit: str = "km", names=None) -> "Topology":
        """edges: iterable of (a, b, distance in `unit`)."""
        mm = MM_PER_UNIT[unit] if unit in MM_PER_UNIT else None
        if mm is None:
            raise ScenarioError(f"unknown distance unit {unit!r}")
        n = 0
        rows = []
        for a, b, d in edges:
            n = max(n, a + 1, b + 1)
            rows.append((a, b, int(round(d * mm))))
        return cls(n, rows, unit=unit, names=names)


@dataclass
class Scenario:
    """A topology plus its demand rows, as read from one document."""

    topology: Topology
    demands: list[Flow]
    name: str = ""
    reconstructed: bool = False


def _req(mapping, key, ctx):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ScenarioError(f"{ctx}: missing required field {key!r}")
    return mapping[key]


def _as_int(value, ctx):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{ctx}: expected an integer, got {value!r}")
    return value


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (YAML)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ScenarioError(f"scenario is not valid YAML{where}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")

    topo_doc = _req(doc, "topology", "scenario")
    unit = _req(topo_doc, "unit", "topology")
    nodes_doc = _req(topo_doc, "nodes", "topology")
    links_doc = _req(topo_doc, "links", "topology")
    if not isinstance(nodes_doc, list) or not nodes_doc:
        raise ScenarioError("topology.nodes: expected a non-empty list")
    if not isinstance(links_doc, list) or not links_doc:
        raise ScenarioError("topology.links: expected a non-empty list")
    if unit not in MM_PER_UNIT:
        raise ScenarioError(
            f"topology.unit: unknown unit {unit!r} (expected one of {sorted(MM_PER_UNIT)})"
        )
    mm_per = MM_PER_UNIT[unit]

    ids = set()
    names: dict[int, str] = {}
    for i, nd in enumerate(nodes_doc):
        ctx = f"topology.nodes[{i}]"
        nid = _as_int(_req(nd, "id", ctx), ctx + ".id")
        if nid in ids:
            raise ScenarioError(f"{ctx}: duplicate node id {nid}")
        ids.add(nid)
        if "name" in nd:
            names[nid] = str(nd["name"])
    n = len(ids)
    if ids != set(range(n)):
        raise ScenarioError(f"topology.nodes: ids must be exactly 0..{n - 1}")

    rows = []
    for i, ld in enumerate(links_doc):
        ctx = f"topology.links[{i}]"
        a = _as_int(_req(ld, "a", ctx), ctx + ".a")
        b = _as_int(_req(ld, "b", ctx), ctx + ".b")
        dist = _req(ld, "distance", ctx)
        if isinstance(dist, bool) or not isinstance(dist, (int, float)):
            raise ScenarioError(f"{ctx}.distance: expected a number, got {dist!r}")
        mm = int(round(float(dist) * mm_per))
        if mm <= 0:
            raise ScenarioError(f"{ctx}.distance: must be positive, got {dist!r}")
        rows.append((a, b, mm))

    try:
        topo = Topology(n, rows, unit=unit, names=names)
    except ScenarioError as exc:
        raise ScenarioError(f"topology: {exc}") from None

    demands_doc = _req(doc, "demands", "scenario")
    if not isinstance(demands_doc, list) or not demands_doc:
        raise ScenarioError("demands: expected a non-empty list")
    demands = []
    for i, dd in enumerate(demands_doc):
        ctx = f"demands[{i}]"
        src = _as_int(_req(dd, "src", ctx), ctx + ".src")
        dst = _as_int(_req(dd, "dst", ctx), ctx + ".dst")
        rate = _as_int(dd.get("rate", 1), ctx + ".rate")
        if not (0 <= src < n and 0 <= dst < n):
            raise ScenarioError(f"{ctx}: endpoint out of range 0..{n - 1}")
        if src == dst:
            raise ScenarioError(f"{ctx}: src and dst must differ")
        if rate < 1:
            raise ScenarioError(f"{ctx}: rate must be >= 1")
        demands.append(Flow(src, dst, rate))

    return Scenario(
        topology=topo,
        demands=demands,
        name=str(doc.get("name", "")),
        reconstructed=bool(doc.get("reconstructed", False)),
    )


def load_topology(text: str) -> Topology:
    """Parse a scenario document and return just its topology."""
    return load_scenario(text).topology


# names that YAML would reparse as the same string can stay bare
_BARE_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_.-]*\Z")
_YAML_WORDS = {"true", "false", "null", "yes", "no", "on", "off", "none"}


def _fmt_name(s: str) -> str:
    if _BARE_NAME.match(s) and s.lower() not in _YAML_WORDS:
        return s
    return json.dumps(s)


def _fmt_distance(mm: int, unit: str) -> str:
    value = mm / MM_PER_UNIT[unit]
    if value == int(value):
        return str(int(value))
    s = f"{value:.9f}".rstrip("0").rstrip(".")
    return s


def dump_scenario(sc: Scenario) -> str:
    """Serialize a scenario to its canonical byte-stable form."""
    topo = sc.topology
    out = []
    if sc.name:
        out.append(f"name: {_fmt_name(sc.name)}")
    if sc.reconstructed:
        out.append("reconstructed: true")
    out.append("topology:")
    out.append(f"  unit: {topo.unit}")
    out.append("  nodes:")
    for v in range(topo.n):
        if v in topo.names:
            out.append(f"    - {{id: {v}, name: {_fmt_name(topo.names[v])}}}")
        else:
            out.append(f"    - {{id: {v}}}")
    out.append("  links:")
    for l in topo.links:
        d = _fmt_distance(l.length_mm, topo.unit)
        out.append(f"    - {{a: {l.a}, b: {l.b}, distance: {d}}}")
    out.append("demands:")
    for f in sc.demands:
        out.append(f"  - {{src: {f.src}, dst: {f.dst}, rate: {f.rate}}}")
    return "\n".join(out) + "\n"
