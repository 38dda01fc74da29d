"""Protection plan model shared by all three schemes, plus serialization.

A plan pins, for every operative flow, its working path and whatever
recovery structure protects it: a parity group, a dedicated or shared
backup path, or a set of protection cycles. Capacity is accounted per
link as integral working and spare unit counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import routing
from .topology import Flow, Path, Route, Topology

SCHEME_DC = "dc"
SCHEME_SR = "sr"
SCHEME_PC = "pc"

SCHEME_LABELS = {
    SCHEME_DC: "diversity coding",
    SCHEME_SR: "source rerouting",
    SCHEME_PC: "p-cycles",
}


@dataclass(frozen=True)
class CodingGroup:
    """Flows whose working paths are protected by one XOR parity route.

    All flows terminate at ``decode_node``; the parity route taps every
    distinct source once and is link-disjoint from the working paths.
    """

    flow_ids: tuple[int, ...]
    working: tuple[Path, ...]
    parity: Route
    decode_node: int

    @property
    def size(self) -> int:
        return len(self.flow_ids)


@dataclass(frozen=True)
class BackupPair:
    """Dedicated (1+1) or shared backup path for a single flow."""

    flow_id: int
    working: Path
    backup: Path


@dataclass(frozen=True)
class CycleSelection:
    """A protection cycle and how many unit copies of it were bought."""

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    length_mm: int
    copies: int


@dataclass
class ProtectionPlan:
    scheme: str
    flows: tuple[Flow, ...]
    demand_idx: tuple[int, ...]
    working_paths: tuple[Path, ...]
    working_cap: np.ndarray
    spare_cap: np.ndarray
    groups: tuple[CodingGroup, ...] = ()
    pairs: tuple[BackupPair, ...] = ()
    cycles: tuple[CycleSelection, ...] = ()
    unprotected: tuple[int, ...] = ()

    @property
    def partial(self) -> bool:
        return len(self.unprotected) > 0

    def working_capacity_mm(self, topo: Topology) -> int:
        return int(np.dot(self.working_cap, topo.link_mm))

    def spare_capacity_mm(self, topo: Topology) -> int:
        return int(np.dot(self.spare_cap, topo.link_mm))

    def total_capacity_mm(self, topo: Topology) -> int:
        return self.working_capacity_mm(topo) + self.spare_capacity_mm(topo)


def split_unit_flows(demand) -> tuple[tuple[Flow, ...], tuple[int, ...]]:
    """Expand demand rows into unit-rate subflows, preserving order."""
    flows = []
    idx = []
    for i, f in enumerate(demand):
        for _ in range(f.rate):
            flows.append(Flow(f.src, f.dst, 1))
            idx.append(i)
    return tuple(flows), tuple(idx)


def shortest_working_capacity_mm(topo: Topology, demand) -> int:
    """Capacity-distance of routing every demand on its shortest path.

    This is the no-protection floor that spare-capacity percentages are
    measured against.
    """
    total = 0
    cache: dict[tuple[int, int], int] = {}
    for f in demand:
        key = (f.src, f.dst)
        if key not in cache:
            p = routing.shortest_path(topo, f.src, f.dst)
            if p is None:  # pragma: no cover - topologies are connected
                raise ValueError(f"no route {f.src}->{f.dst}")
            cache[key] = p.length_mm
        total += f.rate * cache[key]
    return total


def _path_doc(p) -> str:
    nodes = ", ".join(str(v) for v in p.nodes)
    links = ", ".join(str(l) for l in p.links)
    return f"{{nodes: [{nodes}], links: [{links}]}}"


def recovery_actions(plan: ProtectionPlan, topo: Topology) -> dict[int, list[dict]]:
    """Per failed link id: what each affected flow does to survive.

    This is exactly the information the failure sweep executes; it is
    included in serialized plans so an operator can audit recovery
    without running the simulator.
    """
    actions: dict[int, list[dict]] = {}

    def add(lid, entry):
        actions.setdefault(lid, []).append(entry)

    for gi, g in enumerate(plan.groups):
        for fid, w in zip(g.flow_ids, g.working):
            for lid in w.links:
                add(lid, {"flow": fid, "mechanism": "decode", "group": gi})
    for pi, pair in enumerate(plan.pairs):
        mech = "switch-dedicated" if plan.scheme == SCHEME_DC else "switch-shared"
        for lid in pair.working.links:
            add(lid, {"flow": pair.flow_id, "mechanism": mech, "pair": pi})
    if plan.scheme == SCHEME_PC:
        for fid, w in enumerate(plan.working_paths):
            if w is None:
                continue
            for lid in w.links:
                cys = [
                    ci
                    for ci, sel in enumerate(plan.cycles)
                    if lid in sel.links
                    or (
                        topo.links[lid].a in sel.nodes
                        and topo.links[lid].b in sel.nodes
                    )
                ]
                add(lid, {"flow": fid, "mechanism": "cycle-detour", "cycles": cys})
    for lid in actions:
        actions[lid].sort(key=lambda e: e["flow"])
    return actions


def serialize_plan(plan: ProtectionPlan, topo: Topology) -> str:
    """Canonical byte-stable plan document (YAML subset)."""
    out = []
    out.append(f"scheme: {plan.scheme}")
    out.append(f"partial: {'true' if plan.partial else 'false'}")
    out.append("flows:")
    for f, di in zip(plan.flows, plan.demand_idx):
        out.append(f"  - {{src: {f.src}, dst: {f.dst}, rate: {f.rate}, demand: {di}}}")
    out.append("working_paths:")
    for fid, p in enumerate(plan.working_paths):
        if p is None:
            out.append(f"  - {{flow: {fid}, unrouted: true}}")
        else:
            out.append(f"  - {{flow: {fid}, path: {_path_doc(p)}}}")
    if plan.groups:
        out.append("groups:")
        for g in plan.groups:
            out.append(f"  - decode_node: {g.decode_node}")
            out.append(f"    flows: [{', '.join(str(i) for i in g.flow_ids)}]")
            out.append("    working:")
            for p in g.working:
                out.append(f"      - {_path_doc(p)}")
            out.append(f"    parity: {_path_doc(g.parity)}")
    if plan.pairs:
        key = "aps_pairs" if plan.scheme == SCHEME_DC else "backups"
        out.append(f"{key}:")
        for pair in plan.pairs:
            out.append(f"  - flow: {pair.flow_id}")
            out.append(f"    working: {_path_doc(pair.working)}")
            out.append(f"    backup: {_path_doc(pair.backup)}")
    if plan.cycles:
        out.append("cycles:")
        for sel in plan.cycles:
            out.append(f"  - {{nodes: [{', '.join(str(v) for v in sel.nodes)}], "
                       f"links: [{', '.join(str(l) for l in sel.links)}], copies: {sel.copies}}}")
    if plan.unprotected:
        out.append(f"unprotected: [{', '.join(str(i) for i in plan.unprotected)}]")
    out.append(f"working_cap: [{', '.join(str(int(x)) for x in plan.working_cap)}]")
    out.append(f"spare_cap: [{', '.join(str(int(x)) for x in plan.spare_cap)}]")
    acts = recovery_actions(plan, topo)
    out.append("recovery:")
    for lid in range(topo.m):
        rows = acts.get(lid, [])
        if not rows:
            out.append(f"  - {{link: {lid}, actions: []}}")
            continue
        out.append(f"  - link: {lid}")
        out.append("    actions:")
        for e in rows:
            parts = [f"flow: {e['flow']}", f"mechanism: {e['mechanism']}"]
            if "group" in e:
                parts.append(f"group: {e['group']}")
            if "pair" in e:
                parts.append(f"pair: {e['pair']}")
            if "cycles" in e:
                parts.append(f"cycles: [{', '.join(str(c) for c in e['cycles'])}]")
            out.append(f"      - {{{', '.join(parts)}}}")
    return "\n".join(out) + "\n"
