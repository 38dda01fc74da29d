"""Spare capacity, restoration time, and quality-of-recovery scoring."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class RtParams:
    """Timing constants for restoration-time accounting.

    Defaults: 100 us failure detection, 100 us per-node message
    processing, 1 ms switch reconfiguration, and signal propagation at
    200 km/ms (typical for fibre).
    """

    detect_s: float = 100e-6
    node_proc_s: float = 100e-6
    switch_s: float = 1e-3
    prop_speed_km_s: float = 2.0e5

    def with_switch(self, switch_s: float) -> "RtParams":
        return replace(self, switch_s=switch_s)


@dataclass(frozen=True)
class FailureGeometry:
    """Distances and hop counts that set one flow's restoration time.

    upstream_* describe the path from the failure-adjacent node back to
    the acting node (the source for rerouting; for cycles the detour arc
    itself is the acting chain). notify_delay_s is the propagation from
    the break point to the nearest detecting node, taken at worst case
    (mid-span failure). parity_skew_s is how much later the parity copy
    arrives than the lost working signal did.
    """

    backup_hops: int = 0
    upstream_hops: int = 0
    prot_delay_s: float = 0.0
    upstream_delay_s: float = 0.0
    notify_delay_s: float = 0.0
    parity_skew_s: float = 0.0


def rt_sr(g: FailureGeometry, p: RtParams) -> float:
    """Source rerouting: notify the source, then signal the backup path
    switches there and back before traffic resumes."""
    return (
        p.detect_s
        + g.upstream_delay_s
        + (g.upstream_hops + 1) * p.node_proc_s
        + (g.backup_hops + 1) * p.switch_s
        + 3 * g.prot_delay_s
        + 3 * (g.backup_hops + 1) * p.node_proc_s
        + g.notify_delay_s
    )


def rt_pc(g: FailureGeometry, p: RtParams) -> float:
    """Protection cycles: the two end nodes of the failed span switch
    onto the pre-configured detour."""
    return (
        p.detect_s
        + (g.upstream_hops + 1) * p.node_proc_s
        + 2 * p.switch_s
        + g.prot_delay_s
        + g.notify_delay_s
    )


def rt_dc(g: FailureGeometry, p: RtParams) -> float:
    """Parity decode: no switching, no signalling round trips; the
    destination just waits out the arrival skew of the parity copy."""
    return p.detect_s + 2 * p.node_proc_s + g.parity_skew_s


def scp(total_capacity_mm: int, shortest_working_mm: int) -> float:
    """Spare capacity percentage over the shortest-path working floor."""
    return 100.0 * (total_capacity_mm - shortest_working_mm) / shortest_working_mm


def q_rt(rt_s: float) -> float:
    """Restoration-time quality; 0.5 at 50 ms, approaching 1 for hitless."""
    return 1.0 / (1.0 + 400.0 * rt_s * rt_s)


def q_scp(scp_pct: float) -> float:
    """Capacity-overhead quality; 0.5 at 100% extra capacity."""
    x = scp_pct / 100.0
    return 1.0 / (1.0 + x * x * x)


def qor(scp_pct: float, rt_s: float) -> float:
    """Quality of recovery: restoration speed weighted twice against
    capacity overhead."""
    return (2.0 * q_rt(rt_s) + q_scp(scp_pct)) / 3.0


@dataclass
class SchemeResult:
    """Headline numbers for one scheme on one scenario."""

    scheme: str
    scp_pct: float
    rt_s: dict[float, float]
    qor: dict[float, float]
    partial: bool = False
