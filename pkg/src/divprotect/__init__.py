"""Single-link-failure protection planning and evaluation.

Three schemes over one topology/demand model: XOR parity groups with a
threshold-sweep planner, shared-backup source rerouting, and greedy
protection cycles, plus a failure sweep that scores spare capacity,
restoration time, and quality of recovery.
"""

from .coding import (
    SearchParams,
    algorithm_one,
    decode_matrix,
    find_group,
    redundancy_ratio,
    verify_decodable,
)
from .failsim import FailureReport, sweep, xor_stream_check
from .gf2 import Gf2Matrix
from .metrics import (
    FailureGeometry,
    RtParams,
    SchemeResult,
    q_rt,
    q_scp,
    qor,
    rt_dc,
    rt_pc,
    rt_sr,
    scp,
)
from .pcycle import Cycle, apriori_efficiency, enumerate_cycles, pc_design
from .plan import (
    SCHEME_DC,
    SCHEME_PC,
    SCHEME_SR,
    BackupPair,
    CodingGroup,
    CycleSelection,
    ProtectionPlan,
    serialize_plan,
    shortest_working_capacity_mm,
    split_unit_flows,
)
from .routing import (
    disjoint_path_pair,
    disjoint_routes,
    path_delay,
    shortest_path,
)
from .source_reroute import sr_design
from .topology import (
    Flow,
    Link,
    Path,
    Route,
    Scenario,
    ScenarioError,
    Topology,
    dump_scenario,
    load_scenario,
    load_topology,
)

__version__ = "0.1.0"
