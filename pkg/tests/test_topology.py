import pytest

from divprotect.topology import (
    MM_PER_UNIT,
    Flow,
    Link,
    ScenarioError,
    Scenario,
    Topology,
    dump_scenario,
    load_scenario,
)
from helpers import load_fixture

FIXTURES = [
    "example2",
    "fig1-star",
    "cost239-reconstruction",
    "uslong-reconstruction",
    "synthetic-reconstruction",
]

TRIANGLE = """
topology:
  unit: km
  nodes:
    - {id: 0}
    - {id: 1}
    - {id: 2}
  links:
    - {a: 0, b: 1, distance: 1}
    - {a: 1, b: 2, distance: 2}
    - {a: 0, b: 2, distance: 2.5}
demands:
  - {src: 0, dst: 2}
"""


def test_unit_scales_are_exact_integers():
    assert MM_PER_UNIT["km"] == 1_000_000
    assert MM_PER_UNIT["mi"] == 1_609_344
    assert MM_PER_UNIT["10mi"] == 16_093_440


def test_load_triangle():
    sc = load_scenario(TRIANGLE)
    topo = sc.topology
    assert topo.n == 3
    assert topo.m == 3
    assert topo.unit == "km"
    assert [l.length_mm for l in topo.links] == [1_000_000, 2_000_000, 2_500_000]
    assert sc.demands == [Flow(0, 2, 1)]
    assert topo.degree(0) == 2
    assert list(topo.neighbors(0)) == [(1, 0), (2, 2)]
    assert topo.link_between(2, 1).id == 1
    assert topo.link_between(0, 0) is None


def test_link_endpoints_normalised():
    topo = Topology(3, [(2, 0, 5), (1, 2, 7), (0, 1, 3)])
    assert (topo.links[0].a, topo.links[0].b) == (0, 2)
    assert topo.links[0].other(0) == 2
    assert topo.links[0].other(2) == 0
    with pytest.raises(ValueError):
        topo.links[0].other(1)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_roundtrip_is_byte_identical(name):
    # each bundled fixture equals its own canonical dump, so dump(load(x)) == x
    from divprotect.cli import fixture_path

    with open(fixture_path(name), "r", encoding="utf-8") as fh:
        raw = fh.read()
    sc = load_scenario(raw)
    dumped = dump_scenario(sc)
    body = "".join(
        ln for ln in raw.splitlines(keepends=True) if not ln.startswith("#")
    )
    assert dumped == body
    assert dump_scenario(load_scenario(dumped)) == dumped


def test_fractional_distance_roundtrip():
    text = TRIANGLE.replace("distance: 2.5", "distance: 0.123456789")
    sc = load_scenario(text)
    assert sc.topology.links[2].length_mm == 123_457  # rounded to whole mm
    again = load_scenario(dump_scenario(sc))
    assert again.topology.links[2].length_mm == 123_457


def test_make_path_and_route():
    sc = load_fixture("example2")
    topo = sc.topology
    p = topo.make_path([0, 1, 3])
    assert p.links == (0, 1)
    assert p.length_mm == 4_000_000
    assert p.length_km == 4.0
    assert (p.src, p.dst, p.hops) == (0, 3, 2)
    with pytest.raises(ValueError):
        topo.make_path([0, 3])  # nonadjacent
    with pytest.raises(ValueError):
        topo.make_path([0, 1, 0])  # revisits a node

    r = topo.make_route([2, 1, 0, 4, 3])
    assert r.length_mm == 9_000_000
    assert r.tail_mm(2) == 9_000_000
    assert r.tail_mm(1) == 7_000_000
    assert r.tail_mm(0) == 6_000_000
    assert r.tail_mm(4) == 4_000_000
    assert r.tail_mm(3) == 0
    with pytest.raises(ValueError):
        r.tail_mm(9)
    with pytest.raises(ValueError):
        topo.make_route([0, 1, 0, 1])  # reuses link 0-1


@pytest.mark.parametrize(
    "mutate,phrase",
    [
        (lambda t: t.replace("unit: km", "unit: furlong"), "unknown unit"),
        (lambda t: t.replace("  unit: km\n", ""), "missing required field 'unit'"),
        (lambda t: t.replace("{id: 2}", "{id: 1}"), "duplicate node id"),
        (lambda t: t.replace("{id: 2}", "{id: 7}"), "ids must be exactly 0..2"),
        (lambda t: t.replace("distance: 2.5", "distance: 0"), "must be positive"),
        (lambda t: t.replace("distance: 2.5", "distance: -1"), "must be positive"),
        (lambda t: t.replace("distance: 2.5", "distance: fast"), "expected a number"),
        (lambda t: t.replace("{a: 0, b: 2", "{a: 0, b: 9"), "endpoint out of range"),
        (lambda t: t.replace("{a: 0, b: 2", "{a: 2, b: 2"), "self-loop"),
        (lambda t: t.replace("{a: 0, b: 2", "{a: 1, b: 0"), "duplicate span 0-1"),
        (lambda t: t.replace("{src: 0, dst: 2}", "{src: 0, dst: 0}"), "src and dst must differ"),
        (lambda t: t.replace("{src: 0, dst: 2}", "{src: 0, dst: 5}"), "endpoint out of range"),
        (lambda t: t.replace("{src: 0, dst: 2}", "{src: 0, dst: 2, rate: 0}"), "rate must be >= 1"),
        (lambda t: t.replace("{src: 0, dst: 2}", "{dst: 2}"), "missing required field 'src'"),
        (lambda t: t + "  - {src: 0, dst: 1, rate: 1.5}\n", "expected an integer"),
        (lambda t: t.replace("demands:\n  - {src: 0, dst: 2}\n", "demands: []\n"), "non-empty list"),
        (lambda t: "topology: 3\ndemands: []\n", "missing required field 'unit'"),
        (lambda t: "- just\n- a list\n", "must be a mapping"),
        (lambda t: "a: [unclosed\n", "not valid YAML"),
    ],
)
def test_scenario_errors_carry_context(mutate, phrase):
    with pytest.raises(ScenarioError) as err:
        load_scenario(mutate(TRIANGLE))
    assert phrase in str(err.value)


def test_disconnected_topology_rejected():
    text = TRIANGLE.replace("{id: 2}", "{id: 2}\n    - {id: 3}")
    with pytest.raises(ScenarioError) as err:
        load_scenario(text)
    assert "disconnected" in str(err.value)
    assert "3" in str(err.value)


def test_degree_one_node_warns_but_loads():
    text = """
topology:
  unit: km
  nodes: [{id: 0}, {id: 1}, {id: 2}, {id: 3, name: leaf}]
  links:
    - {a: 0, b: 1, distance: 1}
    - {a: 1, b: 2, distance: 1}
    - {a: 0, b: 2, distance: 1}
    - {a: 2, b: 3, distance: 1}
demands:
  - {src: 0, dst: 1}
"""
    sc = load_scenario(text)
    assert len(sc.topology.warnings) == 1
    assert "degree 1" in sc.topology.warnings[0]
    assert "leaf" in sc.topology.warnings[0]


def test_blocked_mask_accepts_ids_and_links():
    sc = load_fixture("example2")
    topo = sc.topology
    mask = topo.blocked_mask([0, topo.links[3]])
    assert list(mask) == [1, 0, 0, 1, 0, 0, 0]


def test_dump_quotes_names_only_when_needed():
    topo = Topology(
        2, [(0, 1, 1_000_000)], names={0: 'a "b"', 1: "Plain-name"}
    )
    sc = Scenario(topology=topo, demands=[Flow(0, 1, 1)], name="x: y")
    text = dump_scenario(sc)
    assert 'name: "x: y"' in text
    assert 'name: "a \\"b\\""' in text
    assert "name: Plain-name}" in text
    # strings that YAML would misread stay quoted
    topo = Topology(2, [(0, 1, 1_000_000)], names={0: "1", 1: "no"})
    text = dump_scenario(Scenario(topology=topo, demands=[Flow(0, 1, 1)]))
    assert 'name: "1"' in text
    assert 'name: "no"' in text
    again = load_scenario(text)
    assert again.topology.names == {0: "1", 1: "no"}
