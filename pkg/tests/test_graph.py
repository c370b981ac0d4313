from __future__ import annotations

import pytest

from padfd import (
    Diagram,
    DuplicateIdError,
    Flow,
    FlowType,
    Node,
    NodeType,
    PartnerError,
    UnknownElementError,
    UnknownEndpointError,
    add_flow,
    add_node,
    link_partners,
    sources,
    targets,
)


def _pair() -> Diagram:
    d = Diagram()
    d = add_node(d, Node("a", NodeType.EXT))
    d = add_node(d, Node("b", NodeType.PROC))
    return d


def test_add_node_inserts_and_preserves_original():
    empty = Diagram()
    d = add_node(empty, Node("a", NodeType.EXT, label="A"))
    assert d.nodes["a"].label == "A"
    assert empty.nodes == {}


def test_add_node_rejects_duplicate_id():
    d = _pair()
    with pytest.raises(DuplicateIdError):
        add_node(d, Node("a", NodeType.DB))


def test_add_flow_requires_existing_endpoints():
    d = _pair()
    with pytest.raises(UnknownEndpointError):
        add_flow(d, Flow("f", "a", "zzz", FlowType.PF))
    with pytest.raises(UnknownEndpointError):
        add_flow(d, Flow("f", "zzz", "b", FlowType.PF))


def test_add_flow_rejects_duplicate_id():
    d = add_flow(_pair(), Flow("f", "a", "b", FlowType.PF))
    with pytest.raises(DuplicateIdError):
        add_flow(d, Flow("f", "b", "a", FlowType.PF))


def test_parallel_flows_and_self_loops_are_representable():
    d = _pair()
    d = add_flow(d, Flow("f1", "a", "b", FlowType.PF))
    d = add_flow(d, Flow("f2", "a", "b", FlowType.PF))
    d = add_flow(d, Flow("loop", "b", "b", FlowType.PF))
    assert len(d.flows) == 3
    assert d.flows["loop"].source == d.flows["loop"].target == "b"


def test_sources_and_targets():
    d = _pair()
    assert sources(d) == set() and targets(d) == set()
    d = add_flow(d, Flow("f", "a", "b", FlowType.PF))
    assert sources(d) == {"a"}
    assert targets(d) == {"b"}
    assert len(sources(d) | targets(d)) <= len(d.nodes)


def test_absent_attributes_are_distinct_from_values():
    node = Node("a", None)
    assert node.node_type is None and node.label is None and node.position is None
    assert node != Node("a", None, label="")


def test_link_partners_nodes_mutual():
    d = _pair()
    d = link_partners(d, "a", "b")
    assert d.nodes["a"].partner == "b"
    assert d.nodes["b"].partner == "a"


def test_link_partners_flows_mutual():
    d = _pair()
    d = add_flow(d, Flow("f1", "a", "b", FlowType.PF))
    d = add_flow(d, Flow("f2", "b", "a", FlowType.PF))
    d = link_partners(d, "f1", "f2")
    assert d.flows["f1"].partner == "f2"
    assert d.flows["f2"].partner == "f1"


def test_link_partners_is_an_involution_guard():
    d = link_partners(_pair(), "a", "b")
    with pytest.raises(PartnerError):
        link_partners(d, "a", "b")


def test_link_partners_rejects_self_and_unknown():
    d = _pair()
    with pytest.raises(PartnerError):
        link_partners(d, "a", "a")
    with pytest.raises(UnknownElementError):
        link_partners(d, "a", "zzz")


def test_link_partners_ambiguous_ids_need_kind():
    d = _pair()
    d = add_flow(d, Flow("a", "a", "b", FlowType.PF))
    d = add_flow(d, Flow("b", "b", "a", FlowType.PF))
    with pytest.raises(PartnerError):
        link_partners(d, "a", "b")
    linked = link_partners(d, "a", "b", kind="flow")
    assert linked.flows["a"].partner == "b"
    assert linked.nodes["a"].partner is None


def test_node_and_flow_lookups():
    d = add_flow(_pair(), Flow("f", "a", "b", FlowType.PF))
    assert d.node("a").id == "a"
    assert d.flow("f").target == "b"
    with pytest.raises(UnknownElementError):
        d.node("zzz")
    with pytest.raises(UnknownElementError):
        d.flow("zzz")
