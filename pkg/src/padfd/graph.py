"""Attributed multigraph substrate shared by every diagram stage.

A diagram holds nodes and flows (directed edges) keyed by id. Parallel
flows and self-loops are allowed; endpoint existence is enforced on
insertion. All attributes are optional so that an absent attribute stays
distinguishable from any concrete value. Mutation helpers are pure: they
return a new Diagram and never touch their argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

from .errors import (
    DuplicateIdError,
    PartnerError,
    UnknownElementError,
    UnknownEndpointError,
)
from .model import FlowType, NodeType, Stage

NodeId = str
FlowId = str


@dataclass(frozen=True)
class Node:
    """A diagram node.

    Attributes:
        id: Unique within the diagram's node map.
        node_type: Semantic kind, or None for an untyped element.
        label: Display name shown in diagram renderings.
        partner: Id of the node this one is coupled with (symmetric).
        position: Canvas coordinates, or None when never laid out.
        extra: Unrecognised attributes carried through from an input
            document; treated as opaque strings and echoed on output.
    """

    id: NodeId
    node_type: NodeType | None = None
    label: str | None = None
    partner: NodeId | None = None
    position: tuple[float, float] | None = None
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Flow:
    """A directed flow between two nodes.

    Source and target are node ids; multiple flows may share the same
    endpoints. Partner couples a data flow with its policy companion.
    """

    id: FlowId
    source: NodeId
    target: NodeId
    flow_type: FlowType | None = None
    label: str | None = None
    partner: FlowId | None = None
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Diagram:
    """An attributed multigraph tagged with its lifecycle stage."""

    stage: Stage = Stage.RAW
    nodes: dict[NodeId, Node] = field(default_factory=dict)
    flows: dict[FlowId, Flow] = field(default_factory=dict)

    def node(self, node_id: NodeId) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownElementError(f"no node with id {node_id!r}") from None

    def flow(self, flow_id: FlowId) -> Flow:
        try:
            return self.flows[flow_id]
        except KeyError:
            raise UnknownElementError(f"no flow with id {flow_id!r}") from None


def add_node(diagram: Diagram, node: Node) -> Diagram:
    """Return a copy of the diagram with the node inserted."""
    if node.id in diagram.nodes:
        raise DuplicateIdError(f"node id {node.id!r} already in use")
    return replace(diagram, nodes={**diagram.nodes, node.id: node})


def add_flow(diagram: Diagram, flow: Flow) -> Diagram:
    """Return a copy of the diagram with the flow inserted.

    Both endpoints must already exist; self-loops are representable.
    """
    if flow.id in diagram.flows:
        raise DuplicateIdError(f"flow id {flow.id!r} already in use")
    for endpoint in (flow.source, flow.target):
        if endpoint not in diagram.nodes:
            raise UnknownEndpointError(
                f"flow {flow.id!r} references missing node {endpoint!r}"
            )
    return replace(diagram, flows={**diagram.flows, flow.id: flow})


def sources(diagram: Diagram) -> set[NodeId]:
    """Ids of nodes with at least one outgoing flow."""
    return {flow.source for flow in diagram.flows.values()}


def targets(diagram: Diagram) -> set[NodeId]:
    """Ids of nodes with at least one incoming flow."""
    return {flow.target for flow in diagram.flows.values()}


def link_partners(
    diagram: Diagram,
    first: str,
    second: str,
    kind: Literal["node", "flow"] | None = None,
) -> Diagram:
    """Couple two nodes or two flows as mutual partners.

    Both elements must exist, be of the same kind, be distinct, and be
    unpartnered. When an id names both a node and a flow, pass ``kind``
    to disambiguate.
    """
    if first == second:
        raise PartnerError(f"cannot partner {first!r} with itself")
    if kind is None:
        as_nodes = first in diagram.nodes and second in diagram.nodes
        as_flows = first in diagram.flows and second in diagram.flows
        if as_nodes and as_flows:
            raise PartnerError(
                f"ids {first!r}, {second!r} are ambiguous; pass kind="
            )
        if as_nodes:
            kind = "node"
        elif as_flows:
            kind = "flow"
        else:
            raise UnknownElementError(
                f"no node or flow pair named {first!r}, {second!r}"
            )
    table = diagram.nodes if kind == "node" else diagram.flows
    for element_id in (first, second):
        if element_id not in table:
            raise UnknownElementError(f"no {kind} with id {element_id!r}")
        if table[element_id].partner is not None:
            raise PartnerError(f"{kind} {element_id!r} is already partnered")
    updated = {
        **table,
        first: replace(table[first], partner=second),
        second: replace(table[second], partner=first),
    }
    if kind == "node":
        return replace(diagram, nodes=updated)
    return replace(diagram, flows=updated)
