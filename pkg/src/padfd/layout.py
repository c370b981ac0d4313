"""Deterministic placement for generated elements.

After the rewrite, the privacy elements have no positions. This pass
gives every unpositioned node one, derived from the geometry already in
the drawing: each limit sits at the midpoint of the hop it guards, its
request sits one grid step to the side (perpendicular to the data
direction), the log chain hangs below the limit, and the partner nodes
sit beside the element they serve. Nodes that already have a position
are never moved; occupied spots are resolved by stepping downward.
"""

from __future__ import annotations

import math
from dataclasses import replace

from . import model
from .graph import Diagram, NodeId
from .model import FlowType, NodeType

GRID_STEP = 80.0


def layout_generated(diagram: Diagram) -> Diagram:
    nodes = dict(diagram.nodes)
    occupied = {n.position for n in nodes.values() if n.position is not None}

    def place(node_id: NodeId, x: float, y: float) -> None:
        while (x, y) in occupied:
            y += GRID_STEP
        occupied.add((x, y))
        nodes[node_id] = replace(nodes[node_id], position=(x, y))

    def position(node_id: NodeId | None) -> tuple[float, float] | None:
        if node_id is None or node_id not in nodes:
            return None
        return nodes[node_id].position

    def unpositioned(node_type: NodeType) -> list[NodeId]:
        return sorted(
            n.id
            for n in nodes.values()
            if n.position is None and n.node_type is node_type
        )

    # Business nodes first, on a baseline row, so gadget geometry has
    # something to anchor to.
    column = 0
    for node_id in sorted(nodes):
        node = nodes[node_id]
        if node.position is None and node.node_type in model.BDFD_NODE_TYPES:
            place(node_id, column * 2 * GRID_STEP, 0.0)
            column += 1

    # Wiring indexes: which hop each limit guards, and the log chains.
    feeds_limit: dict[NodeId, NodeId] = {}
    guarded_target: dict[NodeId, NodeId] = {}
    log_source: dict[NodeId, NodeId] = {}
    log_db_source: dict[NodeId, NodeId] = {}
    clean_target: dict[NodeId, NodeId] = {}
    for flow in diagram.flows.values():
        if flow.flow_type in (FlowType.EXTLIM, FlowType.PROLIM, FlowType.DBLIM):
            feeds_limit[flow.target] = flow.source
        elif flow.flow_type in model.GUARDED_FLOW_TYPES:
            guarded_target[flow.source] = flow.target
        elif flow.flow_type is FlowType.LIMLOG:
            log_source[flow.target] = flow.source
        elif flow.flow_type is FlowType.LOGGING:
            log_db_source[flow.target] = flow.source
        elif flow.flow_type is FlowType.CLEDB_DEL:
            clean_target[flow.source] = flow.target

    def hop(limit_id: NodeId) -> tuple | None:
        start = position(feeds_limit.get(limit_id))
        end = position(guarded_target.get(limit_id))
        if start is None or end is None:
            return None
        return start, end

    for limit_id in unpositioned(NodeType.LIMIT):
        ends = hop(limit_id)
        if ends is None:
            place(limit_id, 0.0, 0.0)
            continue
        (ax, ay), (bx, by) = ends
        place(limit_id, (ax + bx) / 2, (ay + by) / 2)

    for request_id in unpositioned(NodeType.REQUEST):
        limit_id = nodes[request_id].partner
        anchor = position(limit_id)
        if anchor is None:
            place(request_id, 0.0, 0.0)
            continue
        ends = hop(limit_id)
        if ends is None:
            place(request_id, anchor[0], anchor[1] - GRID_STEP)
            continue
        (ax, ay), (bx, by) = ends
        dx, dy = bx - ax, by - ay
        norm = math.hypot(dx, dy) or 1.0
        place(
            request_id,
            anchor[0] + dy / norm * GRID_STEP,
            anchor[1] - dx / norm * GRID_STEP,
        )

    for log_id in unpositioned(NodeType.LOG):
        anchor = position(log_source.get(log_id))
        if anchor is None:
            place(log_id, 0.0, 0.0)
        else:
            place(log_id, anchor[0], anchor[1] + GRID_STEP)

    for log_db_id in unpositioned(NodeType.LOG_DB):
        anchor = position(log_db_source.get(log_db_id))
        if anchor is None:
            place(log_db_id, 0.0, 0.0)
        else:
            place(log_db_id, anchor[0], anchor[1] + GRID_STEP)

    for reason_id in unpositioned(NodeType.REASON):
        anchor = position(nodes[reason_id].partner)
        if anchor is None:
            place(reason_id, 0.0, 0.0)
        else:
            place(reason_id, anchor[0] + GRID_STEP, anchor[1] - GRID_STEP)

    for policy_db_id in unpositioned(NodeType.POLICY_DB):
        anchor = position(nodes[policy_db_id].partner)
        if anchor is None:
            place(policy_db_id, 0.0, 0.0)
        else:
            place(policy_db_id, anchor[0] + GRID_STEP, anchor[1] + GRID_STEP)

    for clean_id in unpositioned(NodeType.CLEAN):
        anchor = position(clean_target.get(clean_id))
        if anchor is None:
            place(clean_id, 0.0, 0.0)
        else:
            place(clean_id, anchor[0] + 2 * GRID_STEP, anchor[1] + GRID_STEP)

    # Anything left (untyped or unusual wiring) parks at the origin column.
    for node_id in sorted(nodes):
        if nodes[node_id].position is None:
            place(node_id, 0.0, 0.0)

    return replace(diagram, nodes=nodes)
