"""Rewrite a well-formed diagram into its privacy-aware counterpart.

The rewrite runs in two phases. Phase one gives every process a reason
node and every data store a policy store plus a cleaning process. Phase
two replaces each data flow with a gadget: a limit node the data must
pass, a request node that gathers the consent evidence steering the
limit, and a log chain recording the decision. The original flow keeps
its id and label, is retyped, and is re-sourced at its limit, so nothing
ever dangles and callers can still address it.

Generated elements take ids "gen-0", "gen-1", ... skipping ids already in
use; allocation order is fixed (nodes in sorted id order, then flows in
sorted id order), so the rewrite is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    MissingPartnerError,
    StageError,
    UnknownElementError,
    WellFormednessError,
    WrongFlowTypeError,
)
from .graph import Diagram, Flow, FlowId, Node, NodeId
from .model import FlowType, NodeType, Stage
from .validate import validate_wellformed


@dataclass(frozen=True)
class GadgetAllocation:
    """Ids of the shared elements added for one flow's gadget."""

    limit: NodeId
    request: NodeId
    log: NodeId
    log_db: NodeId
    reqlim: FlowId
    limlog: FlowId
    logging: FlowId


class _FreshIds:
    """Deterministic generator of unused element ids."""

    def __init__(self, taken):
        self._taken = set(taken)
        self._next = 0

    def take(self) -> str:
        while True:
            candidate = f"gen-{self._next}"
            self._next += 1
            if candidate not in self._taken:
                self._taken.add(candidate)
                return candidate


_RETYPE: dict[FlowType, FlowType] = {
    FlowType.IN: FlowType.LIMPRO,
    FlowType.OUT: FlowType.LIMEXT,
    FlowType.COMP: FlowType.LIMPRO,
    FlowType.STORE: FlowType.LIMDB,
    FlowType.READ: FlowType.LIMPRO,
    FlowType.DELETE: FlowType.LIMDB_DEL,
}

# Gadget wiring by endpoint kind: how data enters the limit, and how the
# consent evidence on each side reaches the request node.
_DATA_IN: dict[NodeType, FlowType] = {
    NodeType.EXT: FlowType.EXTLIM,
    NodeType.PROC: FlowType.PROLIM,
    NodeType.DB: FlowType.DBLIM,
}
_SOURCE_POLICY: dict[NodeType, FlowType] = {
    NodeType.EXT: FlowType.EXTREQ,
    NodeType.PROC: FlowType.REAREQ,
    NodeType.DB: FlowType.PDBREQ,
}
_TARGET_POLICY: dict[NodeType, FlowType] = {
    NodeType.EXT: FlowType.REQEXT,
    NodeType.PROC: FlowType.REQREA,
    NodeType.DB: FlowType.REQPDB,
}

_GENERATED_LABELS: dict[NodeType, str] = {
    NodeType.LIMIT: "Limit",
    NodeType.REQUEST: "Request",
    NodeType.LOG: "Log",
    NodeType.LOG_DB: "Log store",
    NodeType.REASON: "Reason",
    NodeType.POLICY_DB: "Policy store",
    NodeType.CLEAN: "Clean",
}


def _fresh_ids(diagram: Diagram) -> _FreshIds:
    return _FreshIds(set(diagram.nodes) | set(diagram.flows))


def _make_node(node_id: NodeId, node_type: NodeType, partner: NodeId | None = None) -> Node:
    return Node(node_id, node_type, label=_GENERATED_LABELS[node_type], partner=partner)


def _guard_stage(diagram: Diagram, check: bool) -> None:
    if diagram.stage is Stage.PA:
        raise StageError("diagram is already privacy-aware; the rewrite is not idempotent")
    if check:
        validity = validate_wellformed(diagram)
        if not validity.valid:
            raise WellFormednessError(
                "diagram is not well-formed; rewrite refused", validity.violations
            )


def _add_partner_elems(nodes: dict, flows: dict, ids: _FreshIds, node_id: NodeId) -> None:
    node = nodes[node_id]
    if node.node_type is NodeType.PROC:
        reason_id = ids.take()
        nodes[reason_id] = _make_node(reason_id, NodeType.REASON, partner=node_id)
        nodes[node_id] = replace(node, partner=reason_id)
    elif node.node_type is NodeType.DB:
        policy_id = ids.take()
        clean_id = ids.take()
        to_clean = ids.take()
        clean_delete = ids.take()
        nodes[policy_id] = _make_node(policy_id, NodeType.POLICY_DB, partner=node_id)
        nodes[clean_id] = _make_node(clean_id, NodeType.CLEAN)
        nodes[node_id] = replace(node, partner=policy_id)
        flows[to_clean] = Flow(to_clean, policy_id, clean_id, FlowType.PDBCLE)
        flows[clean_delete] = Flow(clean_delete, clean_id, node_id, FlowType.CLEDB_DEL)


def add_partners(diagram: Diagram, *, check: bool = True) -> Diagram:
    """Phase one: attach a reason node to every process and a policy store
    plus cleaning process to every data store. Partner links are mutual."""
    _guard_stage(diagram, check)
    nodes = dict(diagram.nodes)
    flows = dict(diagram.flows)
    ids = _fresh_ids(diagram)
    for node_id in sorted(diagram.nodes):
        if nodes[node_id].partner is not None:
            raise MissingPartnerError(
                f"node {node_id!r} is already partnered; refusing to re-partner"
            )
        _add_partner_elems(nodes, flows, ids, node_id)
    return replace(diagram, nodes=nodes, flows=flows)


def _add_common(
    nodes: dict, flows: dict, ids: _FreshIds, flow_id: FlowId
) -> GadgetAllocation:
    flow = flows[flow_id]
    limit_id = ids.take()
    request_id = ids.take()
    log_id = ids.take()
    log_db_id = ids.take()
    nodes[limit_id] = _make_node(limit_id, NodeType.LIMIT, partner=request_id)
    nodes[request_id] = _make_node(request_id, NodeType.REQUEST, partner=limit_id)
    nodes[log_id] = _make_node(log_id, NodeType.LOG)
    nodes[log_db_id] = _make_node(log_db_id, NodeType.LOG_DB)
    reqlim_id = ids.take()
    limlog_id = ids.take()
    logging_id = ids.take()
    flows[reqlim_id] = Flow(reqlim_id, request_id, limit_id, FlowType.REQLIM)
    flows[limlog_id] = Flow(limlog_id, limit_id, log_id, FlowType.LIMLOG)
    flows[logging_id] = Flow(logging_id, log_id, log_db_id, FlowType.LOGGING)
    return GadgetAllocation(
        limit=limit_id,
        request=request_id,
        log=log_id,
        log_db=log_db_id,
        reqlim=reqlim_id,
        limlog=limlog_id,
        logging=logging_id,
    )


def add_common_elems(
    diagram: Diagram, flow_id: FlowId
) -> tuple[Diagram, GadgetAllocation]:
    """Add the elements every gadget shares: limit and request (mutual
    partners), the log chain, and the request -> limit steering flow."""
    if flow_id not in diagram.flows:
        raise UnknownElementError(f"no flow with id {flow_id!r}")
    nodes = dict(diagram.nodes)
    flows = dict(diagram.flows)
    allocation = _add_common(nodes, flows, _fresh_ids(diagram), flow_id)
    return replace(diagram, nodes=nodes, flows=flows), allocation


def _policy_anchor(nodes: dict, node_id: NodeId, flow_id: FlowId) -> NodeId:
    """Where consent evidence for a business node lives: external entities
    speak for themselves, processes via their reason, stores via their
    policy store."""
    node = nodes[node_id]
    if node.node_type is NodeType.EXT:
        return node_id
    if node.partner is None or node.partner not in nodes:
        raise MissingPartnerError(
            f"node {node_id!r} has no partner; run the partner phase before "
            f"rewriting flow {flow_id!r}"
        )
    return node.partner


def _rewrite_flow(nodes: dict, flows: dict, ids: _FreshIds, flow_id: FlowId) -> None:
    flow = flows[flow_id]
    source = nodes[flow.source]
    target = nodes[flow.target]
    allocation = _add_common(nodes, flows, ids, flow_id)

    data_in_id = ids.take()
    source_policy_id = ids.take()
    target_policy_id = ids.take()
    flows[data_in_id] = Flow(
        data_in_id,
        flow.source,
        allocation.limit,
        _DATA_IN[source.node_type],
        partner=source_policy_id,
    )
    flows[source_policy_id] = Flow(
        source_policy_id,
        _policy_anchor(nodes, flow.source, flow_id),
        allocation.request,
        _SOURCE_POLICY[source.node_type],
        partner=data_in_id,
    )
    flows[target_policy_id] = Flow(
        target_policy_id,
        allocation.request,
        _policy_anchor(nodes, flow.target, flow_id),
        _TARGET_POLICY[target.node_type],
        partner=flow_id,
    )
    flows[flow_id] = replace(
        flow,
        flow_type=_RETYPE[flow.flow_type],
        source=allocation.limit,
        partner=target_policy_id,
    )


def _rewrite_one(diagram: Diagram, flow_id: FlowId, expected: FlowType) -> Diagram:
    if flow_id not in diagram.flows:
        raise UnknownElementError(f"no flow with id {flow_id!r}")
    flow = diagram.flows[flow_id]
    if flow.flow_type is not expected:
        raise WrongFlowTypeError(
            f"flow {flow_id!r} has type "
            f"{flow.flow_type.value if flow.flow_type else None!r}, "
            f"expected {expected.value!r}"
        )
    nodes = dict(diagram.nodes)
    flows = dict(diagram.flows)
    _rewrite_flow(nodes, flows, _fresh_ids(diagram), flow_id)
    return replace(diagram, nodes=nodes, flows=flows)


def transform_in_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one entity -> process flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.IN)


def transform_out_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one process -> entity flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.OUT)


def transform_comp_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one inter-process flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.COMP)


def transform_store_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one process -> store flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.STORE)


def transform_read_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one store -> process flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.READ)


def transform_delete_flow(diagram: Diagram, flow_id: FlowId) -> Diagram:
    """Rewrite one deletion flow into its gadget."""
    return _rewrite_one(diagram, flow_id, FlowType.DELETE)


def transform(
    diagram: Diagram, *, shared_log_store: bool = False, check: bool = True
) -> Diagram:
    """Rewrite a well-formed diagram into a privacy-aware one.

    Every original element survives with id, label, and position intact;
    original flows are retyped and re-sourced at their limit. With
    ``check=False`` the well-formedness gate is skipped (the rewrite is
    still total on typed flows), which permits rewriting excerpts of
    larger diagrams. ``shared_log_store=True`` merges the per-flow log
    stores into one afterwards.
    """
    _guard_stage(diagram, check)
    nodes = dict(diagram.nodes)
    flows = dict(diagram.flows)
    ids = _fresh_ids(diagram)
    original_flows = sorted(diagram.flows)
    for node_id in sorted(diagram.nodes):
        _add_partner_elems(nodes, flows, ids, node_id)
    for flow_id in original_flows:
        if flows[flow_id].flow_type not in _RETYPE:
            raise WrongFlowTypeError(
                f"flow {flow_id!r} is not a well-formed data flow"
            )
        _rewrite_flow(nodes, flows, ids, flow_id)
    result = replace(diagram, stage=Stage.PA, nodes=nodes, flows=flows)
    if shared_log_store:
        result = merge_log_stores(result)
    return result


def merge_log_stores(diagram: Diagram) -> Diagram:
    """Merge all log stores into the first one (insertion order), retargeting
    every log -> store flow. Counting-law bookkeeping does not survive this."""
    log_dbs = [n.id for n in diagram.nodes.values() if n.node_type is NodeType.LOG_DB]
    if len(log_dbs) < 2:
        return diagram
    keep, *drop = log_dbs
    dropped = set(drop)
    nodes = {nid: n for nid, n in diagram.nodes.items() if nid not in dropped}
    flows = {
        fid: replace(f, target=keep)
        if f.flow_type is FlowType.LOGGING and f.target in dropped
        else f
        for fid, f in diagram.flows.items()
    }
    return replace(diagram, nodes=nodes, flows=flows)
