"""Flow typing for raw diagrams.

Every plain flow between business nodes has at most one well-formed
reading, determined by its endpoint kinds; deletion flows only make sense
from a process into a data store. The checker infers those readings,
verifies the connectivity rules, and either produces the well-formed
diagram or a report of everything wrong. Rule ids:

    pf-no-rule           plain flow between endpoint kinds with no reading
    pf-loop              plain flow from a process to itself
    df-no-rule           deletion flow not running process -> data store
    proc-source-target   process missing an incoming or outgoing flow
    ext-connected        external entity with no flow at all
    db-connected         data store with no flow at all
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum, unique

from .errors import StageError, WellFormednessError
from .graph import Diagram, Node, sources, targets
from .model import FlowType, NodeType, Stage
from .validate import validate_raw


@unique
class DiagnosticKind(str, Enum):
    FLOW = "ill-formed-flow"
    ACTIVATOR = "ill-formed-activator"


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    element: str
    rule: str
    message: str

    def render(self) -> str:
        return f"error {self.element} {self.rule}: {self.message}"


_PF_READINGS: dict[tuple[NodeType, NodeType], FlowType] = {
    (NodeType.EXT, NodeType.PROC): FlowType.IN,
    (NodeType.PROC, NodeType.EXT): FlowType.OUT,
    (NodeType.PROC, NodeType.PROC): FlowType.COMP,
    (NodeType.PROC, NodeType.DB): FlowType.STORE,
    (NodeType.DB, NodeType.PROC): FlowType.READ,
}


def infer_flow_type(
    source_type: NodeType,
    target_type: NodeType,
    raw_type: FlowType,
    is_loop: bool = False,
) -> FlowType | None:
    """Well-formed reading of a raw flow, or None when it has none.

    ``is_loop`` marks flows whose source and target are the same node;
    the inter-process reading requires two distinct processes.
    """
    if raw_type is FlowType.PF:
        inferred = _PF_READINGS.get((source_type, target_type))
        if inferred is FlowType.COMP and is_loop:
            return None
        return inferred
    if raw_type is FlowType.DF:
        if (source_type, target_type) == (NodeType.PROC, NodeType.DB):
            return FlowType.DELETE
        return None
    raise ValueError(f"not a raw flow type: {raw_type!r}")


def check_activator(
    node: Node, is_source: bool, is_target: bool
) -> Diagnostic | None:
    """Connectivity rule for one node: processes must relay data, external
    entities and data stores must attach to at least one flow."""
    if node.node_type is NodeType.PROC and not (is_source and is_target):
        missing = []
        if not is_target:
            missing.append("incoming")
        if not is_source:
            missing.append("outgoing")
        return Diagnostic(
            DiagnosticKind.ACTIVATOR,
            node.id,
            "proc-source-target",
            f"process {node.id!r} has no {' or '.join(missing)} flow",
        )
    if node.node_type is NodeType.EXT and not (is_source or is_target):
        return Diagnostic(
            DiagnosticKind.ACTIVATOR,
            node.id,
            "ext-connected",
            f"external entity {node.id!r} has no flows",
        )
    if node.node_type is NodeType.DB and not (is_source or is_target):
        return Diagnostic(
            DiagnosticKind.ACTIVATOR,
            node.id,
            "db-connected",
            f"data store {node.id!r} has no flows",
        )
    return None


def _flow_diagnostic(flow, source_type: NodeType, target_type: NodeType) -> Diagnostic:
    pair = f"{source_type.value} -> {target_type.value}"
    if flow.flow_type is FlowType.PF:
        if (source_type, target_type) == (NodeType.PROC, NodeType.PROC):
            return Diagnostic(
                DiagnosticKind.FLOW,
                flow.id,
                "pf-loop",
                f"flow {flow.id!r} loops on process {flow.source!r}; "
                "inter-process flows need two distinct processes",
            )
        return Diagnostic(
            DiagnosticKind.FLOW,
            flow.id,
            "pf-no-rule",
            f"plain flow {flow.id!r} runs {pair}; no flow kind reads that",
        )
    return Diagnostic(
        DiagnosticKind.FLOW,
        flow.id,
        "df-no-rule",
        f"deletion flow {flow.id!r} runs {pair}; deletion must run proc -> db",
    )


def typecheck(diagram: Diagram) -> tuple[Diagram | None, list[Diagnostic]]:
    """Type every flow and check connectivity.

    Returns the well-formed diagram and an empty list on success, or
    (None, diagnostics) when anything is ill-formed. Diagnostics are
    sorted by element id, then rule. The input must be a valid raw
    diagram; anything else raises.
    """
    if diagram.stage is not Stage.RAW:
        raise StageError(f"typecheck expects a raw diagram, got {diagram.stage.value}")
    validity = validate_raw(diagram)
    if not validity.valid:
        raise WellFormednessError("not a valid raw diagram", validity.violations)

    diagnostics: list[Diagnostic] = []
    typed_flows = {}
    for flow in diagram.flows.values():
        source_type = diagram.nodes[flow.source].node_type
        target_type = diagram.nodes[flow.target].node_type
        inferred = infer_flow_type(
            source_type, target_type, flow.flow_type, flow.source == flow.target
        )
        if inferred is None:
            diagnostics.append(_flow_diagnostic(flow, source_type, target_type))
        else:
            typed_flows[flow.id] = replace(flow, flow_type=inferred)

    is_source = sources(diagram)
    is_target = targets(diagram)
    for node in diagram.nodes.values():
        diagnostic = check_activator(
            node, node.id in is_source, node.id in is_target
        )
        if diagnostic is not None:
            diagnostics.append(diagnostic)

    diagnostics.sort(key=lambda d: (d.element, d.rule))
    if diagnostics:
        return None, diagnostics
    return replace(diagram, stage=Stage.WELLFORMED, flows=typed_flows), []
